/*******************************************************************************
 * Value-domain interface and the interval environment (box) domain.
 *
 * A numeric domain maps abstract cells to value abstractions and supports
 * the usual lattice operations plus assignment, condition assumption,
 * forgetting and renaming. itv_env is the canonical non-relational model:
 * a finite map cell -> interval where absent cells mean "unconstrained".
 * Cells bound to Bottom are meaningful (empty container summaries); the
 * whole-environment Bottom flag is set only through contradictory assumes.
 ******************************************************************************/

#pragma once

#include <concepts>
#include <map>
#include <optional>

#include "michelstat/cells.hpp"
#include "michelstat/interval.hpp"

namespace michelstat {

// A primitive condition "x rel y" or "x rel constant-interval".
struct cond {
    cmp_rel rel;
    cell_var x;
    std::optional<cell_var> y;
    interval k = interval::top();
};

template <class D>
concept numeric_domain = requires(D d, const D cd, cell_var v, interval i, cond c) {
    { D::bottom() } -> std::same_as<D>;
    { D::top() } -> std::same_as<D>;
    { cd.is_bottom() } -> std::same_as<bool>;
    { cd.leq(cd) } -> std::same_as<bool>;
    { cd.join(cd) } -> std::same_as<D>;
    { cd.meet(cd) } -> std::same_as<D>;
    { cd.widen(cd) } -> std::same_as<D>;
    { d.assign(v, i) };
    { d.assume(c) };
    { d.forget(v) };
    { d.rename(v, v) };
};

class itv_env {
  public:
    static itv_env bottom() {
        itv_env e;
        e.bottom_ = true;
        return e;
    }
    static itv_env top() { return itv_env(); }

    bool is_bottom() const { return bottom_; }

    interval get(const cell_var& v) const {
        if (bottom_) return interval::bottom();
        auto it = m_.find(v);
        return it == m_.end() ? interval::top() : it->second;
    }

    // Plain store; a Bottom value here denotes an empty summary, not an
    // unreachable state.
    void set(const cell_var& v, const interval& i) {
        if (bottom_) return;
        if (i.is_top()) m_.erase(v);
        else m_.insert_or_assign(v, i);
    }
    void assign(const cell_var& v, const interval& i) { set(v, i); }

    void forget(const cell_var& v) { m_.erase(v); }

    void rename(const cell_var& from, const cell_var& to) {
        if (bottom_ || from == to) return;
        auto it = m_.find(from);
        if (it == m_.end()) {
            m_.erase(to);
            return;
        }
        interval i = std::move(it->second);
        m_.erase(it);
        m_.insert_or_assign(to, std::move(i));
    }

    // Refines through the condition; contradictions make the whole
    // environment Bottom.
    void assume(const cond& c) {
        if (bottom_) return;
        interval x = get(c.x);
        interval y = c.y ? get(*c.y) : c.k;
        itv_refined r = itv_assume(c.rel, x, y);
        if (r.x.is_bottom() || r.y.is_bottom()) {
            *this = bottom();
            return;
        }
        set(c.x, r.x);
        if (c.y) set(*c.y, r.y);
    }

    bool leq(const itv_env& o) const {
        if (bottom_) return true;
        if (o.bottom_) return false;
        for (const auto& [v, i] : o.m_)
            if (!get(v).leq(i)) return false;
        return true;
    }

    bool operator==(const itv_env& o) const {
        if (bottom_ || o.bottom_) return bottom_ == o.bottom_;
        return m_ == o.m_;
    }

    itv_env join(const itv_env& o) const {
        if (bottom_) return o;
        if (o.bottom_) return *this;
        itv_env out;
        for (const auto& [v, i] : m_) {
            auto it = o.m_.find(v);
            if (it != o.m_.end()) out.set(v, i | it->second);
        }
        return out;
    }

    itv_env meet(const itv_env& o) const {
        if (bottom_ || o.bottom_) return bottom();
        itv_env out = *this;
        for (const auto& [v, i] : o.m_) out.set(v, out.get(v) & i);
        return out;
    }

    itv_env widen(const itv_env& o) const {
        if (bottom_) return o;
        if (o.bottom_) return *this;
        itv_env out;
        for (const auto& [v, i] : m_) {
            auto it = o.m_.find(v);
            if (it != o.m_.end()) out.set(v, i.widen(it->second));
        }
        return out;
    }

    itv_env narrow(const itv_env& o) const {
        if (bottom_ || o.bottom_) return bottom();
        itv_env out = *this;
        for (auto& [v, i] : out.m_) {
            auto it = o.m_.find(v);
            if (it != o.m_.end()) i = i.narrow(it->second);
        }
        return out;
    }

    const std::map<cell_var, interval>& entries() const { return m_; }

    // Moves every binding under root `from` to root `to` (paths preserved).
    void rename_root(uint64_t from, uint64_t to) {
        if (bottom_ || from == to) return;
        auto it = m_.lower_bound(cell_var{from, {}});
        std::vector<std::pair<cell_var, interval>> moved;
        while (it != m_.end() && it->first.root == from) {
            moved.push_back({cell_var{to, it->first.p}, std::move(it->second)});
            it = m_.erase(it);
        }
        for (auto& [v, i] : moved) m_.insert_or_assign(std::move(v), std::move(i));
    }

    void forget_root(uint64_t root) {
        auto it = m_.lower_bound(cell_var{root, {}});
        while (it != m_.end() && it->first.root == root) it = m_.erase(it);
    }

  private:
    bool bottom_ = false;
    std::map<cell_var, interval> m_;
};

static_assert(numeric_domain<itv_env>);

} // namespace michelstat
