/*******************************************************************************
 * Address abstraction: reduced product of a finite powerset of address
 * constants (or Top) with a sender relation recording whether the value is
 * exactly the caller's address or definitely a different one. The sender
 * relation is generation-tagged: each abstract call gets a fresh sender
 * generation, so equalities never leak across calls of a multi-call
 * sequence. Bottom in either component collapses the whole value.
 ******************************************************************************/

#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <set>
#include <string>

namespace michelstat {

enum class addr_cmp { definitely_eq, definitely_ne, unknown };

class addr_abs {
  public:
    enum class srel { bot, is_sender, not_sender, any };

    addr_abs() : consts_top_(true), rel_(srel::any) {} // top

    static addr_abs top() { return addr_abs(); }
    static addr_abs bottom() {
        addr_abs a;
        a.consts_top_ = false;
        a.rel_ = srel::bot;
        return a;
    }
    static addr_abs of_const(std::string addr) {
        addr_abs a;
        a.consts_top_ = false;
        a.consts_.insert(std::move(addr));
        return a;
    }
    static addr_abs sender(uint64_t gen) {
        addr_abs a;
        a.rel_ = srel::is_sender;
        a.gen_ = gen;
        return a;
    }

    bool is_bottom() const {
        return rel_ == srel::bot || (!consts_top_ && consts_.empty());
    }
    bool is_top() const { return consts_top_ && rel_ == srel::any; }
    bool consts_known() const { return !consts_top_; }
    const std::set<std::string>& consts() const { return consts_; }
    srel rel() const { return rel_; }
    uint64_t gen() const { return gen_; }

    bool is_sender_of(uint64_t gen) const {
        return rel_ == srel::is_sender && gen_ == gen;
    }

    addr_abs with_rel(srel r, uint64_t gen) const {
        addr_abs out = *this;
        out.rel_ = r;
        out.gen_ = gen;
        return out;
    }
    addr_abs without_const(const std::string& c) const {
        if (consts_top_) return *this;
        addr_abs out = *this;
        out.consts_.erase(c);
        return out;
    }

    bool leq(const addr_abs& o) const {
        if (is_bottom()) return true;
        if (o.is_bottom()) return false;
        if (!o.consts_top_) {
            if (consts_top_) return false;
            if (!std::includes(o.consts_.begin(), o.consts_.end(), consts_.begin(),
                               consts_.end()))
                return false;
        }
        if (o.rel_ != srel::any && !(rel_ == o.rel_ && gen_ == o.gen_)) return false;
        return true;
    }
    bool operator==(const addr_abs& o) const { return leq(o) && o.leq(*this); }

    addr_abs join(const addr_abs& o) const {
        if (is_bottom()) return o;
        if (o.is_bottom()) return *this;
        addr_abs out;
        out.consts_top_ = consts_top_ || o.consts_top_;
        if (!out.consts_top_) {
            out.consts_ = consts_;
            out.consts_.insert(o.consts_.begin(), o.consts_.end());
        }
        if (rel_ == o.rel_ && gen_ == o.gen_) {
            out.rel_ = rel_;
            out.gen_ = gen_;
        } else {
            out.rel_ = srel::any;
        }
        return out;
    }

    addr_abs meet(const addr_abs& o) const {
        if (is_bottom() || o.is_bottom()) return bottom();
        addr_abs out;
        out.consts_top_ = consts_top_ && o.consts_top_;
        if (!out.consts_top_) {
            if (consts_top_) out.consts_ = o.consts_;
            else if (o.consts_top_) out.consts_ = consts_;
            else
                std::set_intersection(consts_.begin(), consts_.end(), o.consts_.begin(),
                                      o.consts_.end(),
                                      std::inserter(out.consts_, out.consts_.begin()));
        }
        if (rel_ == srel::any) {
            out.rel_ = o.rel_;
            out.gen_ = o.gen_;
        } else if (o.rel_ == srel::any || (rel_ == o.rel_ && gen_ == o.gen_)) {
            out.rel_ = rel_;
            out.gen_ = gen_;
        } else {
            return bottom();
        }
        if (out.is_bottom()) return bottom();
        return out;
    }

    // Finite powersets cannot grow forever: an unstable constant set jumps
    // to Top.
    addr_abs widen(const addr_abs& o) const {
        addr_abs out = join(o);
        if (!consts_top_ && !out.consts_top_ && out.consts_ != consts_ && !is_bottom())
            out.consts_top_ = true;
        return out;
    }

    std::string to_string() const {
        if (is_bottom()) return "_|_";
        std::string out;
        if (consts_top_) {
            out = "T";
        } else {
            out = "{";
            bool first = true;
            for (const auto& c : consts_) {
                if (!first) out += ", ";
                out += "\"" + c + "\"";
                first = false;
            }
            out += "}";
        }
        if (rel_ == srel::is_sender) out += " (= $sender)";
        if (rel_ == srel::not_sender) out += " (!= $sender)";
        return out;
    }

  private:
    bool consts_top_;
    std::set<std::string> consts_;
    srel rel_ = srel::any;
    uint64_t gen_ = 0;
};

// Three-valued comparison of two abstract addresses under sender
// generation `gen` (only same-generation sender facts apply).
inline addr_cmp addr_compare(const addr_abs& a, const addr_abs& b) {
    if (a.is_bottom() || b.is_bottom()) return addr_cmp::unknown;
    if (a.consts_known() && b.consts_known() && a.consts().size() == 1 &&
        b.consts().size() == 1 && *a.consts().begin() == *b.consts().begin())
        return addr_cmp::definitely_eq;
    if (a.rel() == addr_abs::srel::is_sender && b.rel() == addr_abs::srel::is_sender &&
        a.gen() == b.gen())
        return addr_cmp::definitely_eq;
    if (a.consts_known() && b.consts_known()) {
        std::set<std::string> inter;
        std::set_intersection(a.consts().begin(), a.consts().end(), b.consts().begin(),
                              b.consts().end(), std::inserter(inter, inter.begin()));
        if (inter.empty()) return addr_cmp::definitely_ne;
    }
    if (a.gen() == b.gen() &&
        ((a.rel() == addr_abs::srel::is_sender && b.rel() == addr_abs::srel::not_sender) ||
         (a.rel() == addr_abs::srel::not_sender && b.rel() == addr_abs::srel::is_sender)))
        return addr_cmp::definitely_ne;
    return addr_cmp::unknown;
}

struct addr_pair {
    addr_abs a;
    addr_abs b;
};

inline addr_pair addr_assume_eq(const addr_abs& a, const addr_abs& b) {
    addr_abs m = a.meet(b);
    return {m, m};
}

inline addr_pair addr_assume_ne(const addr_abs& a, const addr_abs& b) {
    if (addr_compare(a, b) == addr_cmp::definitely_eq)
        return {addr_abs::bottom(), addr_abs::bottom()};
    addr_abs na = a, nb = b;
    // sender-relation refinement
    if (b.rel() == addr_abs::srel::is_sender) {
        if (na.rel() == addr_abs::srel::is_sender && na.gen() == b.gen())
            return {addr_abs::bottom(), addr_abs::bottom()};
        if (na.rel() == addr_abs::srel::any) na = na.with_rel(addr_abs::srel::not_sender, b.gen());
    }
    if (a.rel() == addr_abs::srel::is_sender) {
        if (nb.rel() == addr_abs::srel::is_sender && nb.gen() == a.gen())
            return {addr_abs::bottom(), addr_abs::bottom()};
        if (nb.rel() == addr_abs::srel::any) nb = nb.with_rel(addr_abs::srel::not_sender, a.gen());
    }
    // singleton constant exclusion
    if (b.consts_known() && b.consts().size() == 1 && na.consts_known())
        na = na.without_const(*b.consts().begin());
    if (a.consts_known() && a.consts().size() == 1 && nb.consts_known())
        nb = nb.without_const(*a.consts().begin());
    if (na.is_bottom() || nb.is_bottom()) return {addr_abs::bottom(), addr_abs::bottom()};
    return {na, nb};
}

} // namespace michelstat
