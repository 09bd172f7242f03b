#include "michelstat/abstract_state.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace michelstat {

presence presence_join(presence a, presence b) {
    if (a == presence::p_bot) return b;
    if (b == presence::p_bot) return a;
    if (a == b) return a;
    return presence::p_maybe;
}

static bool presence_leq(presence a, presence b) {
    return a == presence::p_bot || a == b || b == presence::p_maybe;
}

const char* presence_name(presence p) {
    switch (p) {
    case presence::p_bot: return "bot";
    case presence::p_absent: return "absent";
    case presence::p_present: return "present";
    case presence::p_maybe: return "maybe";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// abs_call

abs_call abs_call::join(const abs_call& o) const {
    abs_call out = *this;
    out.target = target.join(o.target);
    out.amount = amount | o.amount;
    std::map<path, interval> num;
    for (const auto& [p, i] : arg_num) {
        auto it = o.arg_num.find(p);
        if (it != o.arg_num.end()) num.emplace(p, i | it->second);
    }
    out.arg_num = std::move(num);
    std::map<path, addr_abs> addr;
    for (const auto& [p, a] : arg_addr) {
        auto it = o.arg_addr.find(p);
        if (it != o.arg_addr.end()) addr.emplace(p, a.join(it->second));
    }
    out.arg_addr = std::move(addr);
    return out;
}

static bool call_same(const abs_call& a, const abs_call& b) {
    if (!(a.target == b.target) || a.amount != b.amount) return false;
    if (a.arg_num != b.arg_num) return false;
    if (a.arg_addr.size() != b.arg_addr.size()) return false;
    for (const auto& [p, x] : a.arg_addr) {
        auto it = b.arg_addr.find(p);
        if (it == b.arg_addr.end() || !(x == it->second)) return false;
    }
    if ((a.param_ty == nullptr) != (b.param_ty == nullptr)) return false;
    if (a.param_ty && !type_eq(a.param_ty, b.param_ty)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// helpers

static void walk_map_nodes(const mtype_ptr& ty, const path& prefix, const decompose_opts& d,
                           const std::function<void(const path&, const mtype_ptr&)>& fn) {
    switch (ty->ctor) {
    case type_ctor::t_pair: {
        path f = prefix;
        f.push_back(step::fst);
        walk_map_nodes(ty->args[0], f, d, fn);
        path s = prefix;
        s.push_back(step::snd);
        walk_map_nodes(ty->args[1], s, d, fn);
        break;
    }
    case type_ctor::t_option: {
        path c = prefix;
        c.push_back(step::some_content);
        walk_map_nodes(ty->args[0], c, d, fn);
        break;
    }
    case type_ctor::t_or: {
        path l = prefix;
        l.push_back(step::left_content);
        walk_map_nodes(ty->args[0], l, d, fn);
        path r = prefix;
        r.push_back(step::right_content);
        walk_map_nodes(ty->args[1], r, d, fn);
        break;
    }
    case type_ctor::t_list: {
        if (ty->args[0]->ctor == type_ctor::t_operation) break;
        path e = prefix;
        e.push_back(step::list_elems);
        walk_map_nodes(ty->args[0], e, d, fn);
        break;
    }
    case type_ctor::t_map: {
        fn(prefix, ty);
        if (!is_split_map(ty, d)) {
            path v = prefix;
            v.push_back(step::map_vals);
            walk_map_nodes(ty->args[1], v, d, fn);
        }
        break;
    }
    default: break;
    }
}

static uint64_t site_key(const span& s) {
    return (uint64_t(uint32_t(s.line)) << 32) | uint32_t(s.col);
}

// ---------------------------------------------------------------------------
// construction

abstract_state::abstract_state() : abstract_state(options{}) {}

abstract_state::abstract_state(options opts)
    : opts_(opts),
      next_root_(std::make_shared<uint64_t>(reserved_root::first_free)),
      next_group_(std::make_shared<uint64_t>(1)) {}

abstract_state abstract_state::make_bottom() { return make_bottom(options{}); }

abstract_state abstract_state::make_bottom(options opts) {
    abstract_state s(opts);
    s.bottom_ = true;
    return s;
}

void abstract_state::set_bottom() {
    std::vector<slot> st = stack_; // shape kept so joins still align
    auto nr = next_root_;
    auto ng = next_group_;
    uint64_t gen = sender_gen_;
    *this = abstract_state(opts_);
    next_root_ = nr;
    next_group_ = ng;
    sender_gen_ = gen;
    stack_ = std::move(st);
    bottom_ = true;
}

uint64_t abstract_state::fresh_root() { return (*next_root_)++; }
uint64_t abstract_state::fresh_group() { return (*next_group_)++; }

uint64_t abstract_state::group_of(const cell_var& map_cell) const {
    auto it = groups_.find(map_cell);
    return it == groups_.end() ? 0 : it->second;
}

void abstract_state::set_group(const cell_var& map_cell, uint64_t g) {
    groups_[map_cell] = g;
}

// ---------------------------------------------------------------------------
// object-level cell manipulation

void abstract_state::top_object(uint64_t root, const path& prefix, const mtype_ptr& ty) {
    for (const leaf& l : decompose(ty, dopts())) {
        cell_var c{root, prefix};
        c = c.sub(l.p);
        if (is_numeric_kind(l.kind)) {
            num_.set(c, kind_range(l.kind));
        } else if (l.kind == cell_kind::ck_address) {
            addrs_.erase(c);
        } else if (l.kind == cell_kind::ck_string) {
            strs_.erase(c);
        } else if (l.kind == cell_kind::ck_operation) {
            calls_.erase(c);
        }
    }
    walk_map_nodes(ty, prefix, dopts(), [&](const path& p, const mtype_ptr& mty) {
        cell_var node{root, p};
        groups_[node] = fresh_group();
        if (is_split_map(mty, dopts()))
            splits_[node] = {presence::p_maybe, presence::p_maybe};
    });
}

void abstract_state::bottom_object(uint64_t root, const path& prefix, const mtype_ptr& ty) {
    for (const leaf& l : decompose(ty, dopts())) {
        cell_var c{root, prefix};
        c = c.sub(l.p);
        if (is_numeric_kind(l.kind)) {
            num_.set(c, interval::bottom());
        } else if (l.kind == cell_kind::ck_address) {
            addrs_[c] = addr_abs::bottom();
        } else if (l.kind == cell_kind::ck_string) {
            strs_[c] = str_abs::bottom();
        } else if (l.kind == cell_kind::ck_operation) {
            calls_.erase(c);
        }
    }
    walk_map_nodes(ty, prefix, dopts(), [&](const path& p, const mtype_ptr& mty) {
        cell_var node{root, p};
        groups_[node] = fresh_group();
        if (is_split_map(mty, dopts()))
            splits_[node] = {presence::p_bot, presence::p_bot};
    });
}

void abstract_state::forget_object(uint64_t root, const path& prefix, const mtype_ptr& ty) {
    for (const leaf& l : decompose(ty, dopts())) {
        cell_var c{root, prefix};
        forget_cell(c.sub(l.p));
    }
    walk_map_nodes(ty, prefix, dopts(), [&](const path& p, const mtype_ptr&) {
        cell_var node{root, p};
        groups_.erase(node);
        splits_.erase(node);
    });
}

void abstract_state::rename_object(uint64_t from_root, const path& from_prefix,
                                   const mtype_ptr& ty, uint64_t to_root,
                                   const path& to_prefix) {
    for (const leaf& l : decompose(ty, dopts())) {
        cell_var from{from_root, from_prefix};
        cell_var to{to_root, to_prefix};
        rename_cell(from.sub(l.p), to.sub(l.p));
    }
    walk_map_nodes(ty, from_prefix, dopts(), [&](const path& p, const mtype_ptr&) {
        cell_var from{from_root, p};
        path rel(p.begin() + from_prefix.size(), p.end());
        cell_var to{to_root, to_prefix};
        to = to.sub(rel);
        rename_cell(from, to);
    });
}

void abstract_state::copy_object(uint64_t from_root, const path& from_prefix,
                                 const mtype_ptr& ty, uint64_t to_root,
                                 const path& to_prefix) {
    for (const leaf& l : decompose(ty, dopts())) {
        cell_var src{from_root, from_prefix};
        src = src.sub(l.p);
        cell_var dst{to_root, to_prefix};
        dst = dst.sub(l.p);
        assign_leaf_copy(dst, src, l.kind);
    }
    walk_map_nodes(ty, from_prefix, dopts(), [&](const path& p, const mtype_ptr&) {
        cell_var src{from_root, p};
        path rel(p.begin() + from_prefix.size(), p.end());
        cell_var dst{to_root, to_prefix};
        dst = dst.sub(rel);
        auto git = groups_.find(src);
        if (git != groups_.end()) groups_[dst] = git->second;
        auto sit = splits_.find(src);
        if (sit != splits_.end()) splits_[dst] = sit->second;
    });
}

void abstract_state::join_object_into(uint64_t src_root, const path& src_prefix,
                                      const mtype_ptr& ty, uint64_t dst_root,
                                      const path& dst_prefix) {
    for (const leaf& l : decompose(ty, dopts())) {
        cell_var src{src_root, src_prefix};
        src = src.sub(l.p);
        cell_var dst{dst_root, dst_prefix};
        dst = dst.sub(l.p);
        if (is_numeric_kind(l.kind)) {
            interval j = num_.get(dst) | num_.get(src);
            invalidate(dst);
            num_.set(dst, j);
        } else if (l.kind == cell_kind::ck_address) {
            addr_abs j = get_addr(dst).join(get_addr(src));
            invalidate(dst);
            set_addr(dst, j);
        } else if (l.kind == cell_kind::ck_string) {
            str_abs j = get_str(dst).join(get_str(src));
            invalidate(dst);
            set_str(dst, j);
        } else if (l.kind == cell_kind::ck_operation) {
            auto sit = calls_.find(src);
            if (sit != calls_.end()) {
                auto& dm = calls_[dst];
                for (const auto& [site, call] : sit->second) {
                    auto it = dm.find(site);
                    if (it == dm.end()) dm.emplace(site, call);
                    else it->second = it->second.join(call);
                }
            }
        }
    }
    walk_map_nodes(ty, dst_prefix, dopts(), [&](const path& p, const mtype_ptr&) {
        cell_var node{dst_root, p};
        groups_[node] = fresh_group();
    });
}

// ---------------------------------------------------------------------------
// stack shape

uint64_t abstract_state::push_raw(const mtype_ptr& ty) {
    uint64_t r = fresh_root();
    stack_.insert(stack_.begin(), slot{r, ty});
    return r;
}

uint64_t abstract_state::push_top(const mtype_ptr& ty) {
    uint64_t r = push_raw(ty);
    top_object(r, {}, ty);
    return r;
}

uint64_t abstract_state::push_value(const mtype_ptr& ty, const cvalue& v) {
    uint64_t r = push_raw(ty);
    walk_map_nodes(ty, {}, dopts(), [&](const path& p, const mtype_ptr&) {
        groups_[cell_var{r, p}] = fresh_group();
    });
    acc_value(r, {}, ty, v, false);
    return r;
}

slot abstract_state::pop_keep() {
    slot s = stack_.front();
    stack_.erase(stack_.begin());
    return s;
}

void abstract_state::pop_forget() {
    slot s = pop_keep();
    forget_root(s.root);
}

void abstract_state::do_swap() {
    if (stack_.size() >= 2) std::swap(stack_[0], stack_[1]);
}

void abstract_state::do_dig(size_t n) {
    if (n == 0 || n >= stack_.size()) return;
    slot s = stack_[n];
    stack_.erase(stack_.begin() + n);
    stack_.insert(stack_.begin(), s);
}

void abstract_state::do_dug(size_t n) {
    if (n == 0 || n >= stack_.size()) return;
    slot s = stack_.front();
    stack_.erase(stack_.begin());
    stack_.insert(stack_.begin() + n, s);
}

void abstract_state::do_dup(size_t n) {
    const slot src = stack_[n - 1];
    uint64_t r = push_raw(src.ty);
    copy_object(src.root, {}, src.ty, r, {});
}

// ---------------------------------------------------------------------------
// concrete value initialization

void abstract_state::acc_value(uint64_t root, const path& prefix, const mtype_ptr& ty,
                               const cvalue& v, bool weak) {
    cell_var c{root, prefix};
    auto set_num = [&](const interval& i) {
        if (weak) num_.set(c, num_.get(c) | i);
        else num_.set(c, i);
    };
    switch (ty->ctor) {
    case type_ctor::t_int:
    case type_ctor::t_nat:
    case type_ctor::t_mutez:
    case type_ctor::t_timestamp: set_num(interval(v.num)); break;
    case type_ctor::t_bool: set_num(interval(big_int(v.flag ? 1 : 0))); break;
    case type_ctor::t_string: {
        str_abs s = str_abs::of(v.str);
        set_str(c, weak ? get_str(c).join(s) : s);
        break;
    }
    case type_ctor::t_address: {
        addr_abs a = addr_abs::of_const(v.str);
        set_addr(c, weak ? get_addr(c).join(a) : a);
        break;
    }
    case type_ctor::t_contract: {
        addr_abs a = addr_abs::of_const(v.str);
        set_addr(c, weak ? get_addr(c).join(a) : a);
        break;
    }
    case type_ctor::t_unit:
    case type_ctor::t_operation: break;
    case type_ctor::t_pair: {
        path f = prefix;
        f.push_back(step::fst);
        acc_value(root, f, ty->args[0], *v.a, weak);
        path s = prefix;
        s.push_back(step::snd);
        acc_value(root, s, ty->args[1], *v.b, weak);
        break;
    }
    case type_ctor::t_option: {
        cell_var tag = c.sub(step::option_tag);
        path cp = prefix;
        cp.push_back(step::some_content);
        interval t(big_int(v.a ? 1 : 0));
        if (weak) num_.set(tag, num_.get(tag) | t);
        else num_.set(tag, t);
        if (!weak && !v.a) bottom_object(root, cp, ty->args[0]);
        if (v.a) acc_value(root, cp, ty->args[0], *v.a, weak);
        break;
    }
    case type_ctor::t_or: {
        cell_var tag = c.sub(step::union_tag);
        path lp = prefix;
        lp.push_back(step::left_content);
        path rp = prefix;
        rp.push_back(step::right_content);
        interval t(big_int(v.flag ? 1 : 0));
        if (weak) num_.set(tag, num_.get(tag) | t);
        else num_.set(tag, t);
        if (!weak) {
            bottom_object(root, lp, ty->args[0]);
            bottom_object(root, rp, ty->args[1]);
        }
        acc_value(root, v.flag ? rp : lp, ty->args[v.flag ? 1 : 0], *v.a, weak);
        break;
    }
    case type_ctor::t_list: {
        bool ops = ty->args[0]->ctor == type_ctor::t_operation;
        cell_var len = c.sub(ops ? step::opslist_len : step::list_len);
        interval n(big_int(v.items.size()));
        if (weak) num_.set(len, num_.get(len) | n);
        else num_.set(len, n);
        path ep = prefix;
        ep.push_back(ops ? step::opslist_elems : step::list_elems);
        if (!weak) bottom_object(root, ep, ty->args[0]);
        for (const auto& it : v.items) acc_value(root, ep, ty->args[0], *it, true);
        break;
    }
    case type_ctor::t_set: {
        cell_var card = c.sub(step::set_card);
        interval n(big_int(v.items.size()));
        if (weak) num_.set(card, num_.get(card) | n);
        else num_.set(card, n);
        path ep = prefix;
        ep.push_back(step::set_elems);
        if (!weak) bottom_object(root, ep, ty->args[0]);
        for (const auto& it : v.items) acc_value(root, ep, ty->args[0], *it, true);
        break;
    }
    case type_ctor::t_map: {
        cell_var card = c.sub(step::map_card);
        interval n(big_int(v.entries.size()));
        if (weak) num_.set(card, num_.get(card) | n);
        else num_.set(card, n);
        if (is_split_map(ty, dopts())) {
            path sp = prefix;
            sp.push_back(step::map_sender_val);
            path op = prefix;
            op.push_back(step::map_nonsender_val);
            if (!weak) {
                bottom_object(root, sp, ty->args[1]);
                bottom_object(root, op, ty->args[1]);
            }
            for (const auto& [kk, vv] : v.entries) {
                (void)kk;
                acc_value(root, sp, ty->args[1], *vv, true);
                acc_value(root, op, ty->args[1], *vv, true);
            }
            presence p = v.entries.empty() ? presence::p_absent : presence::p_maybe;
            if (weak) {
                split_meta& sm = splits_[c];
                sm.s = presence_join(sm.s, p);
                sm.o = presence_join(sm.o, p);
            } else {
                splits_[c] = {p, p};
            }
        } else {
            path kp = prefix;
            kp.push_back(step::map_keys);
            path vp = prefix;
            vp.push_back(step::map_vals);
            if (!weak) {
                bottom_object(root, kp, ty->args[0]);
                bottom_object(root, vp, ty->args[1]);
            }
            for (const auto& [kk, vv] : v.entries) {
                acc_value(root, kp, ty->args[0], *kk, true);
                acc_value(root, vp, ty->args[1], *vv, true);
            }
        }
        break;
    }
    }
}

// ---------------------------------------------------------------------------
// cell access

addr_abs abstract_state::get_addr(const cell_var& v) const {
    auto it = addrs_.find(v);
    return it == addrs_.end() ? addr_abs::top() : it->second;
}

void abstract_state::set_addr(const cell_var& v, const addr_abs& a) {
    if (a.is_top()) addrs_.erase(v);
    else addrs_[v] = a;
}

str_abs abstract_state::get_str(const cell_var& v) const {
    auto it = strs_.find(v);
    return it == strs_.end() ? str_abs::top() : it->second;
}

void abstract_state::set_str(const cell_var& v, const str_abs& s) {
    if (s.k == str_abs::s_top) strs_.erase(v);
    else strs_[v] = s;
}

bool abstract_state::snapshot_if_referenced(const cell_var& dst) {
    bool referenced = false;
    if (opts_.use_sym) {
        if (sym_.mentions(dst)) referenced = true;
        if (!referenced && !eqs_.classmates(dst).empty()) referenced = true;
    }
    if (!referenced) {
        for (const auto& [g, fs] : facts_) {
            (void)g;
            for (const auto& f : fs)
                if (f.key == dst) {
                    referenced = true;
                    break;
                }
            if (referenced) break;
        }
    }
    if (!referenced) {
        for (const auto& [g, ls] : links_) {
            (void)g;
            for (const auto& l : ls)
                if (l.key == dst || l.content == dst) {
                    referenced = true;
                    break;
                }
            if (referenced) break;
        }
    }
    if (!referenced) {
        for (const auto& [r, o] : origins_) {
            (void)r;
            if (o.key == dst) {
                referenced = true;
                break;
            }
        }
    }
    if (referenced) {
        cell_var ghost{fresh_root(), dst.p};
        rename_cell(dst, ghost);
    }
    return referenced;
}

void abstract_state::invalidate(const cell_var& dst) {
    if (!snapshot_if_referenced(dst)) forget_cell(dst);
}

void abstract_state::assign_num(const cell_var& dst, const interval& i, sym_ptr e) {
    if (bottom_) return;
    bool self = e && sym_mentions(*e, dst);
    if (self) {
        cell_var ghost{fresh_root(), dst.p};
        interval old = num_.get(dst);
        rename_cell(dst, ghost);
        num_.set(ghost, old);
        e = sym_rename_var(e, dst, ghost);
    } else {
        invalidate(dst);
    }
    num_.set(dst, i);
    if (opts_.use_sym && e) sym_.bind(dst, std::move(e));
}

void abstract_state::assign_leaf_copy(const cell_var& dst, const cell_var& src,
                                      cell_kind kind) {
    if (bottom_) return;
    if (is_numeric_kind(kind)) {
        assign_num(dst, num_.get(src), opts_.use_sym ? sym_var(src) : nullptr);
        if (opts_.use_sym && !num_.get(src).is_bottom()) eqs_.merge(dst, src);
        return;
    }
    switch (kind) {
    case cell_kind::ck_address: {
        invalidate(dst);
        set_addr(dst, get_addr(src));
        if (opts_.use_sym) {
            sym_.bind(dst, sym_var(src));
            eqs_.merge(dst, src);
        }
        break;
    }
    case cell_kind::ck_string: {
        invalidate(dst);
        set_str(dst, get_str(src));
        if (opts_.use_sym) {
            sym_.bind(dst, sym_var(src));
            eqs_.merge(dst, src);
        }
        break;
    }
    case cell_kind::ck_operation: {
        calls_.erase(dst);
        auto it = calls_.find(src);
        if (it != calls_.end()) calls_[dst] = it->second;
        break;
    }
    default: break;
    }
}

// ---------------------------------------------------------------------------
// renaming / forgetting

void abstract_state::rename_in_meta(const cell_var& from, const cell_var& to) {
    {
        auto it = groups_.find(from);
        if (it != groups_.end()) {
            uint64_t g = it->second;
            groups_.erase(it);
            groups_[to] = g;
        }
    }
    {
        auto it = splits_.find(from);
        if (it != splits_.end()) {
            split_meta sm = it->second;
            splits_.erase(it);
            splits_[to] = sm;
        }
    }
    for (auto& [g, fs] : facts_) {
        (void)g;
        for (auto& f : fs)
            if (f.key == from) f.key = to;
    }
    for (auto& [g, ls] : links_) {
        (void)g;
        for (auto& l : ls) {
            if (l.key == from) l.key = to;
            if (l.content == from) l.content = to;
        }
    }
    for (auto& [r, o] : origins_) {
        (void)r;
        if (o.key == from) o.key = to;
        if (o.map_cell == from) o.map_cell = to;
    }
    {
        auto it = calls_.find(from);
        if (it != calls_.end()) {
            auto m = std::move(it->second);
            calls_.erase(it);
            calls_[to] = std::move(m);
        }
    }
}

void abstract_state::rename_cell(const cell_var& from, const cell_var& to) {
    if (from == to) return;
    num_.rename(from, to);
    if (opts_.use_sym) {
        sym_.rename(from, to);
        eqs_.rename(from, to);
    }
    {
        auto it = addrs_.find(from);
        if (it != addrs_.end()) {
            addr_abs a = it->second;
            addrs_.erase(it);
            addrs_[to] = a;
        } else {
            addrs_.erase(to);
        }
    }
    {
        auto it = strs_.find(from);
        if (it != strs_.end()) {
            str_abs s = it->second;
            strs_.erase(it);
            strs_[to] = s;
        } else {
            strs_.erase(to);
        }
    }
    rename_in_meta(from, to);
}

void abstract_state::forget_cell(const cell_var& v) {
    num_.forget(v);
    if (opts_.use_sym) {
        sym_.drop_mentions(v);
        eqs_.forget(v);
    }
    addrs_.erase(v);
    strs_.erase(v);
    groups_.erase(v);
    splits_.erase(v);
    calls_.erase(v);
    for (auto& [g, fs] : facts_) {
        (void)g;
        std::erase_if(fs, [&](const key_fact& f) { return f.key == v; });
    }
    for (auto& [g, ls] : links_) {
        (void)g;
        std::erase_if(ls, [&](const read_link& l) { return l.key == v || l.content == v; });
    }
    std::erase_if(origins_, [&](const auto& kv) {
        return kv.second.key == v || kv.second.map_cell == v;
    });
}

void abstract_state::rename_root(uint64_t from, uint64_t to) {
    if (from == to) return;
    num_.rename_root(from, to);
    if (opts_.use_sym) {
        sym_.rename_root(from, to);
        eqs_.rename_root(from, to);
    }
    auto move_roots = [&](auto& m) {
        using entry = typename std::decay_t<decltype(m)>::mapped_type;
        std::vector<std::pair<cell_var, entry>> moved;
        auto it = m.lower_bound(cell_var{from, {}});
        while (it != m.end() && it->first.root == from) {
            moved.push_back({cell_var{to, it->first.p}, std::move(it->second)});
            it = m.erase(it);
        }
        for (auto& [v, e] : moved) m.insert_or_assign(std::move(v), std::move(e));
    };
    move_roots(addrs_);
    move_roots(strs_);
    move_roots(groups_);
    move_roots(splits_);
    move_roots(calls_);
    for (auto& [g, fs] : facts_) {
        (void)g;
        for (auto& f : fs)
            if (f.key.root == from) f.key.root = to;
    }
    for (auto& [g, ls] : links_) {
        (void)g;
        for (auto& l : ls) {
            if (l.key.root == from) l.key.root = to;
            if (l.content.root == from) l.content.root = to;
        }
    }
    std::map<uint64_t, get_origin> no;
    for (auto& [r, o] : origins_) {
        get_origin oo = o;
        if (oo.key.root == from) oo.key.root = to;
        if (oo.map_cell.root == from) oo.map_cell.root = to;
        no[r == from ? to : r] = oo;
    }
    origins_ = std::move(no);
    for (auto& s : stack_)
        if (s.root == from) s.root = to;
}

void abstract_state::forget_root_in_meta(uint64_t root) {
    auto drop_roots = [&](auto& m) {
        auto it = m.lower_bound(cell_var{root, {}});
        while (it != m.end() && it->first.root == root) it = m.erase(it);
    };
    drop_roots(groups_);
    drop_roots(splits_);
    drop_roots(calls_);
    for (auto& [g, fs] : facts_) {
        (void)g;
        std::erase_if(fs, [&](const key_fact& f) { return f.key.root == root; });
    }
    for (auto& [g, ls] : links_) {
        (void)g;
        std::erase_if(ls, [&](const read_link& l) {
            return l.key.root == root || l.content.root == root;
        });
    }
    std::erase_if(origins_, [&](const auto& kv) {
        return kv.first == root || kv.second.key.root == root ||
               kv.second.map_cell.root == root;
    });
}

void abstract_state::forget_root(uint64_t root) {
    num_.forget_root(root);
    if (opts_.use_sym) {
        sym_.forget_root(root);
        eqs_.forget_root(root);
    }
    auto drop_roots = [&](auto& m) {
        auto it = m.lower_bound(cell_var{root, {}});
        while (it != m.end() && it->first.root == root) it = m.erase(it);
    };
    drop_roots(addrs_);
    drop_roots(strs_);
    forget_root_in_meta(root);
}

// ---------------------------------------------------------------------------
// conditions

void abstract_state::apply_interval_refinement(const cell_var& x, const interval& i) {
    interval m = num_.get(x) & i;
    if (m.is_bottom()) {
        set_bottom();
        return;
    }
    num_.set(x, m);
    if (!opts_.use_sym) return;
    for (const cell_var& c : eqs_.classmates(x)) {
        interval mc = num_.get(c) & i;
        if (mc.is_bottom()) {
            set_bottom();
            return;
        }
        num_.set(c, mc);
    }
}

void abstract_state::assume_itv(const cell_var& v, const interval& i) {
    if (bottom_) return;
    apply_interval_refinement(v, i);
}

void abstract_state::eq_merge_reduce(const cell_var& x, const cell_var& y) {
    if (bottom_ || !opts_.use_sym) return;
    eqs_.merge(x, y);
    interval m = num_.get(x) & num_.get(y);
    if (!m.is_top()) {
        num_.set(x, m);
        num_.set(y, m);
    }
    bool ax = addrs_.count(x) > 0, ay = addrs_.count(y) > 0;
    if (ax || ay) {
        addr_abs m2 = get_addr(x).meet(get_addr(y));
        set_addr(x, m2);
        set_addr(y, m2);
    }
    bool sx = strs_.count(x) > 0, sy = strs_.count(y) > 0;
    if (sx || sy) {
        str_abs m3 = get_str(x).meet(get_str(y));
        set_str(x, m3);
        set_str(y, m3);
    }
}

bool abstract_state::eq_same(const cell_var& x, const cell_var& y) const {
    if (x == y) return true;
    if (!opts_.use_sym) return false;
    return eqs_.same(x, y);
}

void abstract_state::new_sender_gen() { ++sender_gen_; }

void abstract_state::assume_rel(cmp_rel rel, const cell_var& x,
                                const std::optional<cell_var>& y, const big_int& k) {
    if (bottom_) return;
    bool xa = addrs_.count(x) > 0;
    bool ya = y && addrs_.count(*y) > 0;
    if (y && (xa || ya)) {
        addr_abs a = get_addr(x), b = get_addr(*y);
        if (rel == cmp_rel::eq) {
            addr_pair r = addr_assume_eq(a, b);
            if (r.a.is_bottom() || r.b.is_bottom()) {
                set_bottom();
                return;
            }
            set_addr(x, r.a);
            set_addr(*y, r.b);
            if (opts_.use_sym) eqs_.merge(x, *y);
        } else if (rel == cmp_rel::ne) {
            addr_pair r = addr_assume_ne(a, b);
            if (r.a.is_bottom() || r.b.is_bottom()) {
                set_bottom();
                return;
            }
            set_addr(x, r.a);
            set_addr(*y, r.b);
        }
        return;
    }
    bool xs = strs_.count(x) > 0;
    bool ys = y && strs_.count(*y) > 0;
    if (y && (xs || ys)) {
        str_abs a = get_str(x), b = get_str(*y);
        if (rel == cmp_rel::eq) {
            str_abs m = a.meet(b);
            if (m.k == str_abs::s_bot) {
                set_bottom();
                return;
            }
            set_str(x, m);
            set_str(*y, m);
            if (opts_.use_sym) eqs_.merge(x, *y);
        } else if (rel == cmp_rel::ne) {
            if (a.k == str_abs::s_const && b.k == str_abs::s_const && a.value == b.value)
                set_bottom();
        }
        return;
    }
    cond c{rel, x, y ? std::optional<cell_var>(*y) : std::nullopt,
           interval(k)};
    num_.assume(c);
    if (num_.is_bottom()) {
        set_bottom();
        return;
    }
    if (!opts_.use_sym) return;
    if (rel == cmp_rel::eq && y) eq_merge_reduce(x, *y);
    apply_interval_refinement(x, num_.get(x));
    if (bottom_) return;
    if (y) apply_interval_refinement(*y, num_.get(*y));
}

// ---------------------------------------------------------------------------
// maps

presence abstract_state::key_presence(uint64_t group, const cell_var& key) const {
    auto it = facts_.find(group);
    if (it == facts_.end()) return presence::p_maybe;
    for (const auto& f : it->second)
        if (f.key == key || eq_same(f.key, key)) return f.pres;
    return presence::p_maybe;
}

const abstract_state::read_link* abstract_state::find_link(uint64_t group,
                                                           const cell_var& key) const {
    auto it = links_.find(group);
    if (it == links_.end()) return nullptr;
    for (const auto& l : it->second)
        if (l.key == key || eq_same(l.key, key)) return &l;
    return nullptr;
}

static interval tag_of(presence p) {
    switch (p) {
    case presence::p_bot: return interval::bottom();
    case presence::p_absent: return interval(big_int(0));
    case presence::p_present: return interval(big_int(1));
    case presence::p_maybe: return interval(bound(0), bound(1));
    }
    return interval(bound(0), bound(1));
}

bool abstract_state::is_split_map_slot(const slot& s) const {
    return is_split_map(s.ty, dopts());
}

void abstract_state::map_get(const slot& map_slot, const slot& key_slot,
                             uint64_t result_root) {
    if (bottom_) return;
    const mtype_ptr val_ty = map_slot.ty->args[1];
    cell_var mapnode{map_slot.root, {}};
    cell_var keyc{key_slot.root, {}};
    cell_var tag{result_root, {step::option_tag}};
    path content{step::some_content};
    uint64_t g = group_of(mapnode);

    interval card = num_.get(mapnode.sub(step::map_card));
    bool empty = !card.is_bottom() && card.ub() == bound(0);

    if (is_split_map(map_slot.ty, dopts())) {
        split_meta sm;
        {
            auto it = splits_.find(mapnode);
            if (it != splits_.end()) sm = it->second;
            else sm = {presence::p_maybe, presence::p_maybe};
        }
        if (empty) sm = {presence::p_absent, presence::p_absent};
        addr_cmp cmp = addr_compare(get_addr(keyc), addr_abs::sender(sender_gen_));
        cell_var scell = mapnode.sub(step::map_sender_val);
        cell_var ocell = mapnode.sub(step::map_nonsender_val);
        cell_var ccell{result_root, content};
        int side;
        interval t = interval::bottom();
        interval cv = interval::bottom();
        if (cmp == addr_cmp::definitely_eq) {
            side = 1;
            t = tag_of(sm.s);
            cv = sm.s == presence::p_absent ? interval::bottom() : num_.get(scell);
        } else if (cmp == addr_cmp::definitely_ne) {
            side = 2;
            t = tag_of(sm.o);
            cv = sm.o == presence::p_absent ? interval::bottom() : num_.get(ocell);
        } else {
            side = 3;
            t = tag_of(sm.s) | tag_of(sm.o);
            interval a = sm.s == presence::p_absent ? interval::bottom() : num_.get(scell);
            interval b = sm.o == presence::p_absent ? interval::bottom() : num_.get(ocell);
            cv = a | b;
        }
        num_.set(tag, t);
        num_.set(ccell, cv);
        if (g != 0) {
            origins_[result_root] = {g, keyc, side, mapnode};
            links_[g].push_back({keyc, ccell});
        }
        return;
    }

    presence pres = key_presence(g, keyc);
    if (empty) pres = presence::p_absent;
    num_.set(tag, tag_of(pres));
    if (pres == presence::p_absent) {
        bottom_object(result_root, content, val_ty);
    } else {
        for (const leaf& l : decompose(val_ty, dopts())) {
            cell_var src = mapnode.sub(step::map_vals);
            src = src.sub(l.p);
            cell_var dst{result_root, content};
            dst = dst.sub(l.p);
            if (is_numeric_kind(l.kind)) num_.set(dst, num_.get(src));
            else if (l.kind == cell_kind::ck_address) set_addr(dst, get_addr(src));
            else if (l.kind == cell_kind::ck_string) set_str(dst, get_str(src));
        }
    }
    if (g != 0) {
        origins_[result_root] = {g, keyc, 0, mapnode};
        cell_var ccell{result_root, content};
        links_[g].push_back({keyc, ccell});
    }
}

void abstract_state::refine_on_option_branch(const slot& opt_slot, bool is_some) {
    if (bottom_) return;
    cell_var tag{opt_slot.root, {step::option_tag}};
    assume_itv(tag, interval(big_int(is_some ? 1 : 0)));
    if (bottom_) return;
    auto it = origins_.find(opt_slot.root);
    if (it == origins_.end()) return;
    const get_origin o = it->second;
    if (group_of(o.map_cell) != o.group) return;
    presence p = is_some ? presence::p_present : presence::p_absent;
    if (is_some) {
        assume_itv(o.map_cell.sub(step::map_card), interval(bound(1), bound::plus_inf()));
        if (bottom_) return;
    }
    if (o.side == 1) {
        split_meta& sm = splits_[o.map_cell];
        sm.s = p;
        return;
    }
    if (o.side == 2) {
        if (is_some) splits_[o.map_cell].o = presence::p_present;
    }
    // key-level fact (sides 0, 2, 3)
    auto& fs = facts_[o.group];
    for (auto& f : fs) {
        if (f.key == o.key || eq_same(f.key, o.key)) {
            f.pres = p;
            return;
        }
    }
    fs.push_back({o.key, p});
}

static interval card_after_insert(const interval& old, presence pres) {
    if (old.is_bottom()) return old;
    if (pres == presence::p_absent) return old + interval(big_int(1));
    if (pres == presence::p_present) return old;
    interval grown(old.lb(), old.ub() + bound(1));
    return grown & interval(bound(1), bound::plus_inf());
}

static interval card_after_delete(const interval& old, presence pres) {
    if (old.is_bottom()) return old;
    if (pres == presence::p_absent) return old;
    if (pres == presence::p_present)
        return (old - interval(big_int(1))) & interval(bound(0), bound::plus_inf());
    interval shrunk(old.lb() - bound(1), old.ub());
    return shrunk & interval(bound(0), bound::plus_inf());
}

bool abstract_state::provably_distinct(const cell_var& a, const cell_var& b) const {
    if (addrs_.count(a) || addrs_.count(b)) {
        if (addr_compare(get_addr(a), get_addr(b)) == addr_cmp::definitely_ne) return true;
    }
    if (strs_.count(a) && strs_.count(b)) {
        str_abs x = get_str(a), y = get_str(b);
        if (x.k == str_abs::s_const && y.k == str_abs::s_const && x.value != y.value)
            return true;
    }
    interval ia = num_.get(a), ib = num_.get(b);
    if (!ia.is_top() && !ib.is_top() && !ia.is_bottom() && !ib.is_bottom() &&
        (ia & ib).is_bottom())
        return true;
    return false;
}

void abstract_state::drop_group_facts_on_update(uint64_t old_group, uint64_t new_group,
                                                const cell_var& updated_key, bool may_some,
                                                bool may_none) {
    std::vector<key_fact> out;
    auto it = facts_.find(old_group);
    if (it != facts_.end()) {
        for (const key_fact& f : it->second) {
            bool distinct = provably_distinct(f.key, updated_key);
            bool ok_some = f.pres == presence::p_present || distinct;
            bool ok_none = f.pres == presence::p_absent || distinct;
            if ((!may_some || ok_some) && (!may_none || ok_none)) out.push_back(f);
        }
    }
    if (may_none && !may_some) {
        bool have = false;
        for (auto& f : out)
            if (f.key == updated_key) {
                f.pres = presence::p_absent;
                have = true;
            }
        if (!have) out.push_back({updated_key, presence::p_absent});
    }
    if (!out.empty()) facts_[new_group] = std::move(out);
}

void abstract_state::map_update(const slot& map_slot, const slot& key_slot,
                                const slot& val_slot) {
    if (bottom_) return;
    const mtype_ptr key_ty = map_slot.ty->args[0];
    const mtype_ptr val_ty = map_slot.ty->args[1];
    cell_var mapnode{map_slot.root, {}};
    cell_var keyc{key_slot.root, {}};
    interval tag = num_.get(cell_var{val_slot.root, {step::option_tag}});
    bool may_some = tag.contains(1);
    bool may_none = tag.contains(0);
    if (!may_some && !may_none) return; // dead

    uint64_t g = group_of(mapnode);
    cell_var cardc = mapnode.sub(step::map_card);
    interval card = num_.get(cardc);
    presence pres = key_presence(g, keyc);
    if (!card.is_bottom() && card.ub() == bound(0)) pres = presence::p_absent;

    if (may_some) {
        join_object_into(val_slot.root, {step::some_content}, val_ty, map_slot.root,
                         {step::map_vals});
        cell_var keys = mapnode.sub(step::map_keys);
        if (key_ty->is_numeric() || key_ty->ctor == type_ctor::t_bool ||
            key_ty->ctor == type_ctor::t_timestamp) {
            interval j = num_.get(keys) | num_.get(keyc);
            invalidate(keys);
            num_.set(keys, j);
        } else if (key_ty->ctor == type_ctor::t_address) {
            addr_abs j = get_addr(keys).join(get_addr(keyc));
            invalidate(keys);
            set_addr(keys, j);
        } else if (key_ty->ctor == type_ctor::t_string) {
            str_abs j = get_str(keys).join(get_str(keyc));
            invalidate(keys);
            set_str(keys, j);
        }
    }
    interval after = interval::bottom();
    if (may_some) after = after | card_after_insert(card, pres);
    if (may_none) after = after | card_after_delete(card, pres);
    invalidate(cardc);
    num_.set(cardc, after);

    uint64_t ng = fresh_group();
    drop_group_facts_on_update(g, ng, keyc, may_some, may_none);
    links_.erase(g);
    set_group(mapnode, ng);
}

bool abstract_state::smap_update(const slot& map_slot, const slot& key_slot,
                                 const slot& val_slot) {
    if (bottom_) return false;
    cell_var mapnode{map_slot.root, {}};
    cell_var keyc{key_slot.root, {}};
    cell_var newc{val_slot.root, {step::some_content}};
    interval tag = num_.get(cell_var{val_slot.root, {step::option_tag}});
    bool may_some = tag.contains(1);
    bool may_none = tag.contains(0);
    if (!may_some && !may_none) return false;

    uint64_t g = group_of(mapnode);
    cell_var cardc = mapnode.sub(step::map_card);
    interval card = num_.get(cardc);
    split_meta sm;
    {
        auto it = splits_.find(mapnode);
        sm = it != splits_.end() ? it->second
                                 : split_meta{presence::p_maybe, presence::p_maybe};
    }
    if (!card.is_bottom() && card.ub() == bound(0)) sm = {presence::p_absent, presence::p_absent};
    presence pres_key = key_presence(g, keyc);
    if (!card.is_bottom() && card.ub() == bound(0)) pres_key = presence::p_absent;

    cell_var A = mapnode.sub(step::map_sender_val);
    cell_var N = mapnode.sub(step::map_nonsender_val);
    interval newv = num_.get(newc);
    addr_cmp cmp = addr_compare(get_addr(keyc), addr_abs::sender(sender_gen_));

    bool witness = false;
    interval card_out = interval::bottom();
    split_meta sm_out = sm;

    auto other_side_empty = [&]() {
        return sm.o == presence::p_absent || sm.o == presence::p_bot ||
               num_.get(N).is_bottom();
    };
    auto insert_excluded = [&]() {
        if (pres_key == presence::p_absent) return true;
        if (other_side_empty()) return true;
        if (eq_same(newc, N)) return true;
        interval no = num_.get(N);
        if (no.is_bottom()) return true;
        if (!newv.is_bottom() && newv.lb() >= no.ub()) return true;
        if (provably_ge(newc, g, keyc)) return true;
        return false;
    };
    auto delete_excluded = [&]() {
        if (pres_key == presence::p_absent) return true;
        if (other_side_empty()) return true;
        interval no = num_.get(N);
        return no.leq(interval(big_int(0)));
    };

    if (cmp == addr_cmp::definitely_eq) {
        if (may_some && may_none) {
            invalidate(A);
            num_.set(A, newv);
            sm_out.s = presence::p_maybe;
            card_out = card_after_insert(card, sm.s) | card_after_delete(card, sm.s);
        } else if (may_some) {
            assign_leaf_copy(A, newc, cell_kind::ck_mutez);
            sm_out.s = presence::p_present;
            card_out = card_after_insert(card, sm.s);
        } else {
            invalidate(A);
            num_.set(A, interval::bottom());
            sm_out.s = presence::p_absent;
            card_out = card_after_delete(card, sm.s);
        }
    } else if (cmp == addr_cmp::definitely_ne) {
        presence side_pres = pres_key;
        if (sm.o == presence::p_absent || sm.o == presence::p_bot)
            side_pres = presence::p_absent;
        presence o_cand = presence::p_bot;
        if (may_some) {
            if (!insert_excluded()) witness = true;
            interval old = num_.get(N);
            invalidate(N);
            num_.set(N, old | newv);
            o_cand = presence_join(o_cand, presence::p_present);
            card_out = card_out | card_after_insert(card, side_pres);
        }
        if (may_none) {
            if (!delete_excluded()) witness = true;
            o_cand = presence_join(o_cand, sm.o == presence::p_absent
                                               ? presence::p_absent
                                               : presence::p_maybe);
            card_out = card_out | card_after_delete(card, side_pres);
        }
        sm_out.o = o_cand;
    } else {
        presence s_cand = presence::p_bot, o_cand = presence::p_bot;
        if (may_some) {
            if (!insert_excluded()) witness = true;
            interval olda = num_.get(A);
            invalidate(A);
            num_.set(A, olda | newv);
            interval oldn = num_.get(N);
            invalidate(N);
            num_.set(N, oldn | newv);
            s_cand = presence_join(s_cand, presence_join(sm.s, presence::p_present));
            o_cand = presence_join(o_cand, presence_join(sm.o, presence::p_present));
            card_out = card_out | card_after_insert(card, pres_key);
        }
        if (may_none) {
            if (!delete_excluded()) witness = true;
            s_cand = presence_join(s_cand, presence_join(sm.s, presence::p_absent));
            o_cand = presence_join(o_cand, sm.o == presence::p_absent
                                               ? presence::p_absent
                                               : presence::p_maybe);
            card_out = card_out | card_after_delete(card, pres_key);
        }
        sm_out.s = s_cand;
        sm_out.o = o_cand;
    }

    invalidate(cardc);
    num_.set(cardc, card_out);
    splits_[mapnode] = sm_out;

    uint64_t ng = fresh_group();
    drop_group_facts_on_update(g, ng, keyc, may_some, may_none);
    links_.erase(g);
    set_group(mapnode, ng);
    return witness;
}

bool abstract_state::provably_ge(const cell_var& new_cell, uint64_t group,
                                 const cell_var& key) const {
    const read_link* l = find_link(group, key);
    if (!l) return false;
    if (new_cell == l->content || eq_same(new_cell, l->content)) return true;
    if (!opts_.use_sym) return false;
    sym_ptr e = sym_.get(new_cell);
    if (!e) return false;
    return expr_ge_cell(*e, l->content);
}

bool abstract_state::expr_ge_cell(const sym_expr& e, const cell_var& c) const {
    auto nonneg = [&](const sym_expr& x) -> bool {
        switch (x.node) {
        case sym_node::s_num: return x.num >= 0;
        case sym_node::s_var: {
            interval i = num_.get(x.var);
            return !i.is_bottom() ? i.lb() >= bound(0) : true;
        }
        default: return false;
        }
    };
    switch (e.node) {
    case sym_node::s_var: return e.var == c || eq_same(e.var, c);
    case sym_node::s_add: {
        const sym_expr& a = *e.args[0];
        const sym_expr& b = *e.args[1];
        if (expr_ge_cell(a, c) && nonneg(b)) return true;
        if (expr_ge_cell(b, c) && nonneg(a)) return true;
        return false;
    }
    default: return false;
    }
}

void abstract_state::set_update(const slot& set_slot, const slot& key_slot,
                                const slot& flag_slot) {
    if (bottom_) return;
    cell_var setnode{set_slot.root, {}};
    cell_var elems = setnode.sub(step::set_elems);
    cell_var cardc = setnode.sub(step::set_card);
    interval f = num_.get(cell_var{flag_slot.root, {}});
    bool may_add = f.contains(1);
    bool may_del = f.contains(0);
    interval card = num_.get(cardc);
    if (may_add) {
        const mtype_ptr elem_ty = set_slot.ty->args[0];
        cell_var keyc{key_slot.root, {}};
        if (elem_ty->is_numeric() || elem_ty->ctor == type_ctor::t_bool) {
            num_.set(elems, num_.get(elems) | num_.get(keyc));
        } else if (elem_ty->ctor == type_ctor::t_address) {
            set_addr(elems, get_addr(elems).join(get_addr(keyc)));
        } else if (elem_ty->ctor == type_ctor::t_string) {
            set_str(elems, get_str(elems).join(get_str(keyc)));
        }
    }
    interval after = interval::bottom();
    if (may_add) after = after | card_after_insert(card, presence::p_maybe);
    if (may_del) after = after | card_after_delete(card, presence::p_maybe);
    invalidate(cardc);
    num_.set(cardc, after);
}

bool_abs abstract_state::mem_query(const slot& cont_slot, const slot& key_slot) const {
    if (bottom_) return bool_abs::bottom();
    bool is_map = cont_slot.ty->ctor == type_ctor::t_map;
    cell_var node{cont_slot.root, {}};
    cell_var cardc = node.sub(is_map ? step::map_card : step::set_card);
    interval card = num_.get(cardc);
    if (card.is_bottom()) return bool_abs::bottom();
    if (card.ub() == bound(0)) return bool_abs(false);
    cell_var keyc{key_slot.root, {}};
    if (is_map) {
        if (is_split_map(cont_slot.ty, dopts())) return bool_abs::top();
        presence p = key_presence(group_of(node), keyc);
        if (p == presence::p_present) return bool_abs(true);
        if (p == presence::p_absent) return bool_abs(false);
        cell_var keys = node.sub(step::map_keys);
        if (provably_distinct(keys, keyc)) return bool_abs(false);
        return bool_abs::top();
    }
    cell_var elems = node.sub(step::set_elems);
    if (num_.entries().count(elems) && num_.get(elems).is_bottom())
        return bool_abs(false);
    if (provably_distinct(elems, keyc)) return bool_abs(false);
    return bool_abs::top();
}

// ---------------------------------------------------------------------------
// emitted operations

void abstract_state::record_call(const cell_var& op_cell, abs_call call) {
    uint64_t key = site_key(call.where);
    auto& m = calls_[op_cell];
    auto it = m.find(key);
    if (it == m.end()) m.emplace(key, std::move(call));
    else it->second = it->second.join(call);
}

std::vector<abs_call> abstract_state::calls_of(const cell_var& cell) const {
    std::vector<abs_call> out;
    auto it = calls_.find(cell);
    if (it == calls_.end()) return out;
    for (const auto& [k, c] : it->second) {
        (void)k;
        out.push_back(c);
    }
    return out;
}

void abstract_state::move_calls(const cell_var& from, const cell_var& to) {
    auto it = calls_.find(from);
    if (it == calls_.end()) return;
    auto& dst = calls_[to];
    for (auto& [k, c] : it->second) {
        auto dit = dst.find(k);
        if (dit == dst.end()) dst.emplace(k, std::move(c));
        else dit->second = dit->second.join(c);
    }
    calls_.erase(it);
}

void abstract_state::clear_calls(const cell_var& cell) { calls_.erase(cell); }

// ---------------------------------------------------------------------------
// lattice operations

bool abstract_state::leq(const abstract_state& o) const {
    if (bottom_) return true;
    if (o.bottom_) return false;
    if (stack_.size() != o.stack_.size()) return false;
    for (size_t i = 0; i < stack_.size(); ++i)
        if (stack_[i].root != o.stack_[i].root) return false;
    if (!num_.leq(o.num_)) return false;
    if (opts_.use_sym) {
        if (!sym_.leq(o.sym_)) return false;
        if (!eqs_.leq(o.eqs_)) return false;
    }
    for (const auto& [v, a] : o.addrs_)
        if (!get_addr(v).leq(a)) return false;
    for (const auto& [v, s] : o.strs_)
        if (!get_str(v).leq(s)) return false;
    for (const auto& [m, sm] : o.splits_) {
        auto it = splits_.find(m);
        split_meta mine =
            it != splits_.end() ? it->second : split_meta{presence::p_maybe, presence::p_maybe};
        if (!presence_leq(mine.s, sm.s) || !presence_leq(mine.o, sm.o)) return false;
    }
    // every fact known on the weaker side must be known here
    for (const auto& [m, go] : o.groups_) {
        uint64_t gm = group_of(m);
        auto fo = o.facts_.find(go);
        if (fo != o.facts_.end()) {
            for (const auto& f : fo->second)
                if (!presence_leq(key_presence(gm, f.key), f.pres)) return false;
        }
        auto lo = o.links_.find(go);
        if (lo != o.links_.end()) {
            for (const auto& l : lo->second) {
                const read_link* mine = find_link(gm, l.key);
                if (!mine || !(mine->content == l.content)) return false;
            }
        }
    }
    return true;
}

abstract_state abstract_state::join(const abstract_state& o) const {
    if (bottom_) return o;
    if (o.bottom_) return *this;
    if (stack_.size() != o.stack_.size())
        throw std::logic_error("join: stack shapes differ");
    abstract_state out(opts_);
    out.next_root_ = next_root_;
    out.next_group_ = next_group_;
    out.stack_ = stack_;
    out.sender_gen_ = std::max(sender_gen_, o.sender_gen_);
    out.num_ = num_.join(o.num_);
    if (opts_.use_sym) {
        out.sym_ = sym_.join(o.sym_);
        out.eqs_ = eqs_.join(o.eqs_);
    }
    for (const auto& [v, a] : addrs_) {
        auto it = o.addrs_.find(v);
        if (it != o.addrs_.end()) {
            addr_abs j = a.join(it->second);
            if (!j.is_top()) out.addrs_[v] = j;
        }
    }
    for (const auto& [v, s] : strs_) {
        auto it = o.strs_.find(v);
        if (it != o.strs_.end()) {
            str_abs j = s.join(it->second);
            if (j.k != str_abs::s_top) out.strs_[v] = j;
        }
    }
    for (const auto& [m, sm] : splits_) {
        auto it = o.splits_.find(m);
        split_meta other =
            it != o.splits_.end() ? it->second : split_meta{presence::p_maybe, presence::p_maybe};
        out.splits_[m] = {presence_join(sm.s, other.s), presence_join(sm.o, other.o)};
    }
    for (const auto& [m, sm] : o.splits_) {
        if (!splits_.count(m))
            out.splits_[m] = {presence_join(presence::p_maybe, sm.s),
                              presence_join(presence::p_maybe, sm.o)};
    }
    // groups: identical value identity survives, otherwise fresh
    for (const auto& [m, g] : groups_) {
        auto it = o.groups_.find(m);
        if (it == o.groups_.end()) continue;
        if (it->second == g) {
            out.groups_[m] = g;
            // facts: intersection
            auto fa = facts_.find(g);
            auto fb = o.facts_.find(g);
            if (fa != facts_.end() && fb != o.facts_.end()) {
                std::vector<key_fact> kept;
                for (const auto& f : fa->second) {
                    for (const auto& f2 : fb->second) {
                        if (f.key == f2.key) {
                            presence pj = presence_join(f.pres, f2.pres);
                            if (pj != presence::p_maybe) kept.push_back({f.key, pj});
                            break;
                        }
                    }
                }
                if (!kept.empty()) out.facts_[g] = std::move(kept);
            }
            auto la = links_.find(g);
            auto lb = o.links_.find(g);
            if (la != links_.end() && lb != o.links_.end()) {
                std::vector<read_link> kept;
                for (const auto& l : la->second)
                    for (const auto& l2 : lb->second)
                        if (l.key == l2.key && l.content == l2.content) {
                            kept.push_back(l);
                            break;
                        }
                if (!kept.empty()) out.links_[g] = std::move(kept);
            }
        } else {
            out.groups_[m] = out.fresh_group();
        }
    }
    for (const auto& [r, og] : origins_) {
        auto it = o.origins_.find(r);
        if (it == o.origins_.end()) continue;
        const get_origin& ob = it->second;
        if (og.group == ob.group && og.key == ob.key && og.side == ob.side &&
            og.map_cell == ob.map_cell && out.group_of(og.map_cell) == og.group)
            out.origins_[r] = og;
    }
    // calls: union (may-emit)
    out.calls_ = calls_;
    for (const auto& [cell, m] : o.calls_) {
        auto& dst = out.calls_[cell];
        for (const auto& [k, c] : m) {
            auto dit = dst.find(k);
            if (dit == dst.end()) dst.emplace(k, c);
            else dit->second = dit->second.join(c);
        }
    }
    return out;
}

abstract_state abstract_state::widen(const abstract_state& o) const {
    if (bottom_) return o;
    if (o.bottom_) return *this;
    abstract_state out = join(o);
    out.num_ = num_.widen(o.num_);
    std::map<cell_var, addr_abs> wa;
    for (const auto& [v, a] : addrs_) {
        auto it = o.addrs_.find(v);
        if (it != o.addrs_.end()) {
            addr_abs w = a.widen(it->second);
            if (!w.is_top()) wa[v] = w;
        }
    }
    out.addrs_ = std::move(wa);
    return out;
}

abstract_state abstract_state::narrow(const abstract_state& o) const {
    if (bottom_ || o.bottom_) return o;
    abstract_state out = *this;
    out.num_ = num_.narrow(o.num_);
    return out;
}

bool abstract_state::same_as(const abstract_state& o) const {
    if (bottom_ || o.bottom_) return bottom_ == o.bottom_;
    if (stack_.size() != o.stack_.size()) return false;
    for (size_t i = 0; i < stack_.size(); ++i)
        if (stack_[i].root != o.stack_[i].root) return false;
    if (!(num_ == o.num_)) return false;
    if (opts_.use_sym) {
        if (!(sym_ == o.sym_)) return false;
        if (!(eqs_ == o.eqs_)) return false;
    }
    auto addr_eq = [](const std::map<cell_var, addr_abs>& a,
                      const std::map<cell_var, addr_abs>& b) {
        if (a.size() != b.size()) return false;
        auto ia = a.begin();
        auto ib = b.begin();
        for (; ia != a.end(); ++ia, ++ib)
            if (ia->first != ib->first || !(ia->second == ib->second)) return false;
        return true;
    };
    if (!addr_eq(addrs_, o.addrs_)) return false;
    if (strs_.size() != o.strs_.size()) return false;
    {
        auto ia = strs_.begin();
        auto ib = o.strs_.begin();
        for (; ia != strs_.end(); ++ia, ++ib)
            if (ia->first != ib->first || !(ia->second == ib->second)) return false;
    }
    if (splits_ != o.splits_) return false;
    // facts compared per map cell, group ids ignored
    auto norm_facts = [](const abstract_state& s) {
        std::map<cell_var, std::vector<key_fact>> out;
        for (const auto& [m, g] : s.groups_) {
            auto it = s.facts_.find(g);
            if (it != s.facts_.end() && !it->second.empty()) {
                auto fs = it->second;
                std::sort(fs.begin(), fs.end(), [](const key_fact& a, const key_fact& b) {
                    return a.key < b.key || (a.key == b.key && a.pres < b.pres);
                });
                out[m] = std::move(fs);
            }
        }
        return out;
    };
    if (norm_facts(*this) != norm_facts(o)) return false;
    auto norm_links = [](const abstract_state& s) {
        std::map<cell_var, std::vector<read_link>> out;
        for (const auto& [m, g] : s.groups_) {
            auto it = s.links_.find(g);
            if (it != s.links_.end() && !it->second.empty()) {
                auto ls = it->second;
                std::sort(ls.begin(), ls.end(), [](const read_link& a, const read_link& b) {
                    return a.key < b.key || (a.key == b.key && a.content < b.content);
                });
                out[m] = std::move(ls);
            }
        }
        return out;
    };
    if (norm_links(*this) != norm_links(o)) return false;
    if (calls_.size() != o.calls_.size()) return false;
    {
        auto ia = calls_.begin();
        auto ib = o.calls_.begin();
        for (; ia != calls_.end(); ++ia, ++ib) {
            if (ia->first != ib->first || ia->second.size() != ib->second.size())
                return false;
            auto ja = ia->second.begin();
            auto jb = ib->second.begin();
            for (; ja != ia->second.end(); ++ja, ++jb)
                if (ja->first != jb->first || !call_same(ja->second, jb->second))
                    return false;
        }
    }
    return true;
}

void abstract_state::realign(abstract_state& a, abstract_state& b) {
    if (a.bottom_ || b.bottom_) {
        // make shapes equal so join/widen can proceed
        if (a.bottom_) a.stack_ = b.stack_;
        else b.stack_ = a.stack_;
        return;
    }
    if (a.stack_.size() != b.stack_.size())
        throw std::logic_error("realign: stack shapes differ");
    for (size_t i = 0; i < a.stack_.size(); ++i) {
        uint64_t ra = a.stack_[i].root;
        uint64_t rb = b.stack_[i].root;
        if (ra == rb) continue;
        uint64_t c = a.fresh_root();
        a.rename_root(ra, c);
        b.rename_root(rb, c);
    }
}

// ---------------------------------------------------------------------------
// garbage collection

void abstract_state::gc() {
    if (bottom_) return;
    std::set<uint64_t> live;
    for (const auto& s : stack_) live.insert(s.root);
    for (uint64_t r = 0; r < reserved_root::first_free; ++r) live.insert(r);

    // transitive closure over symbolic mentions, equality classmates and
    // group bookkeeping
    bool changed = true;
    while (changed) {
        changed = false;
        if (opts_.use_sym) {
            for (const auto& [v, e] : sym_.entries()) {
                if (!live.count(v.root)) continue;
                std::set<cell_var> vars;
                sym_collect_vars(*e, vars);
                for (const auto& w : vars)
                    if (live.insert(w.root).second) changed = true;
            }
            for (const auto& [id, members] : eqs_.classes()) {
                (void)id;
                bool any = false;
                for (const auto& m : members)
                    if (live.count(m.root)) {
                        any = true;
                        break;
                    }
                if (any)
                    for (const auto& m : members)
                        if (live.insert(m.root).second) changed = true;
            }
        }
        std::set<uint64_t> live_groups;
        for (const auto& [m, g] : groups_)
            if (live.count(m.root)) live_groups.insert(g);
        for (const auto& [g, fs] : facts_) {
            if (!live_groups.count(g)) continue;
            for (const auto& f : fs)
                if (live.insert(f.key.root).second) changed = true;
        }
        for (const auto& [g, ls] : links_) {
            if (!live_groups.count(g)) continue;
            for (const auto& l : ls) {
                if (live.insert(l.key.root).second) changed = true;
                if (live.insert(l.content.root).second) changed = true;
            }
        }
    }

    std::set<uint64_t> live_groups;
    for (const auto& [m, g] : groups_)
        if (live.count(m.root)) live_groups.insert(g);

    std::set<uint64_t> all;
    for (const auto& [v, i] : num_.entries()) {
        (void)i;
        all.insert(v.root);
    }
    if (opts_.use_sym) {
        for (const auto& [v, e] : sym_.entries()) {
            (void)e;
            all.insert(v.root);
        }
        std::set<cell_var> eqm;
        eqs_.collect_members(eqm);
        for (const auto& v : eqm) all.insert(v.root);
    }
    for (const auto& [v, a] : addrs_) {
        (void)a;
        all.insert(v.root);
    }
    for (const auto& [v, s] : strs_) {
        (void)s;
        all.insert(v.root);
    }
    for (const auto& [v, g] : groups_) {
        (void)g;
        all.insert(v.root);
    }
    for (auto r : all)
        if (!live.count(r)) forget_root(r);

    std::erase_if(facts_, [&](const auto& kv) { return !live_groups.count(kv.first); });
    std::erase_if(links_, [&](const auto& kv) { return !live_groups.count(kv.first); });
    std::set<uint64_t> stack_roots;
    for (const auto& s : stack_) stack_roots.insert(s.root);
    std::erase_if(origins_, [&](const auto& kv) { return !stack_roots.count(kv.first); });
}

// ---------------------------------------------------------------------------
// storage entry/exit hooks

void abstract_state::reset_storage_meta(const slot& storage_slot) {
    facts_.clear();
    links_.clear();
    origins_.clear();
    walk_map_nodes(storage_slot.ty, {}, dopts(),
                   [&](const path& p, const mtype_ptr& mty) {
                       cell_var node{storage_slot.root, p};
                       groups_[node] = fresh_group();
                       if (!is_split_map(mty, dopts())) return;
                       interval card = num_.get(node.sub(step::map_card));
                       if (!card.is_bottom() && card.ub() == bound(0)) {
                           splits_[node] = {presence::p_absent, presence::p_absent};
                           num_.set(node.sub(step::map_sender_val), interval::bottom());
                           num_.set(node.sub(step::map_nonsender_val), interval::bottom());
                       } else {
                           splits_[node] = {presence::p_maybe, presence::p_maybe};
                       }
                   });
}

void abstract_state::collapse_split(const slot& storage_slot) {
    walk_map_nodes(storage_slot.ty, {}, dopts(),
                   [&](const path& p, const mtype_ptr& mty) {
                       if (!is_split_map(mty, dopts())) return;
                       cell_var node{storage_slot.root, p};
                       cell_var A = node.sub(step::map_sender_val);
                       cell_var N = node.sub(step::map_nonsender_val);
                       interval j = num_.get(A) | num_.get(N);
                       invalidate(A);
                       invalidate(N);
                       num_.set(A, j);
                       num_.set(N, j);
                       splits_[node] = {presence::p_maybe, presence::p_maybe};
                   });
}

presence abstract_state::side_presence(const cell_var& map_cell, bool sender_side) const {
    auto it = splits_.find(map_cell);
    if (it == splits_.end()) return presence::p_maybe;
    return sender_side ? it->second.s : it->second.o;
}

void abstract_state::set_side_presence(const cell_var& map_cell, bool sender_side,
                                       presence p) {
    auto& sm = splits_[map_cell];
    if (sender_side) sm.s = p;
    else sm.o = p;
}

// ---------------------------------------------------------------------------
// rendering

std::string abstract_state::render_cells(const slot& s, const std::string& label) const {
    std::string out;
    for (const leaf& l : decompose(s.ty, dopts())) {
        cell_var c{s.root, l.p};
        std::string name = label;
        if (!l.p.empty()) name += "." + path_to_string(l.p);
        if (is_numeric_kind(l.kind)) {
            interval i = num_.get(c);
            if (i.is_top()) continue;
            out += name + " in " + i.to_string() + "\n";
        } else if (l.kind == cell_kind::ck_address) {
            addr_abs a = get_addr(c);
            if (a.is_top()) continue;
            out += name + " = " + a.to_string() + "\n";
        } else if (l.kind == cell_kind::ck_string) {
            str_abs st = get_str(c);
            if (st.k == str_abs::s_top) continue;
            out += name + " = " + st.to_string() + "\n";
        }
    }
    return out;
}

} // namespace michelstat
