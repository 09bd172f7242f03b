#include "michelstat/analyzer.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "michelstat/interval.hpp"
#include "michelstat/log.hpp"

namespace michelstat {

namespace {

bool is(const mtype_ptr& t, type_ctor c) { return t && t->ctor == c; }

path cat(const path& a, const path& b) {
    path out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

mtype_ptr arith_result_ty(opcode op, const mtype_ptr& a, const mtype_ptr& b) {
    using tc = type_ctor;
    tc x = a->ctor, y = b->ctor;
    switch (op) {
    case opcode::op_add:
        if (x == tc::t_nat && y == tc::t_nat) return ty_nat();
        if (x == tc::t_mutez) return ty_mutez();
        if (x == tc::t_timestamp || y == tc::t_timestamp) return ty_timestamp();
        return ty_int();
    case opcode::op_sub:
        if (x == tc::t_mutez) return ty_mutez();
        if (x == tc::t_timestamp && y == tc::t_int) return ty_timestamp();
        return ty_int();
    case opcode::op_mul:
        if (x == tc::t_nat && y == tc::t_nat) return ty_nat();
        if (x == tc::t_mutez || y == tc::t_mutez) return ty_mutez();
        return ty_int();
    default:
        return ty_int();
    }
}

mtype_ptr ediv_result_ty(const mtype_ptr& a, const mtype_ptr& b) {
    using tc = type_ctor;
    tc x = a->ctor, y = b->ctor;
    if (x == tc::t_nat && y == tc::t_nat) return ty_option(ty_pair(ty_nat(), ty_nat()));
    if ((x == tc::t_int || x == tc::t_nat) && (y == tc::t_int || y == tc::t_nat))
        return ty_option(ty_pair(ty_int(), ty_nat()));
    if (x == tc::t_mutez && y == tc::t_nat) return ty_option(ty_pair(ty_mutez(), ty_mutez()));
    return ty_option(ty_pair(ty_nat(), ty_mutez()));
}

// truth interval of "l rel 0"
interval test_zero(cmp_rel rel, const interval& l) {
    if (l.is_bottom()) return interval::bottom();
    const bound z(0);
    bool may_t = false, may_f = false;
    switch (rel) {
    case cmp_rel::eq:
        may_t = l.contains(big_int(0));
        may_f = !(l.lb() == z && l.ub() == z);
        break;
    case cmp_rel::ne:
        may_f = l.contains(big_int(0));
        may_t = !(l.lb() == z && l.ub() == z);
        break;
    case cmp_rel::lt:
        may_t = l.lb() < z;
        may_f = l.ub() >= z;
        break;
    case cmp_rel::gt:
        may_t = l.ub() > z;
        may_f = l.lb() <= z;
        break;
    case cmp_rel::le:
        may_t = l.lb() <= z;
        may_f = l.ub() > z;
        break;
    case cmp_rel::ge:
        may_t = l.ub() >= z;
        may_f = l.lb() < z;
        break;
    }
    return interval(bound(may_f ? 0 : 1), bound(may_t ? 1 : 0));
}

bool contains_balance_map(const mtype_ptr& ty) {
    if (!ty) return false;
    if (ty->ctor == type_ctor::t_map && is(ty->args[0], type_ctor::t_address) &&
        is(ty->args[1], type_ctor::t_mutez))
        return true;
    for (const auto& a : ty->args)
        if (contains_balance_map(a)) return true;
    return false;
}

// visits every map node reachable outside of sets/operation lists
template <class F>
void for_each_map_node(const mtype_ptr& ty, const path& p, F f) {
    switch (ty->ctor) {
    case type_ctor::t_pair:
        for_each_map_node(ty->args[0], cat(p, {step::fst}), f);
        for_each_map_node(ty->args[1], cat(p, {step::snd}), f);
        return;
    case type_ctor::t_option:
        for_each_map_node(ty->args[0], cat(p, {step::some_content}), f);
        return;
    case type_ctor::t_or:
        for_each_map_node(ty->args[0], cat(p, {step::left_content}), f);
        for_each_map_node(ty->args[1], cat(p, {step::right_content}), f);
        return;
    case type_ctor::t_list:
        if (!is(ty->args[0], type_ctor::t_operation))
            for_each_map_node(ty->args[0], cat(p, {step::list_elems}), f);
        return;
    case type_ctor::t_map:
        f(p, ty);
        for_each_map_node(ty->args[1], cat(p, {step::map_vals}), f);
        return;
    default:
        return;
    }
}

} // namespace

struct ep_outcome {
    abstract_state out; // storage-only; bottom when every path fails
    interval ops_len = interval::bottom();
    std::vector<abs_call> calls;
};

class analyzer_impl {
  public:
    analyzer_impl(const typed_script& ts, const analyzer_options& opt) : ts_(ts), opt_(opt) {
        st_opts_.sender_split = opt.sender_split;
        st_opts_.use_sym = opt.use_sym;
        storage_ty_ = ts.sc.storage_ty;
        anchor_ = slot{reserved_root::storage, storage_ty_};
        res_.storage_root = anchor_;
        res_.multi_call = opt.multi_call;
        res_.sender_split = opt.sender_split;
        res_.use_sym = opt.use_sym;
        res_.storage_has_balance_map = contains_balance_map(storage_ty_);
    }

    analysis_result run();

  private:
    // ---- driver ----
    abstract_state initial_state();
    ep_outcome run_entry(const entrypoint& ep, const abstract_state& S, uint64_t gen);

    // ---- transfer functions ----
    void exec_seq(const instr_seq& code, abstract_state& st);
    void exec_instr(const instr& i, abstract_state& st);
    void exec_arith(const instr& i, abstract_state& st);
    void exec_ediv(const instr& i, abstract_state& st);
    void exec_bitwise(const instr& i, abstract_state& st);
    void exec_compare(const instr& i, abstract_state& st);
    void exec_test(const instr& i, abstract_state& st);
    void exec_if(const instr& i, abstract_state& st);
    void exec_if_none(const instr& i, abstract_state& st);
    void exec_if_left(const instr& i, abstract_state& st);
    void exec_if_cons(const instr& i, abstract_state& st);
    void exec_loop(const instr& i, abstract_state& st);
    void exec_loop_left(const instr& i, abstract_state& st);
    void exec_iter(const instr& i, abstract_state& st);
    void exec_map(const instr& i, abstract_state& st);
    void exec_update(const instr& i, abstract_state& st);
    void exec_size(const instr& i, abstract_state& st);

    // ---- fixpoint machinery ----
    template <class Body>
    void head_fixpoint(abstract_state& st, Body body);
    void align_stack_to(abstract_state& b, const abstract_state& a);
    std::set<uint64_t> used_roots(const abstract_state& b);

    // ---- helpers ----
    void check_deadline();
    static sym_ptr sym_operand(abstract_state& st, const cell_var& v);
    void branch_assume_bool(abstract_state& st, const slot& c, bool v);
    void push_content(abstract_state& st, const slot& src, step s, const mtype_ptr& ct);
    void push_elem_summary(abstract_state& st, const slot& c);
    void plain_copy(abstract_state& st, uint64_t sr, const path& sp, const mtype_ptr& ty,
                    uint64_t dr, const path& dp);
    void init_container_meta(abstract_state& st, uint64_t root, const path& prefix,
                             const mtype_ptr& ty);
    void push_ctx_copy(abstract_state& st, uint64_t ctx_root, const mtype_ptr& ty);
    abstract_state join_branches(abstract_state a, abstract_state b);
    void record_arith(const instr& i, bool shift, std::string detail);
    void record_decrease(const instr& i);
    mtype_ptr map_body_result_ty(const instr& i, const abstract_state& st, const slot& c);

    const typed_script& ts_;
    const analyzer_options& opt_;
    abstract_state::options st_opts_;
    mtype_ptr storage_ty_;
    slot anchor_{0, nullptr};
    analysis_result res_;
    std::string cur_ep_;
    std::set<std::pair<std::pair<int, int>, bool>> arith_seen_;
    std::set<std::pair<int, int>> dec_seen_;
    std::map<const instr*, mtype_ptr> map_res_ty_;
};

// ---------------------------------------------------------------------------
// driver

void analyzer_impl::check_deadline() {
    if (opt_.deadline && std::chrono::steady_clock::now() > *opt_.deadline)
        throw analysis_timeout{};
}

abstract_state analyzer_impl::initial_state() {
    abstract_state st(st_opts_);
    uint64_t r;
    if (opt_.arbitrary_storage) {
        r = st.push_top(storage_ty_);
        init_container_meta(st, r, {}, storage_ty_);
    } else {
        cvalue_ptr v0 = opt_.initial_storage ? opt_.initial_storage : zero_value(storage_ty_);
        r = st.push_value(storage_ty_, *v0);
    }
    st.pop_keep();
    st.rename_root(r, reserved_root::storage);
    st.gc();
    return st;
}

ep_outcome analyzer_impl::run_entry(const entrypoint& ep, const abstract_state& S,
                                    uint64_t gen) {
    cur_ep_ = ep.name;
    abstract_state st = S;
    st.sender_gen_ = gen;
    st.set_addr({reserved_root::sender, {}}, addr_abs::sender(gen));
    st.set_addr({reserved_root::source, {}}, addr_abs::top());
    big_int amax = mutez_max();
    if (opt_.max_amount && *opt_.max_amount < amax) amax = *opt_.max_amount;
    if (amax < 0) amax = 0;
    st.set_itv({reserved_root::amount, {}}, interval(bound(0), bound(amax)));
    st.set_itv({reserved_root::balance, {}}, interval(bound(0), bound(mutez_max())));
    st.reset_storage_meta(anchor_);

    mtype_ptr in_ty = ty_pair(ts_.sc.param_ty, storage_ty_);
    uint64_t pr = st.push_top(in_ty);
    init_container_meta(st, pr, {step::fst}, ts_.sc.param_ty);
    st.copy_object(reserved_root::storage, {}, storage_ty_, pr, {step::snd});

    // pin the union tags along the entry point's or-path; the unselected
    // side of each node is dead
    path p{step::fst};
    mtype_ptr t = ts_.sc.param_ty;
    for (bool go_right : ep.path) {
        st.assume_itv(cell_var{pr, cat(p, {step::union_tag})},
                      interval(big_int(go_right ? 1 : 0)));
        st.bottom_object(pr, cat(p, {go_right ? step::left_content : step::right_content}),
                         t->args[go_right ? 0 : 1]);
        p.push_back(go_right ? step::right_content : step::left_content);
        t = t->args[go_right ? 1 : 0];
    }

    exec_seq(ts_.sc.code, st);

    ep_outcome o;
    if (st.is_bottom()) {
        o.out = std::move(st);
        return o;
    }
    slot r = st.pop_keep();
    o.ops_len = st.get_itv({r.root, {step::fst, step::opslist_len}});
    o.calls = st.calls_of({r.root, {step::fst, step::opslist_elems}});
    st.forget_root(reserved_root::storage);
    st.rename_object(r.root, {step::snd}, storage_ty_, reserved_root::storage, {});
    st.collapse_split(anchor_);

    // canonical storage-only state: context and call-local bookkeeping gone
    st.stack_mut().clear();
    st.forget_root(reserved_root::sender);
    st.forget_root(reserved_root::source);
    st.forget_root(reserved_root::amount);
    st.forget_root(reserved_root::balance);
    st.forget_root(reserved_root::now);
    st.forget_root(reserved_root::self);
    st.syms_mut() = sym_env{};
    st.calls_.clear();
    st.facts_.clear();
    st.links_.clear();
    st.origins_.clear();
    st.groups_.clear();
    st.splits_.clear();
    st.gc();
    o.out = std::move(st);
    return o;
}

analysis_result analyzer_impl::run() {
    abstract_state S0 = initial_state();
    abstract_state S = S0;
    uint64_t gen = 1;
    try {
        if (opt_.multi_call) {
            for (unsigned round = 0;; ++round) {
                check_deadline();
                if (round >= opt_.max_rounds) throw analysis_timeout{};
                ++gen;
                abstract_state acc = abstract_state::make_bottom(st_opts_);
                for (const entrypoint& ep : ts_.entrypoints) {
                    ep_outcome o = run_entry(ep, S, gen);
                    if (!o.out.is_bottom()) acc = acc.join(o.out);
                    if (log_on(2) && !o.calls.empty())
                        log_line(2, "round " + std::to_string(round) + " " + ep.name + ": " +
                                        std::to_string(o.calls.size()) +
                                        " transfer site(s), len " + o.ops_len.to_string());
                }
                res_.rounds = round + 1;
                if (acc.leq(S)) break;
                abstract_state t = S.join(acc);
                S = round < opt_.widen_delay ? std::move(t) : S.widen(t);
            }
            for (unsigned k = 0; k < opt_.narrow_steps; ++k) {
                check_deadline();
                ++gen;
                abstract_state acc = S0;
                for (const entrypoint& ep : ts_.entrypoints) {
                    ep_outcome o = run_entry(ep, S, gen);
                    if (!o.out.is_bottom()) acc = acc.join(o.out);
                }
                S = S.narrow(acc);
            }
        }

        // reporting pass: always-fail flags, per-entry posts and the
        // post-fixpoint recheck all come from the stable state
        ++gen;
        abstract_state acc = S0;
        for (const entrypoint& ep : ts_.entrypoints) {
            ep_outcome o = run_entry(ep, opt_.multi_call ? S : S0, gen);
            entry_report er;
            er.name = ep.name;
            er.always_fails = o.out.is_bottom();
            er.post = o.out;
            er.ops_len = o.ops_len;
            er.calls = std::move(o.calls);
            if (!o.out.is_bottom()) acc = acc.join(o.out);
            res_.entries.push_back(std::move(er));
        }
        if (opt_.multi_call) {
            res_.fixpoint_verified = acc.leq(S);
            res_.invariant = std::move(S);
        } else {
            res_.invariant = std::move(acc);
        }
    } catch (const analysis_timeout&) {
        res_.timed_out = true;
        res_.invariant = std::move(S);
    }
    return std::move(res_);
}

// ---------------------------------------------------------------------------
// event recording

void analyzer_impl::record_arith(const instr& i, bool shift, std::string detail) {
    auto key = std::make_pair(std::make_pair(i.where.line, i.where.col), shift);
    if (!arith_seen_.insert(key).second) return;
    arith_event e;
    e.shift = shift;
    e.where = i.where;
    e.entrypoint = cur_ep_;
    e.detail = std::move(detail);
    res_.arith.push_back(std::move(e));
}

void analyzer_impl::record_decrease(const instr& i) {
    auto key = std::make_pair(i.where.line, i.where.col);
    if (!dec_seen_.insert(key).second) return;
    decrease_event e;
    e.where = i.where;
    e.entrypoint = cur_ep_;
    e.detail = "UPDATE may lower the balance of a key other than the caller";
    res_.decreases.push_back(std::move(e));
}

// ---------------------------------------------------------------------------
// alignment and fixpoints

std::set<uint64_t> analyzer_impl::used_roots(const abstract_state& b) {
    std::set<uint64_t> out;
    for (const auto& s : b.stack()) out.insert(s.root);
    for (const auto& [v, iv] : b.nums().entries()) {
        (void)iv;
        out.insert(v.root);
    }
    for (const auto& [v, a] : b.addrs_) {
        (void)a;
        out.insert(v.root);
    }
    for (const auto& [v, s] : b.strs_) {
        (void)s;
        out.insert(v.root);
    }
    for (const auto& [v, g] : b.groups_) {
        (void)g;
        out.insert(v.root);
    }
    for (const auto& [v, sm] : b.splits_) {
        (void)sm;
        out.insert(v.root);
    }
    for (const auto& [g, fs] : b.facts_) {
        (void)g;
        for (const auto& f : fs) out.insert(f.key.root);
    }
    for (const auto& [g, ls] : b.links_) {
        (void)g;
        for (const auto& l : ls) {
            out.insert(l.key.root);
            out.insert(l.content.root);
        }
    }
    for (const auto& [r, og] : b.origins_) {
        out.insert(r);
        out.insert(og.key.root);
        out.insert(og.map_cell.root);
    }
    for (const auto& [v, m] : b.calls_) {
        (void)m;
        out.insert(v.root);
    }
    for (const auto& [v, e] : b.syms().entries()) {
        out.insert(v.root);
        std::set<cell_var> vars;
        sym_collect_vars(*e, vars);
        for (const auto& mv : vars) out.insert(mv.root);
    }
    for (const auto& [id, members] : b.eqs().classes()) {
        (void)id;
        for (const auto& mv : members) out.insert(mv.root);
    }
    return out;
}

void analyzer_impl::align_stack_to(abstract_state& b, const abstract_state& a) {
    if (b.is_bottom()) {
        b.stack_mut() = a.stack();
        return;
    }
    if (b.depth() != a.depth()) throw std::logic_error("align: stack shapes differ");
    std::set<uint64_t> used = used_roots(b);
    for (size_t k = 0; k < a.depth(); ++k) {
        uint64_t cur = b.at(k).root;
        uint64_t tgt = a.at(k).root;
        if (cur == tgt) continue;
        if (used.count(tgt)) {
            uint64_t tmp = b.fresh_root();
            b.rename_root(tgt, tmp);
            used.erase(tgt);
            used.insert(tmp);
        }
        b.rename_root(cur, tgt);
        used.erase(cur);
        used.insert(tgt);
    }
}

template <class Body>
void analyzer_impl::head_fixpoint(abstract_state& st, Body body) {
    const abstract_state H0 = st;
    abstract_state H = std::move(st);
    for (unsigned k = 0;; ++k) {
        check_deadline();
        if (k >= opt_.max_loop_iters) throw analysis_timeout{};
        abstract_state out = H;
        body(out);
        align_stack_to(out, H);
        if (out.leq(H)) {
            H = H.join(out); // absorb recorded transfer sites
            break;
        }
        abstract_state t = H.join(out);
        H = k < opt_.widen_delay ? std::move(t) : H.widen(t);
    }
    for (unsigned n = 0; n < opt_.narrow_steps; ++n) {
        check_deadline();
        abstract_state out = H;
        body(out);
        align_stack_to(out, H);
        H = H.narrow(H0.join(out));
    }
    st = std::move(H);
}

abstract_state analyzer_impl::join_branches(abstract_state a, abstract_state b) {
    abstract_state::realign(a, b);
    return a.join(b);
}

// ---------------------------------------------------------------------------
// structural helpers

// Picks a stable name for an operand cell. Popped operands are usually
// copies with fresh roots; expressions over them would never line up from
// one loop iteration to the next. A classmate that still sits on the stack
// keeps its root across iterations (the head alignment renames stack roots
// consistently), and literal ghosts fold to constants.
sym_ptr analyzer_impl::sym_operand(abstract_state& st, const cell_var& v) {
    std::set<uint64_t> on_stack;
    for (const auto& s : st.stack()) on_stack.insert(s.root);
    if (v.p.empty() && on_stack.count(v.root)) return sym_var(v);
    if (st.opts().use_sym) {
        bool have = false;
        cell_var best{0, {}};
        for (const cell_var& w : st.eqs().classmates(v)) {
            if (!w.p.empty() || !on_stack.count(w.root)) continue;
            if (!have || w < best) {
                best = w;
                have = true;
            }
        }
        if (have) return sym_var(best);
    }
    interval iv = st.get_itv(v);
    if (iv.is_singleton()) return sym_num(iv.lb().number());
    return sym_var(v);
}

void analyzer_impl::branch_assume_bool(abstract_state& st, const slot& c, bool v) {
    cell_var cc{c.root, {}};
    if (st.opts().use_sym) {
        auto rels = st.syms().resolve_guard(cc, v);
        if (log_on(2)) {
            const sym_ptr e = st.syms().get(cc);
            log_line(2, std::string("guard r") + std::to_string(c.root) + " " +
                            (v ? "T" : "F") + " rels=" + std::to_string(rels.size()) +
                            " expr=" + (e ? e->to_string() : "-"));
        }
        for (const sym_rel& r : rels) {
            st.assume_rel(r.rel, r.x, r.y, r.k);
            if (st.is_bottom()) return;
        }
    }
    st.assume_itv(cc, interval(big_int(v ? 1 : 0)));
}

void analyzer_impl::push_content(abstract_state& st, const slot& src, step s,
                                 const mtype_ptr& ct) {
    uint64_t r = st.push_raw(ct);
    st.copy_object(src.root, {s}, ct, r, {});
}

void analyzer_impl::plain_copy(abstract_state& st, uint64_t sr, const path& sp,
                               const mtype_ptr& ty, uint64_t dr, const path& dp) {
    for (const leaf& lf : decompose(ty, st.dopts())) {
        cell_var s{sr, cat(sp, lf.p)};
        cell_var d{dr, cat(dp, lf.p)};
        if (is_numeric_kind(lf.kind)) {
            st.set_itv(d, st.get_itv(s));
        } else if (lf.kind == cell_kind::ck_address) {
            st.set_addr(d, st.get_addr(s));
        } else if (lf.kind == cell_kind::ck_string) {
            st.set_str(d, st.get_str(s));
        } else if (lf.kind == cell_kind::ck_operation) {
            auto it = st.calls_.find(s);
            if (it != st.calls_.end()) st.calls_[d] = it->second;
        }
    }
    init_container_meta(st, dr, dp, ty);
}

void analyzer_impl::init_container_meta(abstract_state& st, uint64_t root, const path& prefix,
                                        const mtype_ptr& ty) {
    for_each_map_node(ty, prefix, [&](const path& p, const mtype_ptr& mt) {
        cell_var node{root, p};
        st.set_group(node, st.fresh_group());
        if (is_split_map(mt, st.dopts())) {
            interval card = st.get_itv(cell_var{root, cat(p, {step::map_card})});
            bool empty = !card.is_bottom() && card.ub() == bound(0);
            presence pr = empty ? presence::p_absent : presence::p_maybe;
            st.set_side_presence(node, true, pr);
            st.set_side_presence(node, false, pr);
        }
    });
}

void analyzer_impl::push_ctx_copy(abstract_state& st, uint64_t ctx_root, const mtype_ptr& ty) {
    uint64_t r = st.push_raw(ty);
    st.assign_leaf_copy({r, {}}, {ctx_root, {}}, scalar_kind(ty->ctor));
}

void analyzer_impl::push_elem_summary(abstract_state& st, const slot& c) {
    switch (c.ty->ctor) {
    case type_ctor::t_list: {
        mtype_ptr et = c.ty->args[0];
        uint64_t r = st.push_raw(et);
        if (is(et, type_ctor::t_operation)) {
            auto it = st.calls_.find({c.root, {step::opslist_elems}});
            if (it != st.calls_.end()) st.calls_[{r, {}}] = it->second;
        } else {
            plain_copy(st, c.root, {step::list_elems}, et, r, {});
        }
        return;
    }
    case type_ctor::t_set: {
        mtype_ptr et = c.ty->args[0];
        uint64_t r = st.push_raw(et);
        plain_copy(st, c.root, {step::set_elems}, et, r, {});
        return;
    }
    case type_ctor::t_map: {
        mtype_ptr kt = c.ty->args[0], vt = c.ty->args[1];
        uint64_t r = st.push_raw(ty_pair(kt, vt));
        if (st.is_split_map_slot(c)) {
            interval v = st.get_itv({c.root, {step::map_sender_val}}) |
                         st.get_itv({c.root, {step::map_nonsender_val}});
            st.set_itv({r, {step::snd}}, v & kind_range(cell_kind::ck_mutez));
        } else {
            plain_copy(st, c.root, {step::map_keys}, kt, r, {step::fst});
            plain_copy(st, c.root, {step::map_vals}, vt, r, {step::snd});
        }
        return;
    }
    default:
        throw std::logic_error("ITER/MAP on a non-container");
    }
}

mtype_ptr analyzer_impl::map_body_result_ty(const instr& i, const abstract_state& st,
                                            const slot& c) {
    auto it = map_res_ty_.find(&i);
    if (it != map_res_ty_.end()) return it->second;
    abstract_state probe = st;
    push_elem_summary(probe, c);
    exec_seq(i.blocks[0], probe);
    mtype_ptr rt = probe.at(0).ty;
    map_res_ty_.emplace(&i, rt);
    return rt;
}

// ---------------------------------------------------------------------------
// instruction dispatch

void analyzer_impl::exec_seq(const instr_seq& code, abstract_state& st) {
    for (const instr& i : code) {
        check_deadline();
        exec_instr(i, st);
    }
}

void analyzer_impl::exec_arith(const instr& i, abstract_state& st) {
    slot a = st.pop_keep(), b = st.pop_keep();
    mtype_ptr rt = arith_result_ty(i.op, a.ty, b.ty);
    cell_kind rk = scalar_kind(rt->ctor);
    interval l = st.get_itv({a.root, {}});
    interval r = st.get_itv({b.root, {}});
    itv_op op = i.op == opcode::op_add   ? itv_op::add
                : i.op == opcode::op_sub ? itv_op::sub
                                         : itv_op::mul;
    itv_binop_result out = itv_binop(op, rk, l, r);
    if (out.mutez_overflow && !st.is_bottom())
        record_arith(i, false,
                     std::string(opcode_name(i.op)) + " on mutez, operands " + l.to_string() +
                         " and " + r.to_string());
    uint64_t rr = st.push_raw(rt);
    sym_ptr e;
    if (st.opts().use_sym) {
        sym_node n = i.op == opcode::op_add   ? sym_node::s_add
                     : i.op == opcode::op_sub ? sym_node::s_sub
                                              : sym_node::s_mul;
        e = sym_app(n, {sym_operand(st, {a.root, {}}), sym_operand(st, {b.root, {}})});
    }
    st.assign_num({rr, {}}, out.result, e);
    if (!st.is_bottom() && out.result.is_bottom()) st.set_bottom();
}

void analyzer_impl::exec_ediv(const instr& i, abstract_state& st) {
    (void)i;
    slot a = st.pop_keep(), b = st.pop_keep();
    mtype_ptr rt = ediv_result_ty(a.ty, b.ty);
    interval l = st.get_itv({a.root, {}});
    interval r = st.get_itv({b.root, {}});
    itv_ediv_result er = itv_ediv(l, r);
    uint64_t rr = st.push_raw(rt);
    interval tag = er.none_possible
                       ? (er.some_possible ? interval(bound(0), bound(1))
                                           : interval(big_int(0)))
                       : (er.some_possible ? interval(big_int(1)) : interval::bottom());
    st.set_itv({rr, {step::option_tag}}, tag);
    const mtype_ptr& pt = rt->args[0];
    cell_kind qk = scalar_kind(pt->args[0]->ctor);
    cell_kind rk = scalar_kind(pt->args[1]->ctor);
    st.set_itv({rr, {step::some_content, step::fst}}, er.quot & kind_range(qk));
    st.set_itv({rr, {step::some_content, step::snd}}, er.rem & kind_range(rk));
    if (!st.is_bottom() && tag.is_bottom()) st.set_bottom();
}

void analyzer_impl::exec_bitwise(const instr& i, abstract_state& st) {
    slot a = st.pop_keep(), b = st.pop_keep();
    bool bools = is(a.ty, type_ctor::t_bool);
    mtype_ptr rt = bools ? ty_bool() : ty_nat();
    interval l = st.get_itv({a.root, {}});
    interval r = st.get_itv({b.root, {}});
    itv_op op;
    switch (i.op) {
    case opcode::op_lsl: op = itv_op::lsl; break;
    case opcode::op_lsr: op = itv_op::lsr; break;
    case opcode::op_and: op = itv_op::band; break;
    case opcode::op_or: op = itv_op::bor; break;
    default: op = itv_op::bxor; break;
    }
    itv_binop_result out =
        itv_binop(op, bools ? cell_kind::ck_bool : cell_kind::ck_nat, l, r);
    if (out.shift_overflow && !st.is_bottom())
        record_arith(i, true,
                     std::string(opcode_name(i.op)) + " shift amount " + r.to_string() +
                         " may exceed 256");
    uint64_t rr = st.push_raw(rt);
    st.set_itv({rr, {}}, out.result);
    if (!st.is_bottom() && out.result.is_bottom()) st.set_bottom();
}

void analyzer_impl::exec_compare(const instr& i, abstract_state& st) {
    (void)i;
    slot a = st.pop_keep(), b = st.pop_keep();
    cell_var ca{a.root, {}}, cb{b.root, {}};
    interval res = interval::bottom();
    switch (a.ty->ctor) {
    case type_ctor::t_int:
    case type_ctor::t_nat:
    case type_ctor::t_mutez:
    case type_ctor::t_timestamp:
    case type_ctor::t_bool:
        res = itv_compare(st.get_itv(ca), st.get_itv(cb));
        break;
    case type_ctor::t_unit:
        res = interval(big_int(0));
        break;
    case type_ctor::t_string: {
        str_abs x = st.get_str(ca), y = st.get_str(cb);
        if (x.k == str_abs::s_bot || y.k == str_abs::s_bot) {
            res = interval::bottom();
        } else if (x.k == str_abs::s_const && y.k == str_abs::s_const) {
            int s = x.value.compare(y.value);
            res = interval(big_int(s < 0 ? -1 : s > 0 ? 1 : 0));
        } else {
            res = interval(bound(-1), bound(1));
        }
        break;
    }
    case type_ctor::t_address: {
        addr_abs x = st.get_addr(ca), y = st.get_addr(cb);
        if (x.is_bottom() || y.is_bottom())
            res = interval::bottom();
        else if (addr_compare(x, y) == addr_cmp::definitely_eq)
            res = interval(big_int(0));
        else
            res = interval(bound(-1), bound(1));
        break;
    }
    default:
        res = interval(bound(-1), bound(1));
        break;
    }
    uint64_t rr = st.push_raw(ty_int());
    sym_ptr e;
    if (st.opts().use_sym)
        e = sym_app(sym_node::s_compare, {sym_operand(st, ca), sym_operand(st, cb)});
    st.assign_num({rr, {}}, res, e);
    if (!st.is_bottom() && res.is_bottom()) st.set_bottom();
}

void analyzer_impl::exec_test(const instr& i, abstract_state& st) {
    slot a = st.pop_keep();
    cmp_rel rel;
    sym_node n;
    switch (i.op) {
    case opcode::op_eq: rel = cmp_rel::eq, n = sym_node::s_eq; break;
    case opcode::op_neq: rel = cmp_rel::ne, n = sym_node::s_neq; break;
    case opcode::op_lt: rel = cmp_rel::lt, n = sym_node::s_lt; break;
    case opcode::op_gt: rel = cmp_rel::gt, n = sym_node::s_gt; break;
    case opcode::op_le: rel = cmp_rel::le, n = sym_node::s_le; break;
    default: rel = cmp_rel::ge, n = sym_node::s_ge; break;
    }
    interval res = test_zero(rel, st.get_itv({a.root, {}}));
    uint64_t rr = st.push_raw(ty_bool());
    sym_ptr e;
    if (st.opts().use_sym) {
        // inline the popped cell's definition (usually a compare) so the
        // guard is expressed over cells that outlive this instruction
        sym_ptr inner = st.syms().get({a.root, {}});
        e = sym_app(n, {inner ? inner : sym_var({a.root, {}})});
    }
    st.assign_num({rr, {}}, res, e);
}

void analyzer_impl::exec_if(const instr& i, abstract_state& st) {
    slot c = st.pop_keep();
    abstract_state ft = st;
    abstract_state ff = std::move(st);
    branch_assume_bool(ft, c, true);
    branch_assume_bool(ff, c, false);
    exec_seq(i.blocks[0], ft);
    exec_seq(i.blocks[1], ff);
    st = join_branches(std::move(ft), std::move(ff));
}

void analyzer_impl::exec_if_none(const instr& i, abstract_state& st) {
    slot o = st.pop_keep();
    abstract_state sn = st;
    abstract_state ss = std::move(st);
    sn.refine_on_option_branch(o, false);
    ss.refine_on_option_branch(o, true);
    push_content(ss, o, step::some_content, o.ty->args[0]);
    exec_seq(i.blocks[0], sn);
    exec_seq(i.blocks[1], ss);
    st = join_branches(std::move(sn), std::move(ss));
}

void analyzer_impl::exec_if_left(const instr& i, abstract_state& st) {
    slot u = st.pop_keep();
    abstract_state sl = st;
    abstract_state sr = std::move(st);
    sl.assume_itv({u.root, {step::union_tag}}, interval(big_int(0)));
    sr.assume_itv({u.root, {step::union_tag}}, interval(big_int(1)));
    push_content(sl, u, step::left_content, u.ty->args[0]);
    push_content(sr, u, step::right_content, u.ty->args[1]);
    exec_seq(i.blocks[0], sl);
    exec_seq(i.blocks[1], sr);
    st = join_branches(std::move(sl), std::move(sr));
}

void analyzer_impl::exec_if_cons(const instr& i, abstract_state& st) {
    slot l = st.pop_keep();
    bool ops = is(l.ty->args[0], type_ctor::t_operation);
    step len_s = ops ? step::opslist_len : step::list_len;
    abstract_state sc = st;
    abstract_state se = std::move(st);
    sc.assume_itv({l.root, {len_s}}, interval(bound(1), bound::plus_inf()));
    se.assume_itv({l.root, {len_s}}, interval(big_int(0)));
    if (!sc.is_bottom()) {
        // rest of the list: same summary, one element shorter
        uint64_t rl = sc.push_raw(l.ty);
        plain_copy(sc, l.root, {}, l.ty, rl, {});
        interval len = sc.get_itv({l.root, {len_s}});
        sc.set_itv({rl, {len_s}},
                   (len - interval(big_int(1))) & kind_range(cell_kind::ck_len));
        // head element
        mtype_ptr et = l.ty->args[0];
        uint64_t rh = sc.push_raw(et);
        if (ops) {
            auto it = sc.calls_.find({l.root, {step::opslist_elems}});
            if (it != sc.calls_.end()) sc.calls_[{rh, {}}] = it->second;
        } else {
            plain_copy(sc, l.root, {step::list_elems}, et, rh, {});
        }
    } else {
        // keep the stack shape for the join
        sc.push_raw(l.ty);
        sc.push_raw(l.ty->args[0]);
    }
    exec_seq(i.blocks[0], sc);
    exec_seq(i.blocks[1], se);
    st = join_branches(std::move(sc), std::move(se));
}

void analyzer_impl::exec_loop(const instr& i, abstract_state& st) {
    head_fixpoint(st, [&](abstract_state& s) {
        slot c = s.pop_keep();
        branch_assume_bool(s, c, true);
        exec_seq(i.blocks[0], s);
    });
    slot c = st.pop_keep();
    branch_assume_bool(st, c, false);
}

void analyzer_impl::exec_loop_left(const instr& i, abstract_state& st) {
    head_fixpoint(st, [&](abstract_state& s) {
        slot u = s.pop_keep();
        s.assume_itv({u.root, {step::union_tag}}, interval(big_int(0)));
        push_content(s, u, step::left_content, u.ty->args[0]);
        exec_seq(i.blocks[0], s);
    });
    slot u = st.pop_keep();
    st.assume_itv({u.root, {step::union_tag}}, interval(big_int(1)));
    push_content(st, u, step::right_content, u.ty->args[1]);
}

void analyzer_impl::exec_iter(const instr& i, abstract_state& st) {
    slot c = st.pop_keep();
    head_fixpoint(st, [&](abstract_state& s) {
        push_elem_summary(s, c);
        exec_seq(i.blocks[0], s);
    });
}

void analyzer_impl::exec_map(const instr& i, abstract_state& st) {
    slot c = st.pop_keep();
    mtype_ptr ret = map_body_result_ty(i, st, c);
    bool list = is(c.ty, type_ctor::t_list);
    mtype_ptr rt = list ? ty_list(ret) : ty_map(c.ty->args[0], ret);

    // result-element accumulator, parked at the bottom of the stack so the
    // body never sees it
    uint64_t racc = st.push_raw(ret);
    st.bottom_object(racc, {}, ret);
    st.do_dug(st.depth() - 1);

    head_fixpoint(st, [&](abstract_state& s) {
        push_elem_summary(s, c);
        exec_seq(i.blocks[0], s);
        slot m = s.pop_keep();
        s.join_object_into(m.root, {}, ret, racc, {});
    });

    st.do_dig(st.depth() - 1);
    slot accs = st.pop_keep();
    uint64_t rr = st.push_raw(rt);
    if (list) {
        st.rename_object(accs.root, {}, ret, rr, {step::list_elems});
        st.assign_leaf_copy({rr, {step::list_len}}, {c.root, {step::list_len}},
                            cell_kind::ck_len);
    } else {
        if (is_split_map(rt, st.dopts())) {
            interval v = st.get_itv({accs.root, {}}) & kind_range(cell_kind::ck_mutez);
            st.set_itv({rr, {step::map_sender_val}}, v);
            st.set_itv({rr, {step::map_nonsender_val}}, v);
        } else {
            st.rename_object(accs.root, {}, ret, rr, {step::map_vals});
            if (st.is_split_map_slot(c)) {
                // source keys are not summarized cell-wise in split mode
                st.top_object(rr, {step::map_keys}, rt->args[0]);
            } else {
                plain_copy(st, c.root, {step::map_keys}, rt->args[0], rr, {step::map_keys});
            }
        }
        st.assign_leaf_copy({rr, {step::map_card}}, {c.root, {step::map_card}},
                            cell_kind::ck_card);
    }
    init_container_meta(st, rr, {}, rt);
}

void analyzer_impl::exec_update(const instr& i, abstract_state& st) {
    slot k = st.pop_keep();
    slot v = st.pop_keep();
    const slot& c = st.at(0);
    if (is(c.ty, type_ctor::t_set)) {
        st.set_update(c, k, v);
    } else if (st.is_split_map_slot(c)) {
        bool witness = st.smap_update(c, k, v);
        if (witness && !st.is_bottom()) record_decrease(i);
    } else {
        st.map_update(c, k, v);
    }
}

void analyzer_impl::exec_size(const instr& i, abstract_state& st) {
    (void)i;
    slot c = st.pop_keep();
    uint64_t rr = st.push_raw(ty_nat());
    cell_var dst{rr, {}};
    switch (c.ty->ctor) {
    case type_ctor::t_list: {
        step s = is(c.ty->args[0], type_ctor::t_operation) ? step::opslist_len
                                                           : step::list_len;
        st.assign_leaf_copy(dst, {c.root, {s}}, cell_kind::ck_len);
        return;
    }
    case type_ctor::t_set:
        st.assign_leaf_copy(dst, {c.root, {step::set_card}}, cell_kind::ck_card);
        return;
    case type_ctor::t_map:
        st.assign_leaf_copy(dst, {c.root, {step::map_card}}, cell_kind::ck_card);
        return;
    default: { // string
        str_abs s = st.get_str({c.root, {}});
        if (s.k == str_abs::s_const)
            st.set_itv(dst, interval(big_int(s.value.size())));
        else if (s.k == str_abs::s_bot)
            st.set_itv(dst, interval::bottom());
        else
            st.set_itv(dst, kind_range(cell_kind::ck_nat));
        return;
    }
    }
}

void analyzer_impl::exec_instr(const instr& i, abstract_state& st) {
    using oc = opcode;
    switch (i.op) {
    case oc::op_push: {
        cvalue_ptr v = value_of_literal(*i.lit, i.ty);
        st.push_value(i.ty, *v);
        return;
    }
    case oc::op_unit:
        st.push_raw(ty_unit());
        return;
    case oc::op_drop:
        for (uint64_t k = 0; k < i.n; ++k) st.pop_forget();
        return;
    case oc::op_dup:
        st.do_dup(i.n);
        return;
    case oc::op_swap:
        st.do_swap();
        return;
    case oc::op_dig:
        st.do_dig(i.n);
        return;
    case oc::op_dug:
        st.do_dug(i.n);
        return;
    case oc::op_dip: {
        auto& stk = st.stack_mut();
        std::vector<slot> saved(stk.begin(), stk.begin() + ptrdiff_t(i.n));
        stk.erase(stk.begin(), stk.begin() + ptrdiff_t(i.n));
        exec_seq(i.blocks[0], st);
        auto& stk2 = st.stack_mut();
        stk2.insert(stk2.begin(), saved.begin(), saved.end());
        return;
    }
    case oc::op_pair: {
        slot a = st.pop_keep(), b = st.pop_keep();
        uint64_t r = st.push_raw(ty_pair(a.ty, b.ty));
        st.rename_object(a.root, {}, a.ty, r, {step::fst});
        st.rename_object(b.root, {}, b.ty, r, {step::snd});
        return;
    }
    case oc::op_unpair: {
        slot p = st.pop_keep();
        uint64_t rb = st.push_raw(p.ty->args[1]);
        st.rename_object(p.root, {step::snd}, p.ty->args[1], rb, {});
        uint64_t ra = st.push_raw(p.ty->args[0]);
        st.rename_object(p.root, {step::fst}, p.ty->args[0], ra, {});
        return;
    }
    case oc::op_car:
    case oc::op_cdr: {
        slot p = st.pop_keep();
        bool car = i.op == oc::op_car;
        mtype_ptr ct = p.ty->args[car ? 0 : 1];
        uint64_t r = st.push_raw(ct);
        st.rename_object(p.root, {car ? step::fst : step::snd}, ct, r, {});
        return;
    }
    case oc::op_some: {
        slot a = st.pop_keep();
        uint64_t r = st.push_raw(ty_option(a.ty));
        st.rename_object(a.root, {}, a.ty, r, {step::some_content});
        st.set_itv({r, {step::option_tag}}, interval(big_int(1)));
        return;
    }
    case oc::op_none: {
        uint64_t r = st.push_raw(ty_option(i.ty));
        st.bottom_object(r, {step::some_content}, i.ty);
        st.set_itv({r, {step::option_tag}}, interval(big_int(0)));
        return;
    }
    case oc::op_left: {
        slot a = st.pop_keep();
        uint64_t r = st.push_raw(ty_or(a.ty, i.ty));
        st.rename_object(a.root, {}, a.ty, r, {step::left_content});
        st.bottom_object(r, {step::right_content}, i.ty);
        st.set_itv({r, {step::union_tag}}, interval(big_int(0)));
        return;
    }
    case oc::op_right: {
        slot b = st.pop_keep();
        uint64_t r = st.push_raw(ty_or(i.ty, b.ty));
        st.rename_object(b.root, {}, b.ty, r, {step::right_content});
        st.bottom_object(r, {step::left_content}, i.ty);
        st.set_itv({r, {step::union_tag}}, interval(big_int(1)));
        return;
    }
    case oc::op_nil: {
        uint64_t r = st.push_raw(ty_list(i.ty));
        st.bottom_object(r, {}, ty_list(i.ty));
        step len_s =
            is(i.ty, type_ctor::t_operation) ? step::opslist_len : step::list_len;
        st.set_itv({r, {len_s}}, interval(big_int(0)));
        return;
    }
    case oc::op_cons: {
        slot e = st.pop_keep();
        const slot& l = st.at(0);
        bool ops = is(e.ty, type_ctor::t_operation);
        step es = ops ? step::opslist_elems : step::list_elems;
        step ls = ops ? step::opslist_len : step::list_len;
        st.join_object_into(e.root, {}, e.ty, l.root, {es});
        cell_var lc{l.root, {ls}};
        interval len = st.get_itv(lc);
        sym_ptr ex;
        if (st.opts().use_sym)
            ex = sym_app(sym_node::s_add, {sym_var(lc), sym_num(big_int(1))});
        st.assign_num(lc, (len + interval(big_int(1))) & kind_range(cell_kind::ck_len), ex);
        return;
    }
    case oc::op_empty_set: {
        mtype_ptr t = ty_set(i.ty);
        uint64_t r = st.push_raw(t);
        st.bottom_object(r, {}, t);
        st.set_itv({r, {step::set_card}}, interval(big_int(0)));
        return;
    }
    case oc::op_empty_map: {
        mtype_ptr t = ty_map(i.ty, i.ty2);
        uint64_t r = st.push_raw(t);
        st.bottom_object(r, {}, t);
        st.set_itv({r, {step::map_card}}, interval(big_int(0)));
        init_container_meta(st, r, {}, t);
        return;
    }
    case oc::op_mem: {
        slot k = st.pop_keep();
        slot c = st.pop_keep();
        bool_abs b = st.mem_query(c, k);
        uint64_t r = st.push_raw(ty_bool());
        st.set_itv({r, {}}, b.to_interval());
        return;
    }
    case oc::op_get: {
        slot k = st.pop_keep();
        slot m = st.pop_keep();
        uint64_t r = st.push_raw(ty_option(m.ty->args[1]));
        st.map_get(m, k, r);
        return;
    }
    case oc::op_update:
        exec_update(i, st);
        return;
    case oc::op_size:
        exec_size(i, st);
        return;
    case oc::op_iter:
        exec_iter(i, st);
        return;
    case oc::op_map:
        exec_map(i, st);
        return;
    case oc::op_add:
    case oc::op_sub:
    case oc::op_mul:
        exec_arith(i, st);
        return;
    case oc::op_ediv:
        exec_ediv(i, st);
        return;
    case oc::op_neg: {
        slot a = st.pop_keep();
        interval l = st.get_itv({a.root, {}});
        uint64_t r = st.push_raw(ty_int());
        sym_ptr e;
        if (st.opts().use_sym) e = sym_app(sym_node::s_neg, {sym_var({a.root, {}})});
        st.assign_num({r, {}}, -l, e);
        return;
    }
    case oc::op_abs: {
        slot a = st.pop_keep();
        interval l = st.get_itv({a.root, {}});
        uint64_t r = st.push_raw(ty_nat());
        interval res = interval::bottom();
        if (!l.is_bottom()) {
            if (l.lb() >= bound(0)) res = l;
            else if (l.ub() <= bound(0)) res = -l;
            else res = interval(bound(0), bound::max(-l.lb(), l.ub()));
        }
        sym_ptr e;
        if (st.opts().use_sym && !l.is_bottom() && l.lb() >= bound(0))
            e = sym_var({a.root, {}});
        st.assign_num({r, {}}, res, e);
        return;
    }
    case oc::op_isnat: {
        slot a = st.pop_keep();
        interval l = st.get_itv({a.root, {}});
        uint64_t r = st.push_raw(ty_option(ty_nat()));
        interval tag = interval::bottom();
        if (!l.is_bottom()) {
            if (l.lb() >= bound(0)) tag = interval(big_int(1));
            else if (l.ub() < bound(0)) tag = interval(big_int(0));
            else tag = interval(bound(0), bound(1));
        }
        st.set_itv({r, {step::option_tag}}, tag);
        if (tag.is_singleton() && tag.contains(big_int(1)))
            st.assign_leaf_copy({r, {step::some_content}}, {a.root, {}}, cell_kind::ck_nat);
        else
            st.set_itv({r, {step::some_content}}, l & kind_range(cell_kind::ck_nat));
        if (!st.is_bottom() && tag.is_bottom()) st.set_bottom();
        return;
    }
    case oc::op_int: {
        st.stack_mut()[0].ty = ty_int();
        return;
    }
    case oc::op_lsl:
    case oc::op_lsr:
    case oc::op_and:
    case oc::op_or:
    case oc::op_xor:
        exec_bitwise(i, st);
        return;
    case oc::op_not: {
        slot a = st.pop_keep();
        interval l = st.get_itv({a.root, {}});
        if (is(a.ty, type_ctor::t_bool)) {
            uint64_t r = st.push_raw(ty_bool());
            interval res = l.is_bottom()
                               ? interval::bottom()
                               : (interval(big_int(1)) - l) & kind_range(cell_kind::ck_bool);
            st.set_itv({r, {}}, res);
        } else {
            uint64_t r = st.push_raw(ty_int());
            st.set_itv({r, {}}, -(l + interval(big_int(1))));
        }
        return;
    }
    case oc::op_compare:
        exec_compare(i, st);
        return;
    case oc::op_eq:
    case oc::op_neq:
    case oc::op_lt:
    case oc::op_gt:
    case oc::op_le:
    case oc::op_ge:
        exec_test(i, st);
        return;
    case oc::op_if:
        exec_if(i, st);
        return;
    case oc::op_if_none:
        exec_if_none(i, st);
        return;
    case oc::op_if_left:
        exec_if_left(i, st);
        return;
    case oc::op_if_cons:
        exec_if_cons(i, st);
        return;
    case oc::op_loop:
        exec_loop(i, st);
        return;
    case oc::op_loop_left:
        exec_loop_left(i, st);
        return;
    case oc::op_failwith:
        st.pop_keep();
        st.set_bottom();
        return;
    case oc::op_sender:
        push_ctx_copy(st, reserved_root::sender, ty_address());
        return;
    case oc::op_source:
        push_ctx_copy(st, reserved_root::source, ty_address());
        return;
    case oc::op_self_address:
        push_ctx_copy(st, reserved_root::self, ty_address());
        return;
    case oc::op_amount:
        push_ctx_copy(st, reserved_root::amount, ty_mutez());
        return;
    case oc::op_balance:
        push_ctx_copy(st, reserved_root::balance, ty_mutez());
        return;
    case oc::op_now:
        push_ctx_copy(st, reserved_root::now, ty_timestamp());
        return;
    case oc::op_contract: {
        slot a = st.pop_keep();
        uint64_t r = st.push_raw(ty_option(ty_contract(i.ty)));
        st.set_itv({r, {step::option_tag}}, interval(bound(0), bound(1)));
        st.assign_leaf_copy({r, {step::some_content}}, {a.root, {}},
                            cell_kind::ck_address);
        return;
    }
    case oc::op_transfer_tokens: {
        slot arg = st.pop_keep();
        slot amt = st.pop_keep();
        slot dst = st.pop_keep();
        uint64_t r = st.push_raw(ty_operation());
        abs_call call;
        call.where = i.where;
        call.target = st.get_addr({dst.root, {}});
        call.amount = st.get_itv({amt.root, {}}) & kind_range(cell_kind::ck_mutez);
        call.param_ty = dst.ty->args[0];
        for (const leaf& lf : decompose(call.param_ty, st.dopts())) {
            if (is_numeric_kind(lf.kind)) {
                interval iv = st.get_itv({arg.root, lf.p});
                if (!iv.is_top()) call.arg_num.emplace(lf.p, iv);
            } else if (lf.kind == cell_kind::ck_address) {
                addr_abs av = st.get_addr({arg.root, lf.p});
                if (!av.is_top()) call.arg_addr.emplace(lf.p, av);
            }
        }
        st.record_call({r, {}}, std::move(call));
        return;
    }
    }
    throw std::logic_error("unhandled instruction in the abstract interpreter");
}

// ---------------------------------------------------------------------------
// public entry

bool analysis_result::overall_always_fails() const {
    if (entries.empty()) return false;
    for (const auto& e : entries)
        if (!e.always_fails) return false;
    return true;
}

std::string analysis_result::render_invariant() const {
    if (!storage_root.ty) return "";
    if (invariant.is_bottom()) return "storage unreachable";
    std::string s = invariant.render_cells(storage_root, "storage");
    while (!s.empty() && s.back() == '\n') s.pop_back();
    if (s.empty()) s = "storage unconstrained";
    return s;
}

analysis_result analyze(const typed_script& ts, const analyzer_options& opt) {
    analyzer_impl impl(ts, opt);
    return impl.run();
}

} // namespace michelstat
