#include "michelstat/interp.hpp"

#include <algorithm>

namespace michelstat {

const char* fail_kind_name(fail_kind k) {
    switch (k) {
    case fail_kind::f_failwith: return "failwith";
    case fail_kind::f_mutez_overflow: return "mutez-overflow";
    case fail_kind::f_mutez_underflow: return "mutez-underflow";
    case fail_kind::f_shift_overflow: return "shift-overflow";
    }
    return "?";
}

std::string interp_failure::to_string() const {
    std::string loc = " at " + std::to_string(where.line) + ":" + std::to_string(where.col);
    if (kind == fail_kind::f_failwith)
        return "failed with " + (payload ? payload->to_string() : "Unit") + loc;
    return std::string("runtime error: ") + fail_kind_name(kind) + loc;
}

namespace {

struct exec_env {
    const call_context& ctx;
    const world* w;
    uint64_t steps = 0;
    uint64_t max_steps;
};

[[noreturn]] void fail(fail_kind k, const instr& i, cvalue_ptr payload = nullptr) {
    throw interp_failure{k, i.where, std::move(payload)};
}

cvalue_ptr pop(cstack& st) {
    cvalue_ptr v = std::move(st.front());
    st.erase(st.begin());
    return v;
}

void push(cstack& st, cvalue_ptr v) { st.insert(st.begin(), std::move(v)); }

// set/map lookups over the sorted representation
size_t lower_bound_item(const std::vector<cvalue_ptr>& items, const cvalue& k) {
    size_t lo = 0, hi = items.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (compare_values(*items[mid], k) < 0) lo = mid + 1;
        else hi = mid;
    }
    return lo;
}

size_t lower_bound_entry(const std::vector<std::pair<cvalue_ptr, cvalue_ptr>>& es,
                         const cvalue& k) {
    size_t lo = 0, hi = es.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (compare_values(*es[mid].first, k) < 0) lo = mid + 1;
        else hi = mid;
    }
    return lo;
}

void run_seq(const instr_seq& code, cstack& st, exec_env& env);

void run_instr(const instr& i, cstack& st, exec_env& env) {
    if (++env.steps > env.max_steps) throw interp_step_limit{};
    using oc = opcode;
    switch (i.op) {
    case oc::op_push:
        push(st, value_of_literal(*i.lit, i.ty));
        return;
    case oc::op_unit:
        push(st, mk_unit());
        return;
    case oc::op_drop:
        st.erase(st.begin(), st.begin() + ptrdiff_t(i.n));
        return;
    case oc::op_dup:
        push(st, st[i.n - 1]);
        return;
    case oc::op_swap:
        std::swap(st[0], st[1]);
        return;
    case oc::op_dig: {
        cvalue_ptr v = std::move(st[i.n]);
        st.erase(st.begin() + ptrdiff_t(i.n));
        push(st, std::move(v));
        return;
    }
    case oc::op_dug: {
        cvalue_ptr v = pop(st);
        st.insert(st.begin() + ptrdiff_t(i.n), std::move(v));
        return;
    }
    case oc::op_dip: {
        cstack saved(st.begin(), st.begin() + ptrdiff_t(i.n));
        cstack rest(st.begin() + ptrdiff_t(i.n), st.end());
        run_seq(i.blocks[0], rest, env);
        st = std::move(saved);
        st.insert(st.end(), rest.begin(), rest.end());
        return;
    }
    case oc::op_pair: {
        cvalue_ptr a = pop(st), b = pop(st);
        push(st, mk_pair(std::move(a), std::move(b)));
        return;
    }
    case oc::op_unpair: {
        cvalue_ptr p = pop(st);
        push(st, p->b);
        push(st, p->a);
        return;
    }
    case oc::op_car:
        st[0] = st[0]->a;
        return;
    case oc::op_cdr:
        st[0] = st[0]->b;
        return;
    case oc::op_some:
        st[0] = mk_some(st[0]);
        return;
    case oc::op_none:
        push(st, mk_none());
        return;
    case oc::op_if_none: {
        cvalue_ptr o = pop(st);
        if (!o->a) {
            run_seq(i.blocks[0], st, env);
        } else {
            push(st, o->a);
            run_seq(i.blocks[1], st, env);
        }
        return;
    }
    case oc::op_left:
        st[0] = mk_or(false, st[0]);
        return;
    case oc::op_right:
        st[0] = mk_or(true, st[0]);
        return;
    case oc::op_if_left: {
        cvalue_ptr u = pop(st);
        push(st, u->a);
        run_seq(i.blocks[u->flag ? 1 : 0], st, env);
        return;
    }
    case oc::op_nil:
        push(st, mk_list({}));
        return;
    case oc::op_cons: {
        cvalue_ptr h = pop(st);
        cvalue_ptr l = pop(st);
        std::vector<cvalue_ptr> items;
        items.reserve(l->items.size() + 1);
        items.push_back(std::move(h));
        items.insert(items.end(), l->items.begin(), l->items.end());
        push(st, mk_list(std::move(items)));
        return;
    }
    case oc::op_if_cons: {
        cvalue_ptr l = pop(st);
        if (l->items.empty()) {
            run_seq(i.blocks[1], st, env);
        } else {
            std::vector<cvalue_ptr> tail(l->items.begin() + 1, l->items.end());
            push(st, mk_list(std::move(tail)));
            push(st, l->items.front());
            run_seq(i.blocks[0], st, env);
        }
        return;
    }
    case oc::op_empty_set:
        push(st, mk_set_sorted({}));
        return;
    case oc::op_empty_map:
        push(st, mk_map_sorted({}));
        return;
    case oc::op_mem: {
        cvalue_ptr k = pop(st);
        cvalue_ptr c = pop(st);
        bool found = false;
        if (c->k == vkind::v_set) {
            size_t p = lower_bound_item(c->items, *k);
            found = p < c->items.size() && compare_values(*c->items[p], *k) == 0;
        } else {
            size_t p = lower_bound_entry(c->entries, *k);
            found = p < c->entries.size() && compare_values(*c->entries[p].first, *k) == 0;
        }
        push(st, mk_bool(found));
        return;
    }
    case oc::op_get: {
        cvalue_ptr k = pop(st);
        cvalue_ptr m = pop(st);
        size_t p = lower_bound_entry(m->entries, *k);
        if (p < m->entries.size() && compare_values(*m->entries[p].first, *k) == 0)
            push(st, mk_some(m->entries[p].second));
        else
            push(st, mk_none());
        return;
    }
    case oc::op_update: {
        cvalue_ptr k = pop(st);
        cvalue_ptr v = pop(st);
        cvalue_ptr c = pop(st);
        if (c->k == vkind::v_set) {
            std::vector<cvalue_ptr> items = c->items;
            size_t p = lower_bound_item(items, *k);
            bool present = p < items.size() && compare_values(*items[p], *k) == 0;
            if (v->flag && !present) items.insert(items.begin() + ptrdiff_t(p), k);
            if (!v->flag && present) items.erase(items.begin() + ptrdiff_t(p));
            push(st, mk_set_sorted(std::move(items)));
        } else {
            auto entries = c->entries;
            size_t p = lower_bound_entry(entries, *k);
            bool present = p < entries.size() && compare_values(*entries[p].first, *k) == 0;
            if (v->a) { // Some: insert or replace
                if (present) entries[p].second = v->a;
                else entries.insert(entries.begin() + ptrdiff_t(p), {k, v->a});
            } else if (present) {
                entries.erase(entries.begin() + ptrdiff_t(p));
            }
            push(st, mk_map_sorted(std::move(entries)));
        }
        return;
    }
    case oc::op_size: {
        cvalue_ptr c = pop(st);
        size_t n = 0;
        switch (c->k) {
        case vkind::v_list:
        case vkind::v_set: n = c->items.size(); break;
        case vkind::v_map: n = c->entries.size(); break;
        case vkind::v_string: n = c->str.size(); break;
        default: break;
        }
        push(st, mk_num(big_int(n)));
        return;
    }
    case oc::op_iter: {
        cvalue_ptr c = pop(st);
        if (c->k == vkind::v_map) {
            for (const auto& [k, v] : c->entries) {
                push(st, mk_pair(k, v));
                run_seq(i.blocks[0], st, env);
            }
        } else {
            for (const auto& e : c->items) {
                push(st, e);
                run_seq(i.blocks[0], st, env);
            }
        }
        return;
    }
    case oc::op_map: {
        cvalue_ptr c = pop(st);
        if (c->k == vkind::v_map) {
            std::vector<std::pair<cvalue_ptr, cvalue_ptr>> entries;
            entries.reserve(c->entries.size());
            for (const auto& [k, v] : c->entries) {
                push(st, mk_pair(k, v));
                run_seq(i.blocks[0], st, env);
                entries.emplace_back(k, pop(st));
            }
            push(st, mk_map_sorted(std::move(entries)));
        } else {
            std::vector<cvalue_ptr> items;
            items.reserve(c->items.size());
            for (const auto& e : c->items) {
                push(st, e);
                run_seq(i.blocks[0], st, env);
                items.push_back(pop(st));
            }
            push(st, mk_list(std::move(items)));
        }
        return;
    }
    case oc::op_add: {
        cvalue_ptr a = pop(st), b = pop(st);
        big_int r = a->num + b->num;
        if (i.mutez_checked && r > mutez_max()) fail(fail_kind::f_mutez_overflow, i);
        push(st, mk_num(std::move(r)));
        return;
    }
    case oc::op_sub: {
        cvalue_ptr a = pop(st), b = pop(st);
        big_int r = a->num - b->num;
        if (i.mutez_checked && r < 0) fail(fail_kind::f_mutez_underflow, i);
        push(st, mk_num(std::move(r)));
        return;
    }
    case oc::op_mul: {
        cvalue_ptr a = pop(st), b = pop(st);
        big_int r = a->num * b->num;
        if (i.mutez_checked && r > mutez_max()) fail(fail_kind::f_mutez_overflow, i);
        push(st, mk_num(std::move(r)));
        return;
    }
    case oc::op_ediv: {
        cvalue_ptr a = pop(st), b = pop(st);
        if (b->num == 0) {
            push(st, mk_none());
        } else {
            big_int q, r;
            ediv_euclid(a->num, b->num, q, r);
            push(st, mk_some(mk_pair(mk_num(std::move(q)), mk_num(std::move(r)))));
        }
        return;
    }
    case oc::op_neg:
        st[0] = mk_num(-st[0]->num);
        return;
    case oc::op_abs:
        st[0] = mk_num(abs(st[0]->num));
        return;
    case oc::op_isnat: {
        cvalue_ptr v = pop(st);
        push(st, v->num >= 0 ? mk_some(v) : mk_none());
        return;
    }
    case oc::op_int:
        return; // representation unchanged
    case oc::op_lsl: {
        cvalue_ptr a = pop(st), b = pop(st);
        if (b->num > 256) fail(fail_kind::f_shift_overflow, i);
        push(st, mk_num(a->num << b->num.convert_to<unsigned>()));
        return;
    }
    case oc::op_lsr: {
        cvalue_ptr a = pop(st), b = pop(st);
        if (b->num > 256) fail(fail_kind::f_shift_overflow, i);
        push(st, mk_num(a->num >> b->num.convert_to<unsigned>()));
        return;
    }
    case oc::op_and:
    case oc::op_or:
    case oc::op_xor: {
        cvalue_ptr a = pop(st), b = pop(st);
        if (a->k == vkind::v_bool) {
            bool r = i.op == oc::op_and ? (a->flag && b->flag)
                   : i.op == oc::op_or  ? (a->flag || b->flag)
                                        : (a->flag != b->flag);
            push(st, mk_bool(r));
        } else {
            big_int r;
            if (i.op == oc::op_and) r = a->num & b->num;
            else if (i.op == oc::op_or) r = a->num | b->num;
            else r = a->num ^ b->num;
            push(st, mk_num(std::move(r)));
        }
        return;
    }
    case oc::op_not:
        if (st[0]->k == vkind::v_bool) st[0] = mk_bool(!st[0]->flag);
        else st[0] = mk_num(-st[0]->num - 1);
        return;
    case oc::op_compare: {
        cvalue_ptr a = pop(st), b = pop(st);
        push(st, mk_num(big_int(compare_values(*a, *b))));
        return;
    }
    case oc::op_eq:
        st[0] = mk_bool(st[0]->num == 0);
        return;
    case oc::op_neq:
        st[0] = mk_bool(st[0]->num != 0);
        return;
    case oc::op_lt:
        st[0] = mk_bool(st[0]->num < 0);
        return;
    case oc::op_gt:
        st[0] = mk_bool(st[0]->num > 0);
        return;
    case oc::op_le:
        st[0] = mk_bool(st[0]->num <= 0);
        return;
    case oc::op_ge:
        st[0] = mk_bool(st[0]->num >= 0);
        return;
    case oc::op_if: {
        cvalue_ptr b = pop(st);
        run_seq(i.blocks[b->flag ? 0 : 1], st, env);
        return;
    }
    case oc::op_loop:
        for (;;) {
            cvalue_ptr b = pop(st);
            if (!b->flag) return;
            run_seq(i.blocks[0], st, env);
            if (++env.steps > env.max_steps) throw interp_step_limit{};
        }
    case oc::op_loop_left:
        for (;;) {
            cvalue_ptr u = pop(st);
            push(st, u->a);
            if (u->flag) return;
            run_seq(i.blocks[0], st, env);
            if (++env.steps > env.max_steps) throw interp_step_limit{};
        }
    case oc::op_failwith:
        fail(fail_kind::f_failwith, i, st[0]);
    case oc::op_sender:
        push(st, mk_string(env.ctx.sender));
        return;
    case oc::op_source:
        push(st, mk_string(env.ctx.source));
        return;
    case oc::op_amount:
        push(st, mk_num(env.ctx.amount));
        return;
    case oc::op_balance:
        push(st, mk_num(env.ctx.balance));
        return;
    case oc::op_now:
        push(st, mk_num(env.ctx.now));
        return;
    case oc::op_self_address:
        push(st, mk_string(env.ctx.self));
        return;
    case oc::op_contract: {
        cvalue_ptr a = pop(st);
        bool known = false, matches = false;
        if (env.w) {
            auto it = env.w->accounts.find(a->str);
            if (it != env.w->accounts.end()) {
                known = true;
                if (it->second.code)
                    matches = type_eq(it->second.code->sc.param_ty, i.ty);
                else
                    matches = i.ty->ctor == type_ctor::t_unit;
            }
        }
        if (!known) matches = i.ty->ctor == type_ctor::t_unit; // implicit account
        push(st, matches ? mk_some(mk_contract(a->str, i.ty)) : mk_none());
        return;
    }
    case oc::op_transfer_tokens: {
        cvalue_ptr arg = pop(st);
        cvalue_ptr amt = pop(st);
        cvalue_ptr dst = pop(st);
        push(st, mk_transfer(std::move(arg), amt->num, dst->str, dst->ty));
        return;
    }
    }
}

void run_seq(const instr_seq& code, cstack& st, exec_env& env) {
    for (const instr& i : code) run_instr(i, st, env);
}

} // namespace

cstack run_code(const instr_seq& code, cstack stack, const call_context& ctx, const world* w,
                uint64_t max_steps) {
    exec_env env{ctx, w, 0, max_steps};
    run_seq(code, stack, env);
    return stack;
}

contract_result run_contract_param(const typed_script& ts, cvalue_ptr param, cvalue_ptr storage,
                                   const call_context& ctx, const world* w,
                                   uint64_t max_steps) {
    cstack st;
    st.push_back(mk_pair(std::move(param), std::move(storage)));
    st = run_code(ts.sc.code, std::move(st), ctx, w, max_steps);
    contract_result out;
    out.operations = st[0]->a->items;
    out.storage = st[0]->b;
    return out;
}

cvalue_ptr wrap_entrypoint(const entrypoint& ep, cvalue_ptr leaf) {
    cvalue_ptr v = std::move(leaf);
    for (auto it = ep.path.rbegin(); it != ep.path.rend(); ++it) v = mk_or(*it, std::move(v));
    return v;
}

const entrypoint* find_entrypoint(const typed_script& ts, const std::string& name) {
    for (const auto& ep : ts.entrypoints)
        if (ep.name == name) return &ep;
    return nullptr;
}

contract_result run_contract(const typed_script& ts, const std::string& entrypoint_name,
                             cvalue_ptr arg, cvalue_ptr storage, const call_context& ctx,
                             const world* w, uint64_t max_steps) {
    const entrypoint* ep = find_entrypoint(ts, entrypoint_name);
    if (!ep) throw script_error("no entry point named '" + entrypoint_name + "'");
    return run_contract_param(ts, wrap_entrypoint(*ep, std::move(arg)), std::move(storage), ctx,
                              w, max_steps);
}

namespace {

void exec_operation(world& w, const cvalue& op, const std::string& emitter,
                    const std::string& source, const big_int& now, uint64_t max_steps) {
    auto it = w.accounts.find(op.str);
    if (it == w.accounts.end() || !it->second.code) return; // plain user address
    world::account& acct = it->second;
    call_context ctx{emitter, source, op.str, op.num, acct.balance + op.num, now};
    contract_result res = run_contract_param(*acct.code, op.a, acct.storage, ctx, &w, max_steps);
    acct.storage = res.storage;
    for (const cvalue_ptr& nested : res.operations)
        exec_operation(w, *nested, op.str, source, now, max_steps);
}

} // namespace

world apply_call(world w, const std::string& target, cvalue_ptr param, const std::string& sender,
                 const std::string& source, big_int amount, big_int now, uint64_t max_steps) {
    cvalue_ptr op = mk_transfer(std::move(param), std::move(amount), target, nullptr);
    exec_operation(w, *op, sender, source, now, max_steps);
    return w;
}

} // namespace michelstat
