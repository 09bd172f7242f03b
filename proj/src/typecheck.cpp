#include "michelstat/typecheck.hpp"

#include <set>

namespace michelstat {

namespace {

using tstack = std::vector<mtype_ptr>; // index 0 = top of stack

struct tc_out {
    tstack stack;
    bool failed = false; // this path always reaches FAILWITH
};

[[noreturn]] void fail(const instr& i, const std::string& msg) {
    throw script_error(std::string(opcode_name(i.op)) + ": " + msg, i.where);
}

void need(const instr& i, const tstack& st, size_t depth) {
    if (st.size() < depth)
        fail(i, "stack too shallow (need " + std::to_string(depth) + ", have " +
                    std::to_string(st.size()) + ")");
}

const mtype_ptr& atop(const tstack& st, size_t k = 0) { return st[k]; }

mtype_ptr pop(tstack& st) {
    mtype_ptr t = st.front();
    st.erase(st.begin());
    return t;
}

void push(tstack& st, mtype_ptr t) { st.insert(st.begin(), std::move(t)); }

bool is(const mtype_ptr& t, type_ctor c) { return t->ctor == c; }

mtype_ptr add_result(const instr& i, const mtype_ptr& a, const mtype_ptr& b) {
    type_ctor x = a->ctor, y = b->ctor;
    using tc = type_ctor;
    if (x == tc::t_nat && y == tc::t_nat) return ty_nat();
    if ((x == tc::t_int || x == tc::t_nat) && (y == tc::t_int || y == tc::t_nat)) return ty_int();
    if (x == tc::t_mutez && y == tc::t_mutez) return ty_mutez();
    if (x == tc::t_timestamp && y == tc::t_int) return ty_timestamp();
    if (x == tc::t_int && y == tc::t_timestamp) return ty_timestamp();
    fail(i, "cannot add " + a->to_string() + " and " + b->to_string());
}

mtype_ptr sub_result(const instr& i, const mtype_ptr& a, const mtype_ptr& b) {
    type_ctor x = a->ctor, y = b->ctor;
    using tc = type_ctor;
    if ((x == tc::t_int || x == tc::t_nat) && (y == tc::t_int || y == tc::t_nat)) return ty_int();
    if (x == tc::t_mutez && y == tc::t_mutez) return ty_mutez();
    if (x == tc::t_timestamp && y == tc::t_int) return ty_timestamp();
    if (x == tc::t_timestamp && y == tc::t_timestamp) return ty_int();
    fail(i, "cannot subtract " + b->to_string() + " from " + a->to_string());
}

mtype_ptr mul_result(const instr& i, const mtype_ptr& a, const mtype_ptr& b) {
    type_ctor x = a->ctor, y = b->ctor;
    using tc = type_ctor;
    if (x == tc::t_nat && y == tc::t_nat) return ty_nat();
    if ((x == tc::t_int || x == tc::t_nat) && (y == tc::t_int || y == tc::t_nat)) return ty_int();
    if (x == tc::t_mutez && y == tc::t_nat) return ty_mutez();
    if (x == tc::t_nat && y == tc::t_mutez) return ty_mutez();
    fail(i, "cannot multiply " + a->to_string() + " and " + b->to_string());
}

mtype_ptr ediv_result(const instr& i, const mtype_ptr& a, const mtype_ptr& b) {
    type_ctor x = a->ctor, y = b->ctor;
    using tc = type_ctor;
    if (x == tc::t_nat && y == tc::t_nat) return ty_option(ty_pair(ty_nat(), ty_nat()));
    if ((x == tc::t_int || x == tc::t_nat) && (y == tc::t_int || y == tc::t_nat))
        return ty_option(ty_pair(ty_int(), ty_nat()));
    if (x == tc::t_mutez && y == tc::t_nat) return ty_option(ty_pair(ty_mutez(), ty_mutez()));
    if (x == tc::t_mutez && y == tc::t_mutez) return ty_option(ty_pair(ty_nat(), ty_mutez()));
    fail(i, "cannot divide " + a->to_string() + " by " + b->to_string());
}

void same_stack(const instr& i, const tstack& a, const tstack& b, const char* what) {
    bool ok = a.size() == b.size();
    for (size_t k = 0; ok && k < a.size(); ++k) ok = type_eq(a[k], b[k]);
    if (!ok) fail(i, std::string(what) + " produce different stack types");
}

tc_out check_seq(instr_seq& code, tstack in);

tc_out check_instr(instr& i, tstack st) {
    using oc = opcode;
    switch (i.op) {
    case oc::op_push:
        if (i.ty->contains_operation())
            fail(i, "cannot push a value containing operations");
        check_literal(*i.lit, i.ty);
        push(st, i.ty);
        return {std::move(st)};
    case oc::op_unit:
        push(st, ty_unit());
        return {std::move(st)};
    case oc::op_drop:
        need(i, st, i.n);
        st.erase(st.begin(), st.begin() + ptrdiff_t(i.n));
        return {std::move(st)};
    case oc::op_dup:
        need(i, st, i.n);
        push(st, st[i.n - 1]);
        return {std::move(st)};
    case oc::op_swap: {
        need(i, st, 2);
        std::swap(st[0], st[1]);
        return {std::move(st)};
    }
    case oc::op_dig: {
        need(i, st, i.n + 1);
        mtype_ptr t = st[i.n];
        st.erase(st.begin() + ptrdiff_t(i.n));
        push(st, std::move(t));
        return {std::move(st)};
    }
    case oc::op_dug: {
        need(i, st, i.n + 1);
        mtype_ptr t = pop(st);
        st.insert(st.begin() + ptrdiff_t(i.n), std::move(t));
        return {std::move(st)};
    }
    case oc::op_dip: {
        need(i, st, i.n);
        tstack saved(st.begin(), st.begin() + ptrdiff_t(i.n));
        tstack rest(st.begin() + ptrdiff_t(i.n), st.end());
        tc_out body = check_seq(i.blocks[0], std::move(rest));
        if (body.failed) fail(i, "body may not fail unconditionally");
        tstack out = std::move(saved);
        out.insert(out.end(), body.stack.begin(), body.stack.end());
        return {std::move(out)};
    }
    case oc::op_pair: {
        need(i, st, 2);
        mtype_ptr a = pop(st), b = pop(st);
        push(st, ty_pair(std::move(a), std::move(b)));
        return {std::move(st)};
    }
    case oc::op_unpair: {
        need(i, st, 1);
        if (!is(atop(st), type_ctor::t_pair)) fail(i, "expected a pair on top");
        mtype_ptr p = pop(st);
        push(st, p->args[1]);
        push(st, p->args[0]);
        return {std::move(st)};
    }
    case oc::op_car:
    case oc::op_cdr: {
        need(i, st, 1);
        if (!is(atop(st), type_ctor::t_pair)) fail(i, "expected a pair on top");
        mtype_ptr p = pop(st);
        push(st, p->args[i.op == oc::op_car ? 0 : 1]);
        return {std::move(st)};
    }
    case oc::op_some: {
        need(i, st, 1);
        mtype_ptr a = pop(st);
        push(st, ty_option(std::move(a)));
        return {std::move(st)};
    }
    case oc::op_none:
        push(st, ty_option(i.ty));
        return {std::move(st)};
    case oc::op_if_none: {
        need(i, st, 1);
        if (!is(atop(st), type_ctor::t_option)) fail(i, "expected an option on top");
        mtype_ptr o = pop(st);
        tstack some_in = st;
        push(some_in, o->args[0]);
        tc_out bn = check_seq(i.blocks[0], std::move(st));
        tc_out bs = check_seq(i.blocks[1], std::move(some_in));
        if (bn.failed && bs.failed) return {{}, true};
        if (bn.failed) return bs;
        if (bs.failed) return bn;
        same_stack(i, bn.stack, bs.stack, "branches");
        return bn;
    }
    case oc::op_left: {
        need(i, st, 1);
        mtype_ptr a = pop(st);
        push(st, ty_or(std::move(a), i.ty));
        return {std::move(st)};
    }
    case oc::op_right: {
        need(i, st, 1);
        mtype_ptr b = pop(st);
        push(st, ty_or(i.ty, std::move(b)));
        return {std::move(st)};
    }
    case oc::op_if_left: {
        need(i, st, 1);
        if (!is(atop(st), type_ctor::t_or)) fail(i, "expected a union on top");
        mtype_ptr u = pop(st);
        tstack left_in = st, right_in = st;
        push(left_in, u->args[0]);
        push(right_in, u->args[1]);
        tc_out bl = check_seq(i.blocks[0], std::move(left_in));
        tc_out br = check_seq(i.blocks[1], std::move(right_in));
        if (bl.failed && br.failed) return {{}, true};
        if (bl.failed) return br;
        if (br.failed) return bl;
        same_stack(i, bl.stack, br.stack, "branches");
        return bl;
    }
    case oc::op_nil:
        push(st, ty_list(i.ty));
        return {std::move(st)};
    case oc::op_cons: {
        need(i, st, 2);
        mtype_ptr a = pop(st);
        if (!is(atop(st), type_ctor::t_list) || !type_eq(atop(st)->args[0], a))
            fail(i, "expected a list of " + a->to_string() + " under the element");
        return {std::move(st)};
    }
    case oc::op_if_cons: {
        need(i, st, 1);
        if (!is(atop(st), type_ctor::t_list)) fail(i, "expected a list on top");
        mtype_ptr l = pop(st);
        tstack cons_in = st;
        push(cons_in, l);
        push(cons_in, l->args[0]);
        tc_out bc = check_seq(i.blocks[0], std::move(cons_in));
        tc_out be = check_seq(i.blocks[1], std::move(st));
        if (bc.failed && be.failed) return {{}, true};
        if (bc.failed) return be;
        if (be.failed) return bc;
        same_stack(i, bc.stack, be.stack, "branches");
        return bc;
    }
    case oc::op_empty_set:
        push(st, ty_set(i.ty));
        return {std::move(st)};
    case oc::op_empty_map:
        push(st, ty_map(i.ty, i.ty2));
        return {std::move(st)};
    case oc::op_mem: {
        need(i, st, 2);
        mtype_ptr k = pop(st);
        const mtype_ptr& c = atop(st);
        if (is(c, type_ctor::t_set)) {
            if (!type_eq(c->args[0], k)) fail(i, "key type does not match set element type");
        } else if (is(c, type_ctor::t_map)) {
            if (!type_eq(c->args[0], k)) fail(i, "key type does not match map key type");
        } else {
            fail(i, "expected a set or map under the key");
        }
        pop(st);
        push(st, ty_bool());
        return {std::move(st)};
    }
    case oc::op_get: {
        need(i, st, 2);
        mtype_ptr k = pop(st);
        if (!is(atop(st), type_ctor::t_map)) fail(i, "expected a map under the key");
        mtype_ptr m = pop(st);
        if (!type_eq(m->args[0], k)) fail(i, "key type does not match map key type");
        push(st, ty_option(m->args[1]));
        return {std::move(st)};
    }
    case oc::op_update: {
        need(i, st, 3);
        mtype_ptr k = pop(st);
        mtype_ptr v = pop(st);
        const mtype_ptr& c = atop(st);
        if (is(c, type_ctor::t_set)) {
            if (!type_eq(c->args[0], k)) fail(i, "key type does not match set element type");
            if (!is(v, type_ctor::t_bool)) fail(i, "set update needs a bool");
        } else if (is(c, type_ctor::t_map)) {
            if (!type_eq(c->args[0], k)) fail(i, "key type does not match map key type");
            if (!is(v, type_ctor::t_option) || !type_eq(v->args[0], c->args[1]))
                fail(i, "map update needs an option of the value type");
        } else {
            fail(i, "expected a set or map in third position");
        }
        return {std::move(st)};
    }
    case oc::op_size: {
        need(i, st, 1);
        const mtype_ptr& c = atop(st);
        switch (c->ctor) {
        case type_ctor::t_list:
        case type_ctor::t_set:
        case type_ctor::t_map:
        case type_ctor::t_string: break;
        default: fail(i, "expected a list, set, map or string on top");
        }
        pop(st);
        push(st, ty_nat());
        return {std::move(st)};
    }
    case oc::op_iter: {
        need(i, st, 1);
        const mtype_ptr c = pop(st);
        mtype_ptr elem;
        if (is(c, type_ctor::t_list) || is(c, type_ctor::t_set)) elem = c->args[0];
        else if (is(c, type_ctor::t_map)) elem = ty_pair(c->args[0], c->args[1]);
        else fail(i, "expected a list, set or map on top");
        tstack body_in = st;
        push(body_in, elem);
        tc_out body = check_seq(i.blocks[0], std::move(body_in));
        if (body.failed) fail(i, "body may not fail unconditionally");
        same_stack(i, body.stack, st, "body entry and exit");
        return {std::move(st)};
    }
    case oc::op_map: {
        need(i, st, 1);
        const mtype_ptr c = pop(st);
        mtype_ptr elem;
        if (is(c, type_ctor::t_list)) elem = c->args[0];
        else if (is(c, type_ctor::t_map)) elem = ty_pair(c->args[0], c->args[1]);
        else fail(i, "expected a list or map on top");
        tstack body_in = st;
        push(body_in, elem);
        tc_out body = check_seq(i.blocks[0], std::move(body_in));
        if (body.failed) fail(i, "body may not fail unconditionally");
        if (body.stack.empty()) fail(i, "body must produce a value");
        mtype_ptr res = body.stack.front();
        tstack rest(body.stack.begin() + 1, body.stack.end());
        same_stack(i, rest, st, "body entry and exit");
        push(st, is(c, type_ctor::t_list) ? ty_list(res) : ty_map(c->args[0], res));
        return {std::move(st)};
    }
    case oc::op_add: {
        need(i, st, 2);
        mtype_ptr a = pop(st), b = pop(st);
        i.mutez_checked = is(a, type_ctor::t_mutez) && is(b, type_ctor::t_mutez);
        push(st, add_result(i, a, b));
        return {std::move(st)};
    }
    case oc::op_sub: {
        need(i, st, 2);
        mtype_ptr a = pop(st), b = pop(st);
        i.mutez_checked = is(a, type_ctor::t_mutez) && is(b, type_ctor::t_mutez);
        push(st, sub_result(i, a, b));
        return {std::move(st)};
    }
    case oc::op_mul: {
        need(i, st, 2);
        mtype_ptr a = pop(st), b = pop(st);
        i.mutez_checked = is(a, type_ctor::t_mutez) || is(b, type_ctor::t_mutez);
        push(st, mul_result(i, a, b));
        return {std::move(st)};
    }
    case oc::op_ediv: {
        need(i, st, 2);
        mtype_ptr a = pop(st), b = pop(st);
        push(st, ediv_result(i, a, b));
        return {std::move(st)};
    }
    case oc::op_neg: {
        need(i, st, 1);
        const mtype_ptr& a = atop(st);
        if (!is(a, type_ctor::t_int) && !is(a, type_ctor::t_nat))
            fail(i, "expected int or nat on top");
        pop(st);
        push(st, ty_int());
        return {std::move(st)};
    }
    case oc::op_abs: {
        need(i, st, 1);
        if (!is(atop(st), type_ctor::t_int)) fail(i, "expected int on top");
        pop(st);
        push(st, ty_nat());
        return {std::move(st)};
    }
    case oc::op_isnat: {
        need(i, st, 1);
        if (!is(atop(st), type_ctor::t_int)) fail(i, "expected int on top");
        pop(st);
        push(st, ty_option(ty_nat()));
        return {std::move(st)};
    }
    case oc::op_int: {
        need(i, st, 1);
        if (!is(atop(st), type_ctor::t_nat)) fail(i, "expected nat on top");
        pop(st);
        push(st, ty_int());
        return {std::move(st)};
    }
    case oc::op_lsl:
    case oc::op_lsr: {
        need(i, st, 2);
        if (!is(atop(st, 0), type_ctor::t_nat) || !is(atop(st, 1), type_ctor::t_nat))
            fail(i, "expected two nats");
        pop(st);
        return {std::move(st)};
    }
    case oc::op_and:
    case oc::op_or:
    case oc::op_xor: {
        need(i, st, 2);
        const mtype_ptr& a = atop(st, 0);
        const mtype_ptr& b = atop(st, 1);
        bool bools = is(a, type_ctor::t_bool) && is(b, type_ctor::t_bool);
        bool nats = is(a, type_ctor::t_nat) && is(b, type_ctor::t_nat);
        if (!bools && !nats) fail(i, "expected two bools or two nats");
        pop(st);
        return {std::move(st)};
    }
    case oc::op_not: {
        need(i, st, 1);
        const mtype_ptr& a = atop(st);
        if (is(a, type_ctor::t_bool)) { pop(st); push(st, ty_bool()); }
        else if (is(a, type_ctor::t_int) || is(a, type_ctor::t_nat)) { pop(st); push(st, ty_int()); }
        else fail(i, "expected bool, int or nat on top");
        return {std::move(st)};
    }
    case oc::op_compare: {
        need(i, st, 2);
        mtype_ptr a = pop(st), b = pop(st);
        if (!type_eq(a, b)) fail(i, "operands have different types");
        if (!a->is_comparable()) fail(i, a->to_string() + " is not comparable");
        push(st, ty_int());
        return {std::move(st)};
    }
    case oc::op_eq:
    case oc::op_neq:
    case oc::op_lt:
    case oc::op_gt:
    case oc::op_le:
    case oc::op_ge: {
        need(i, st, 1);
        if (!is(atop(st), type_ctor::t_int)) fail(i, "expected int on top");
        pop(st);
        push(st, ty_bool());
        return {std::move(st)};
    }
    case oc::op_if: {
        need(i, st, 1);
        if (!is(atop(st), type_ctor::t_bool)) fail(i, "expected bool on top");
        pop(st);
        tc_out bt = check_seq(i.blocks[0], st);
        tc_out bf = check_seq(i.blocks[1], std::move(st));
        if (bt.failed && bf.failed) return {{}, true};
        if (bt.failed) return bf;
        if (bf.failed) return bt;
        same_stack(i, bt.stack, bf.stack, "branches");
        return bt;
    }
    case oc::op_loop: {
        need(i, st, 1);
        if (!is(atop(st), type_ctor::t_bool)) fail(i, "expected bool on top");
        pop(st);
        tc_out body = check_seq(i.blocks[0], st);
        if (body.failed) fail(i, "body may not fail unconditionally");
        if (body.stack.empty() || !is(body.stack.front(), type_ctor::t_bool))
            fail(i, "body must leave a bool on top");
        tstack rest(body.stack.begin() + 1, body.stack.end());
        same_stack(i, rest, st, "body entry and exit");
        return {std::move(st)};
    }
    case oc::op_loop_left: {
        need(i, st, 1);
        if (!is(atop(st), type_ctor::t_or)) fail(i, "expected a union on top");
        mtype_ptr u = pop(st);
        tstack body_in = st;
        push(body_in, u->args[0]);
        tc_out body = check_seq(i.blocks[0], std::move(body_in));
        if (body.failed) fail(i, "body may not fail unconditionally");
        if (body.stack.empty() || !type_eq(body.stack.front(), u))
            fail(i, "body must leave a " + u->to_string() + " on top");
        tstack rest(body.stack.begin() + 1, body.stack.end());
        same_stack(i, rest, st, "body entry and exit");
        push(st, u->args[1]);
        return {std::move(st)};
    }
    case oc::op_failwith:
        need(i, st, 1);
        return {{}, true};
    case oc::op_sender:
    case oc::op_source:
    case oc::op_self_address:
        push(st, ty_address());
        return {std::move(st)};
    case oc::op_amount:
    case oc::op_balance:
        push(st, ty_mutez());
        return {std::move(st)};
    case oc::op_now:
        push(st, ty_timestamp());
        return {std::move(st)};
    case oc::op_contract: {
        need(i, st, 1);
        if (!is(atop(st), type_ctor::t_address)) fail(i, "expected address on top");
        if (i.ty->contains_operation()) fail(i, "contract parameter type cannot contain operations");
        pop(st);
        push(st, ty_option(ty_contract(i.ty)));
        return {std::move(st)};
    }
    case oc::op_transfer_tokens: {
        need(i, st, 3);
        mtype_ptr arg = pop(st);
        mtype_ptr amt = pop(st);
        mtype_ptr dst = pop(st);
        if (!is(amt, type_ctor::t_mutez)) fail(i, "expected mutez in second position");
        if (!is(dst, type_ctor::t_contract)) fail(i, "expected a contract in third position");
        if (!type_eq(dst->args[0], arg))
            fail(i, "argument type does not match contract parameter type");
        push(st, ty_operation());
        return {std::move(st)};
    }
    }
    fail(i, "unhandled instruction");
}

tc_out check_seq(instr_seq& code, tstack in) {
    tc_out cur{std::move(in)};
    for (size_t k = 0; k < code.size(); ++k) {
        if (cur.failed)
            throw script_error("unreachable code after FAILWITH", code[k].where);
        cur = check_instr(code[k], std::move(cur.stack));
    }
    return cur;
}

void collect_leaves(const mtype_ptr& t, std::vector<bool>& path,
                    std::vector<entrypoint>& out) {
    if (t->ctor == type_ctor::t_or) {
        path.push_back(false);
        collect_leaves(t->args[0], path, out);
        path.back() = true;
        collect_leaves(t->args[1], path, out);
        path.pop_back();
        return;
    }
    entrypoint ep;
    ep.ty = t;
    ep.path = path;
    ep.name = t->annot;
    out.push_back(std::move(ep));
}

} // namespace

std::vector<entrypoint> entrypoints_of(const mtype_ptr& param_ty) {
    std::vector<entrypoint> out;
    if (param_ty->ctor != type_ctor::t_or) {
        entrypoint ep;
        ep.ty = param_ty;
        ep.name = param_ty->annot.empty() ? "default" : param_ty->annot;
        out.push_back(std::move(ep));
        return out;
    }
    std::vector<bool> path;
    collect_leaves(param_ty, path, out);
    for (size_t k = 0; k < out.size(); ++k)
        if (out[k].name.empty()) out[k].name = "ep" + std::to_string(k);
    std::set<std::string> seen;
    for (const auto& ep : out)
        if (!seen.insert(ep.name).second)
            throw script_error("duplicate entry point name '" + ep.name + "'");
    return out;
}

void check_literal(const literal& lit, const mtype_ptr& ty) {
    auto bad = [&]() -> script_error {
        return script_error("literal does not match type " + ty->to_string(), lit.where);
    };
    switch (ty->ctor) {
    case type_ctor::t_int:
        if (lit.kind != lit_kind::l_int) throw bad();
        return;
    case type_ctor::t_nat:
        if (lit.kind != lit_kind::l_int || lit.num < 0) throw bad();
        return;
    case type_ctor::t_mutez:
        if (lit.kind != lit_kind::l_int || lit.num < 0 || lit.num > mutez_max()) throw bad();
        return;
    case type_ctor::t_timestamp:
        if (lit.kind != lit_kind::l_int) throw bad();
        return;
    case type_ctor::t_bool:
        if (lit.kind != lit_kind::l_bool) throw bad();
        return;
    case type_ctor::t_string:
    case type_ctor::t_address:
        if (lit.kind != lit_kind::l_string) throw bad();
        return;
    case type_ctor::t_unit:
        if (lit.kind != lit_kind::l_unit) throw bad();
        return;
    case type_ctor::t_pair:
        if (lit.kind != lit_kind::l_pair) throw bad();
        check_literal(*lit.items[0], ty->args[0]);
        check_literal(*lit.items[1], ty->args[1]);
        return;
    case type_ctor::t_option:
        if (lit.kind == lit_kind::l_none) return;
        if (lit.kind != lit_kind::l_some) throw bad();
        check_literal(*lit.items[0], ty->args[0]);
        return;
    case type_ctor::t_or:
        if (lit.kind == lit_kind::l_left) { check_literal(*lit.items[0], ty->args[0]); return; }
        if (lit.kind == lit_kind::l_right) { check_literal(*lit.items[0], ty->args[1]); return; }
        throw bad();
    case type_ctor::t_list:
        if (lit.kind != lit_kind::l_seq) throw bad();
        for (const auto& it : lit.items) check_literal(*it, ty->args[0]);
        return;
    case type_ctor::t_set:
        if (lit.kind != lit_kind::l_seq) throw bad();
        for (const auto& it : lit.items) check_literal(*it, ty->args[0]);
        return;
    case type_ctor::t_map:
        if (lit.kind == lit_kind::l_seq && lit.items.empty()) return; // {} is the empty map
        if (lit.kind != lit_kind::l_map) throw bad();
        for (const auto& [k, v] : lit.entries) {
            check_literal(*k, ty->args[0]);
            check_literal(*v, ty->args[1]);
        }
        return;
    case type_ctor::t_operation:
    case type_ctor::t_contract:
        throw bad();
    }
}

typed_script typecheck(script sc) {
    typed_script out;
    out.entrypoints = entrypoints_of(sc.param_ty);
    tstack in;
    in.push_back(ty_pair(sc.param_ty, sc.storage_ty));
    tc_out res = check_seq(sc.code, std::move(in));
    if (!res.failed) {
        mtype_ptr want = ty_pair(ty_list(ty_operation()), sc.storage_ty);
        if (res.stack.size() != 1 || !type_eq(res.stack[0], want))
            throw script_error("code must leave exactly [pair (list operation) " +
                               sc.storage_ty->to_string() + "] on the stack");
    }
    out.sc = std::move(sc);
    return out;
}

} // namespace michelstat
