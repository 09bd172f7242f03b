#include "michelstat/interval.hpp"

namespace michelstat {

bool is_numeric_kind(cell_kind k) {
    switch (k) {
    case cell_kind::ck_address:
    case cell_kind::ck_string:
    case cell_kind::ck_unit:
    case cell_kind::ck_operation: return false;
    default: return true;
    }
}

interval kind_range(cell_kind k) {
    switch (k) {
    case cell_kind::ck_int:
    case cell_kind::ck_timestamp:
        return interval::top();
    case cell_kind::ck_nat:
    case cell_kind::ck_len:
    case cell_kind::ck_card:
        return interval(bound(0), bound::plus_inf());
    case cell_kind::ck_mutez:
        return interval(bound(0), bound(mutez_max()));
    case cell_kind::ck_bool:
    case cell_kind::ck_tag:
        return interval(bound(0), bound(1));
    default:
        return interval::top();
    }
}

namespace {

bound shift_left(const bound& b, const big_int& amt) {
    if (!b.is_finite()) return b;
    return bound(b.number() << amt.convert_to<unsigned>());
}

bound shift_right(const bound& b, const big_int& amt) {
    if (!b.is_finite()) return b;
    return bound(b.number() >> amt.convert_to<unsigned>());
}

// Euclidean quotient bound for a positive divisor (quotient = floor(n/d)).
bound equot_pos(const bound& n, const bound& d) {
    if (n.is_plus_inf()) return bound::plus_inf();
    if (n.is_minus_inf()) return bound::minus_inf();
    if (d.is_plus_inf()) return bound(n.number() >= 0 ? 0 : -1);
    big_int q, r;
    ediv_euclid(n.number(), d.number(), q, r);
    return bound(std::move(q));
}

// Euclidean quotient bound for a negative divisor (quotient = ceil(n/d)).
bound equot_neg(const bound& n, const bound& d) {
    if (n.is_plus_inf()) return bound::minus_inf();
    if (n.is_minus_inf()) return bound::plus_inf();
    if (d.is_minus_inf()) return bound(n.number() > 0 ? 0 : n.number() < 0 ? 1 : 0);
    big_int q, r;
    ediv_euclid(n.number(), d.number(), q, r);
    return bound(std::move(q));
}

interval corner_quot(const interval& l, const interval& d, bool positive) {
    bound q1 = positive ? equot_pos(l.lb(), d.lb()) : equot_neg(l.lb(), d.lb());
    bound q2 = positive ? equot_pos(l.lb(), d.ub()) : equot_neg(l.lb(), d.ub());
    bound q3 = positive ? equot_pos(l.ub(), d.lb()) : equot_neg(l.ub(), d.lb());
    bound q4 = positive ? equot_pos(l.ub(), d.ub()) : equot_neg(l.ub(), d.ub());
    bound lo = bound::min(bound::min(q1, q2), bound::min(q3, q4));
    bound hi = bound::max(bound::max(q1, q2), bound::max(q3, q4));
    return interval(std::move(lo), std::move(hi));
}

interval bool_corners(itv_op op, const interval& l, const interval& r) {
    interval out = interval::bottom();
    for (int a = 0; a <= 1; ++a) {
        if (!l.contains(a)) continue;
        for (int b = 0; b <= 1; ++b) {
            if (!r.contains(b)) continue;
            int v = op == itv_op::band ? (a & b) : op == itv_op::bor ? (a | b) : (a ^ b);
            out = out | interval(big_int(v));
        }
    }
    return out;
}

} // namespace

itv_ediv_result itv_ediv(const interval& l, const interval& r) {
    itv_ediv_result out{interval::bottom(), interval::bottom(), false, false};
    if (l.is_bottom() || r.is_bottom()) return out;
    out.none_possible = r.contains(0);
    interval pos = r & interval(bound(1), bound::plus_inf());
    interval neg = r & interval(bound::minus_inf(), bound(-1));
    if (!pos.is_bottom()) {
        out.some_possible = true;
        out.quot = out.quot | corner_quot(l, pos, true);
        bound rem_hi = pos.ub().is_plus_inf() ? bound::plus_inf() : pos.ub() - bound(1);
        out.rem = out.rem | interval(bound(0), std::move(rem_hi));
    }
    if (!neg.is_bottom()) {
        out.some_possible = true;
        out.quot = out.quot | corner_quot(l, neg, false);
        bound rem_hi = neg.lb().is_minus_inf() ? bound::plus_inf() : -neg.lb() - bound(1);
        out.rem = out.rem | interval(bound(0), std::move(rem_hi));
    }
    return out;
}

itv_binop_result itv_binop(itv_op op, cell_kind kind, const interval& l, const interval& r) {
    itv_binop_result out;
    if (l.is_bottom() || r.is_bottom()) {
        out.result = interval::bottom();
        return out;
    }
    interval raw = interval::bottom();
    switch (op) {
    case itv_op::add:
        raw = l + r;
        break;
    case itv_op::sub:
        raw = l - r;
        break;
    case itv_op::mul:
        raw = l * r;
        break;
    case itv_op::ediv:
        raw = itv_ediv(l, r).quot;
        break;
    case itv_op::lsl:
    case itv_op::lsr: {
        if (r.ub() > bound(256)) out.shift_overflow = true;
        interval amt = r & interval(bound(0), bound(256));
        if (amt.is_bottom()) {
            out.result = interval::bottom();
            return out;
        }
        const big_int& alo = amt.lb().number();
        const big_int& ahi = amt.ub().number();
        if (op == itv_op::lsl)
            raw = interval(shift_left(l.lb(), alo), shift_left(l.ub(), ahi));
        else
            raw = interval(shift_right(l.lb(), ahi), shift_right(l.ub(), alo));
        break;
    }
    case itv_op::band:
    case itv_op::bor:
    case itv_op::bxor: {
        if (kind == cell_kind::ck_bool) {
            raw = bool_corners(op, l, r);
        } else {
            // operands are nats
            if (op == itv_op::band)
                raw = interval(bound(0), bound::min(l.ub(), r.ub()));
            else if (op == itv_op::bor)
                raw = interval(bound::max(l.lb(), r.lb()), l.ub() + r.ub());
            else
                raw = interval(bound(0), l.ub() + r.ub());
        }
        break;
    }
    }
    if (kind == cell_kind::ck_mutez &&
        (op == itv_op::add || op == itv_op::sub || op == itv_op::mul)) {
        if (raw.ub() > bound(mutez_max())) out.mutez_overflow = true;
        if (raw.lb() < bound(0)) out.mutez_overflow = true;
    }
    out.result = raw & kind_range(kind);
    return out;
}

interval itv_compare(const interval& l, const interval& r) {
    if (l.is_bottom() || r.is_bottom()) return interval::bottom();
    bool can_lt = l.lb() < r.ub();
    bool can_gt = l.ub() > r.lb();
    bool can_eq = !(l & r).is_bottom();
    interval out = interval::bottom();
    if (can_lt) out = out | interval(big_int(-1));
    if (can_eq) out = out | interval(big_int(0));
    if (can_gt) out = out | interval(big_int(1));
    return out;
}

cmp_rel negate_rel(cmp_rel r) {
    switch (r) {
    case cmp_rel::eq: return cmp_rel::ne;
    case cmp_rel::ne: return cmp_rel::eq;
    case cmp_rel::lt: return cmp_rel::ge;
    case cmp_rel::le: return cmp_rel::gt;
    case cmp_rel::gt: return cmp_rel::le;
    case cmp_rel::ge: return cmp_rel::lt;
    }
    return r;
}

cmp_rel swap_rel(cmp_rel r) {
    switch (r) {
    case cmp_rel::lt: return cmp_rel::gt;
    case cmp_rel::le: return cmp_rel::ge;
    case cmp_rel::gt: return cmp_rel::lt;
    case cmp_rel::ge: return cmp_rel::le;
    default: return r;
    }
}

namespace {

// Removes a singleton endpoint equal to v.
interval trim_ne(const interval& x, const interval& y) {
    if (!y.is_singleton() || x.is_bottom()) return x;
    const bound& v = y.lb();
    bound lo = x.lb(), hi = x.ub();
    if (lo == v) lo = lo + bound(1);
    if (hi == v) hi = hi - bound(1);
    return interval(std::move(lo), std::move(hi));
}

} // namespace

itv_refined itv_assume(cmp_rel rel, const interval& x, const interval& y) {
    if (x.is_bottom() || y.is_bottom()) return {interval::bottom(), interval::bottom()};
    switch (rel) {
    case cmp_rel::eq: {
        interval m = x & y;
        return {m, m};
    }
    case cmp_rel::ne:
        return {trim_ne(x, y), trim_ne(y, x)};
    case cmp_rel::lt: {
        interval nx = x & interval(bound::minus_inf(), y.ub() - bound(1));
        interval ny = y & interval(x.lb() + bound(1), bound::plus_inf());
        if (nx.is_bottom() || ny.is_bottom()) return {interval::bottom(), interval::bottom()};
        return {nx, ny};
    }
    case cmp_rel::le: {
        interval nx = x & interval(bound::minus_inf(), y.ub());
        interval ny = y & interval(x.lb(), bound::plus_inf());
        if (nx.is_bottom() || ny.is_bottom()) return {interval::bottom(), interval::bottom()};
        return {nx, ny};
    }
    case cmp_rel::gt: {
        itv_refined sw = itv_assume(cmp_rel::lt, y, x);
        return {sw.y, sw.x};
    }
    case cmp_rel::ge: {
        itv_refined sw = itv_assume(cmp_rel::le, y, x);
        return {sw.y, sw.x};
    }
    }
    return {x, y};
}

} // namespace michelstat
