#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "michelstat/abstract_state.hpp"
#include "michelstat/addr_abs.hpp"
#include "michelstat/bool_abs.hpp"
#include "michelstat/domain.hpp"
#include "michelstat/eq_classes.hpp"
#include "michelstat/interval.hpp"
#include "michelstat/sym_expr.hpp"

using namespace michelstat;

namespace {
interval iv(long lo, long hi) { return interval(bound(lo), bound(hi)); }
interval from(long lo) { return interval(bound(lo), bound::plus_inf()); }
cell_var cv(uint64_t root) { return cell_var{root, {}}; }
} // namespace

TEST_CASE("interval basics") {
    CHECK(iv(1, 2).to_string() == "[1, 2]");
    CHECK(from(0).to_string() == "[0, +oo)");
    CHECK(interval(bound::minus_inf(), bound(3)).to_string() == "(-oo, 3]");
    CHECK(interval::bottom().to_string() == "_|_");
    CHECK(interval::bottom().is_bottom());
    CHECK(iv(2, 1).is_bottom()); // normalizes
    CHECK(iv(3, 3).is_singleton());
    CHECK(iv(1, 4).contains(4));
    CHECK_FALSE(iv(1, 4).contains(5));
}

TEST_CASE("interval lattice") {
    CHECK((iv(0, 3) | iv(5, 9)) == iv(0, 9));
    CHECK((iv(0, 5) & iv(3, 9)) == iv(3, 5));
    CHECK((iv(0, 2) & iv(5, 9)).is_bottom());
    CHECK(iv(1, 2).leq(iv(0, 3)));
    CHECK_FALSE(iv(0, 3).leq(iv(1, 2)));
    CHECK(interval::bottom().leq(iv(7, 7)));
    CHECK((interval::bottom() | iv(1, 2)) == iv(1, 2));

    // widening jumps unstable bounds to infinity
    CHECK(iv(0, 0).widen(iv(0, 1)) == from(0));
    CHECK(iv(0, 5).widen(iv(0, 5)) == iv(0, 5));
    CHECK(iv(0, 5).widen(iv(-1, 5)) == interval(bound::minus_inf(), bound(5)));
    // narrowing recovers only infinite bounds
    CHECK(from(0).narrow(iv(0, 10)) == iv(0, 10));
    CHECK(iv(0, 10).narrow(iv(0, 5)) == iv(0, 10));
}

TEST_CASE("interval arithmetic") {
    CHECK(iv(1, 2) + iv(3, 4) == iv(4, 6));
    CHECK(iv(1, 2) - iv(3, 4) == iv(-3, -1));
    CHECK(iv(-2, 3) * iv(4, 5) == iv(-10, 15));
    CHECK(-iv(1, 2) == iv(-2, -1));
    CHECK((from(1) * iv(-1, -1)).to_string() == "(-oo, -1]");
    CHECK((iv(1, 1) + interval::bottom()).is_bottom());
}

TEST_CASE("kind ranges") {
    CHECK(kind_range(cell_kind::ck_nat) == from(0));
    CHECK(kind_range(cell_kind::ck_int).is_top());
    CHECK(kind_range(cell_kind::ck_mutez) == interval(bound(0), bound(mutez_max())));
    CHECK(kind_range(cell_kind::ck_bool) == iv(0, 1));
    CHECK(kind_range(cell_kind::ck_tag) == iv(0, 1));
    CHECK(kind_range(cell_kind::ck_len) == from(0));
    CHECK(kind_range(cell_kind::ck_card) == from(0));
}

TEST_CASE("checked mutez addition flags and clips the overflow") {
    interval near_top(bound(mutez_max() - 2), bound(mutez_max() - 1));
    itv_binop_result r = itv_binop(itv_op::add, cell_kind::ck_mutez, near_top, iv(1, 1));
    CHECK(r.mutez_overflow == false);
    CHECK(r.result == interval(bound(mutez_max() - 1), bound(mutez_max())));

    interval at_top(bound(mutez_max() - 1), bound(mutez_max()));
    r = itv_binop(itv_op::add, cell_kind::ck_mutez, at_top, iv(1, 1));
    CHECK(r.mutez_overflow);
    // the surviving flow is pinned to the single non-failing sum
    CHECK(r.result == interval(bound(mutez_max()), bound(mutez_max())));

    r = itv_binop(itv_op::add, cell_kind::ck_mutez,
                  interval(bound(mutez_max()), bound(mutez_max())), iv(1, 1));
    CHECK(r.mutez_overflow);
    CHECK(r.result.is_bottom()); // every pair overflows
}

TEST_CASE("checked mutez subtraction and multiplication") {
    itv_binop_result r = itv_binop(itv_op::sub, cell_kind::ck_mutez, iv(0, 5), iv(3, 3));
    CHECK(r.mutez_overflow); // underflow possible
    CHECK(r.result == iv(0, 2));

    r = itv_binop(itv_op::sub, cell_kind::ck_mutez, iv(5, 9), iv(1, 2));
    CHECK_FALSE(r.mutez_overflow);
    CHECK(r.result == iv(3, 8));

    r = itv_binop(itv_op::mul, cell_kind::ck_mutez, iv(3, 3), iv(4, 4));
    CHECK_FALSE(r.mutez_overflow);
    CHECK(r.result == iv(12, 12));

    interval half(big_int(1) << 62);
    r = itv_binop(itv_op::mul, cell_kind::ck_mutez, half, iv(2, 2));
    CHECK(r.mutez_overflow);
    CHECK(r.result.is_bottom());

    // unchecked nat arithmetic never flags
    r = itv_binop(itv_op::add, cell_kind::ck_nat, from(0), from(0));
    CHECK_FALSE(r.mutez_overflow);
    CHECK(r.result == from(0));
}

TEST_CASE("shift transfer function") {
    itv_binop_result r = itv_binop(itv_op::lsl, cell_kind::ck_nat, iv(1, 2), iv(0, 8));
    CHECK_FALSE(r.shift_overflow);
    CHECK(r.result == iv(1, 512));

    r = itv_binop(itv_op::lsl, cell_kind::ck_nat, iv(1, 1), iv(257, 257));
    CHECK(r.shift_overflow);
    CHECK(r.result.is_bottom());

    r = itv_binop(itv_op::lsl, cell_kind::ck_nat, iv(1, 1), iv(250, 260));
    CHECK(r.shift_overflow);
    CHECK(r.result == interval(bound(big_int(1) << 250), bound(big_int(1) << 256)));

    r = itv_binop(itv_op::lsr, cell_kind::ck_nat, iv(256, 256), iv(4, 4));
    CHECK_FALSE(r.shift_overflow);
    CHECK(r.result == iv(16, 16));
}

TEST_CASE("bitwise transfer functions stay sound") {
    itv_binop_result r = itv_binop(itv_op::band, cell_kind::ck_nat, iv(12, 12), iv(10, 10));
    CHECK(r.result.contains(12 & 10));
    r = itv_binop(itv_op::bor, cell_kind::ck_nat, iv(12, 12), iv(10, 10));
    CHECK(r.result.contains(12 | 10));
    r = itv_binop(itv_op::bxor, cell_kind::ck_nat, iv(12, 12), iv(10, 10));
    CHECK(r.result.contains(12 ^ 10));
    // bool xor of two definite trues is exactly false
    r = itv_binop(itv_op::bxor, cell_kind::ck_bool, iv(1, 1), iv(1, 1));
    CHECK(r.result == iv(0, 0));
}

TEST_CASE("Euclidean division transfer function") {
    itv_ediv_result d = itv_ediv(iv(7, 7), iv(2, 2));
    CHECK(d.some_possible);
    CHECK_FALSE(d.none_possible);
    CHECK(d.quot == iv(3, 3));
    CHECK(d.rem == iv(0, 1));

    d = itv_ediv(iv(-7, -7), iv(2, 2));
    CHECK(d.quot == iv(-4, -4)); // floors, remainder non-negative

    d = itv_ediv(iv(-7, -7), iv(-2, -2));
    CHECK(d.quot == iv(4, 4));

    d = itv_ediv(iv(7, 7), iv(0, 2));
    CHECK(d.none_possible);
    CHECK(d.some_possible);
    CHECK(d.quot == iv(3, 7));

    d = itv_ediv(iv(5, 5), iv(0, 0));
    CHECK(d.none_possible);
    CHECK_FALSE(d.some_possible);
    CHECK(d.quot.is_bottom());
}

TEST_CASE("abstract comparison outcomes") {
    CHECK(itv_compare(iv(1, 2), iv(3, 4)) == iv(-1, -1));
    CHECK(itv_compare(iv(3, 4), iv(1, 2)) == iv(1, 1));
    CHECK(itv_compare(iv(2, 2), iv(2, 2)) == iv(0, 0));
    CHECK(itv_compare(iv(1, 5), iv(3, 4)) == iv(-1, 1));
    CHECK(itv_compare(iv(2, 3), iv(2, 2)) == iv(0, 1));
    CHECK(itv_compare(interval::bottom(), iv(1, 1)).is_bottom());
}

TEST_CASE("condition refinement keeps satisfying pairs") {
    itv_refined r = itv_assume(cmp_rel::lt, iv(0, 10), iv(5, 5));
    CHECK(r.x == iv(0, 4));
    CHECK(r.y == iv(5, 5));
    r = itv_assume(cmp_rel::eq, iv(0, 10), iv(7, 20));
    CHECK(r.x == iv(7, 10));
    CHECK(r.y == iv(7, 10));
    r = itv_assume(cmp_rel::ge, iv(0, 10), iv(4, 6));
    CHECK(r.x == iv(4, 10));
    CHECK(r.y == iv(4, 6));
    r = itv_assume(cmp_rel::lt, iv(5, 5), iv(0, 3));
    CHECK(r.x.is_bottom());
    // ne only refines near singletons
    r = itv_assume(cmp_rel::ne, iv(0, 10), iv(0, 0));
    CHECK(r.x == iv(1, 10));
}

TEST_CASE("interval environment") {
    itv_env e;
    e.set(cv(1), iv(0, 5));
    CHECK(e.get(cv(1)) == iv(0, 5));
    CHECK(e.get(cv(2)).is_top()); // absent means unconstrained

    itv_env f = e;
    f.set(cv(1), iv(3, 9));
    itv_env j = e.join(f);
    CHECK(j.get(cv(1)) == iv(0, 9));
    CHECK(e.meet(f).get(cv(1)) == iv(3, 5));
    CHECK(e.widen(f).get(cv(1)) == interval(bound(0), bound::plus_inf()));
    CHECK(f.leq(j));
    CHECK_FALSE(j.leq(f));

    e.assume({cmp_rel::gt, cv(1), std::nullopt, iv(10, 10)});
    CHECK(e.is_bottom()); // [0,5] > 10 is contradictory
    CHECK(e.leq(f));

    itv_env g;
    g.set(cv(3), iv(1, 2));
    g.rename_root(3, 7);
    CHECK(g.get(cv(3)).is_top());
    CHECK(g.get(cv(7)) == iv(1, 2));
}

TEST_CASE("boolean lattice") {
    CHECK(bool_abs(true).is_true());
    CHECK((bool_abs(true) | bool_abs(false)).is_top());
    CHECK((bool_abs::top() & bool_abs(true)) == bool_abs(true));
    CHECK((!bool_abs(true)).is_false());
    CHECK((!bool_abs::top()).is_top());
    CHECK(bool_abs(true).leq(bool_abs::top()));
    CHECK_FALSE(bool_abs::top().leq(bool_abs(true)));
    CHECK(bool_abs::from_interval(iv(0, 1)).is_top());
    CHECK(bool_abs::from_interval(iv(1, 1)).is_true());
    CHECK(bool_abs::from_interval(interval::bottom()).is_bottom());
    CHECK(bool_abs(false).to_interval() == iv(0, 0));
    CHECK(bool_abs::top().to_interval() == iv(0, 1));
}

TEST_CASE("address abstraction") {
    addr_abs a = addr_abs::of_const("alice");
    addr_abs b = addr_abs::of_const("bob");
    CHECK(addr_compare(a, a) == addr_cmp::definitely_eq);
    CHECK(addr_compare(a, b) == addr_cmp::definitely_ne);
    CHECK(addr_compare(a, addr_abs::top()) == addr_cmp::unknown);

    addr_abs j = a.join(b);
    CHECK(j.consts_known());
    CHECK(j.consts().size() == 2);
    CHECK(addr_compare(j, a) == addr_cmp::unknown);
    // widening gives up on growing constant sets
    CHECK(a.widen(j).consts_known() == false);
    CHECK(a.widen(a).consts_known());

    addr_abs s1 = addr_abs::sender(1);
    addr_abs s2 = addr_abs::sender(2);
    CHECK(addr_compare(s1, s1) == addr_cmp::definitely_eq);
    CHECK(addr_compare(s1, s2) == addr_cmp::unknown); // different call, no fact

    addr_pair ne = addr_assume_ne(addr_abs::top(), s1);
    CHECK(ne.a.rel() == addr_abs::srel::not_sender);
    CHECK(addr_compare(ne.a, s1) == addr_cmp::definitely_ne);
    ne = addr_assume_ne(s1, s1);
    CHECK(ne.a.is_bottom());

    addr_pair eq = addr_assume_eq(addr_abs::top(), s1);
    CHECK(eq.a.is_sender_of(1));
    CHECK(a.meet(b).is_bottom());
    CHECK(a.leq(j));
    CHECK_FALSE(j.leq(a));
}

TEST_CASE("string abstraction") {
    str_abs c = str_abs::of("hi");
    CHECK(c.leq(str_abs::top()));
    CHECK(c.join(str_abs::of("hi")) == c);
    CHECK(c.join(str_abs::of("yo")) == str_abs::top());
    CHECK(c.meet(str_abs::of("yo")) == str_abs::bottom());
    CHECK(str_abs::bottom().join(c) == c);
    CHECK(c.to_string() == "\"hi\"");
}

TEST_CASE("equality classes") {
    eq_classes e;
    CHECK_FALSE(e.same(cv(1), cv(2)));
    e.merge(cv(1), cv(2));
    e.merge(cv(2), cv(3));
    CHECK(e.same(cv(1), cv(3)));
    CHECK(e.classmates(cv(1)).size() == 2);
    CHECK(e.classmates(cv(9)).empty());

    e.forget(cv(2));
    CHECK(e.same(cv(1), cv(3)));
    CHECK_FALSE(e.same(cv(1), cv(2)));
    e.forget(cv(3)); // class shrinks to one member and disappears
    CHECK(e.classmates(cv(1)).empty());
}

TEST_CASE("equality class join is partition intersection") {
    eq_classes a;
    a.merge(cv(1), cv(2));
    a.merge(cv(2), cv(3));
    eq_classes b;
    b.merge(cv(1), cv(2));
    b.merge(cv(4), cv(5));
    eq_classes j = a.join(b);
    CHECK(j.same(cv(1), cv(2)));
    CHECK_FALSE(j.same(cv(2), cv(3)));
    CHECK_FALSE(j.same(cv(4), cv(5)));
    CHECK(a.leq(j));
    CHECK(b.leq(j));
    CHECK_FALSE(j.leq(b));

    eq_classes r = a;
    r.rename(cv(3), cv(30));
    CHECK(r.same(cv(1), cv(30)));
    CHECK_FALSE(r.same(cv(1), cv(3)));
    r.rename_root(1, 10);
    CHECK(r.same(cv(10), cv(2)));
}

TEST_CASE("symbolic bindings stay shallow") {
    sym_env e;
    cell_var a = cv(1), b = cv(2), c = cv(3);
    e.bind(b, sym_app(sym_node::s_add, {sym_var(a), sym_num(1)}));
    e.bind(c, sym_app(sym_node::s_add, {sym_var(b), sym_num(2)}));
    // c's binding mentions b itself, not b's definition
    REQUIRE(e.get(c));
    CHECK(sym_equal(*e.get(c), *sym_app(sym_node::s_add, {sym_var(b), sym_num(2)})));
    CHECK(e.mentions(b));

    CHECK_THROWS_AS(e.bind(b, sym_app(sym_node::s_neg, {sym_var(b)})), std::logic_error);

    // depth cap drops runaway expressions
    sym_ptr deep = sym_var(a);
    for (int i = 0; i < sym_depth_cap + 1; ++i) deep = sym_app(sym_node::s_neg, {deep});
    e.bind(cv(9), deep);
    CHECK(e.get(cv(9)) == nullptr);
}

TEST_CASE("symbolic environment join and renaming") {
    sym_env e1, e2;
    e1.bind(cv(5), sym_app(sym_node::s_add, {sym_var(cv(1)), sym_num(1)}));
    e1.bind(cv(6), sym_num(42));
    e2.bind(cv(5), sym_app(sym_node::s_add, {sym_var(cv(1)), sym_num(1)}));
    e2.bind(cv(6), sym_num(43));
    sym_env j = e1.join(e2);
    CHECK(j.get(cv(5)) != nullptr); // identical on both sides
    CHECK(j.get(cv(6)) == nullptr); // disagreeing bindings drop
    CHECK(e1.leq(j));               // more bindings = more precise
    CHECK_FALSE(j.leq(e1));

    sym_env r = e1;
    r.rename(cv(1), cv(10));
    CHECK(sym_mentions(*r.get(cv(5)), cv(10)));
    CHECK_FALSE(sym_mentions(*r.get(cv(5)), cv(1)));

    r.subst_everywhere(cv(10), sym_num(7));
    CHECK(sym_equal(*r.get(cv(5)), *sym_app(sym_node::s_add, {sym_num(7), sym_num(1)})));

    sym_env d = e1;
    d.drop_mentions(cv(1));
    CHECK(d.get(cv(5)) == nullptr);
    CHECK(d.get(cv(6)) != nullptr);
}

TEST_CASE("guard resolution recognizes comparison shapes") {
    sym_env e;
    cell_var g = cv(9), x = cv(1), y = cv(2);

    e.bind(g, sym_app(sym_node::s_lt, {sym_app(sym_node::s_compare, {sym_var(x), sym_num(10)})}));
    auto rels = e.resolve_guard(g, true);
    REQUIRE(rels.size() == 1);
    CHECK(rels[0].rel == cmp_rel::lt);
    CHECK(rels[0].x == x);
    CHECK_FALSE(rels[0].y.has_value());
    CHECK(rels[0].k == 10);
    // the false branch negates
    rels = e.resolve_guard(g, false);
    REQUIRE(rels.size() == 1);
    CHECK(rels[0].rel == cmp_rel::ge);

    e.bind(g, sym_app(sym_node::s_ge, {sym_app(sym_node::s_compare, {sym_var(x), sym_var(y)})}));
    rels = e.resolve_guard(g, true);
    REQUIRE(rels.size() == 1);
    CHECK(rels[0].rel == cmp_rel::ge);
    REQUIRE(rels[0].y.has_value());
    CHECK(*rels[0].y == y);

    // constant on the left flips the relation onto the variable
    e.bind(g, sym_app(sym_node::s_lt, {sym_app(sym_node::s_compare, {sym_num(5), sym_var(x)})}));
    rels = e.resolve_guard(g, true);
    REQUIRE(rels.size() == 1);
    CHECK(rels[0].rel == cmp_rel::gt);
    CHECK(rels[0].x == x);
    CHECK(rels[0].k == 5);

    // EQ-style guards test against zero
    e.bind(g, sym_app(sym_node::s_eq, {sym_var(x)}));
    rels = e.resolve_guard(g, true);
    REQUIRE(rels.size() == 1);
    CHECK(rels[0].rel == cmp_rel::eq);
    CHECK(rels[0].k == 0);

    CHECK(e.resolve_guard(cv(100), true).empty()); // no binding, no relations
}
