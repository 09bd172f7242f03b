#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "michelstat/interp.hpp"
#include "michelstat/parser.hpp"
#include "michelstat/typecheck.hpp"

using namespace michelstat;

namespace {

typed_script compile(const std::string& src) { return typecheck(parse_script(src)); }

call_context ctx0() { return {"caller", "caller", "self", 0, 0, 0}; }

cvalue_ptr run1(const typed_script& ts, cvalue_ptr arg, cvalue_ptr storage) {
    return run_contract(ts, ts.entrypoints[0].name, std::move(arg), std::move(storage), ctx0())
        .storage;
}

const typed_script& pair_fold(const char* param, const char* storage, const char* op) {
    static std::map<std::string, typed_script> cache;
    std::string src = std::string("parameter (pair ") + param + ") ; storage " + storage +
                      " ; code { CAR ; UNPAIR ; " + op + " ; NIL operation ; PAIR }";
    auto it = cache.find(src);
    if (it == cache.end()) it = cache.emplace(src, compile(src)).first;
    return it->second;
}

cvalue_ptr fold2(const char* param, const char* storage, const char* op, big_int a, big_int b) {
    return run1(pair_fold(param, storage, op), mk_pair(mk_num(std::move(a)), mk_num(std::move(b))),
                mk_num(0));
}

} // namespace

TEST_CASE("accumulator adds the parameter into storage") {
    typed_script ts = compile(
        "parameter nat ; storage nat ; code { UNPAIR ; ADD ; NIL operation ; PAIR }");
    contract_result r = run_contract(ts, "default", mk_num(3), mk_num(4), ctx0());
    CHECK(r.storage->num == 7);
    CHECK(r.operations.empty());
}

TEST_CASE("operand order: top of stack is the left operand") {
    CHECK(fold2("int int", "int", "SUB", 5, 3)->num == 2);
    CHECK(fold2("int int", "int", "SUB", 3, 5)->num == -2);
    CHECK(fold2("nat nat", "int", "SUB", 2, 9)->num == -7);
}

TEST_CASE("COMPARE yields -1, 0 or 1") {
    CHECK(fold2("int int", "int", "COMPARE", 3, 5)->num == -1);
    CHECK(fold2("int int", "int", "COMPARE", 5, 3)->num == 1);
    CHECK(fold2("int int", "int", "COMPARE", 4, 4)->num == 0);
    CHECK(fold2("int int", "int", "COMPARE", -100, 2)->num == -1);
}

TEST_CASE("NOT on int is -x-1") {
    typed_script ts = compile(
        "parameter int ; storage int ; code { CAR ; NOT ; NIL operation ; PAIR }");
    CHECK(run1(ts, mk_num(5), mk_num(0))->num == -6);
    CHECK(run1(ts, mk_num(-1), mk_num(0))->num == 0);
    CHECK(run1(ts, mk_num(0), mk_num(0))->num == -1);
}

TEST_CASE("EDIV is Euclidean and guards division by zero") {
    typed_script ts = compile(
        "parameter (pair int int) ; storage (option (pair int nat)) ;"
        "code { CAR ; UNPAIR ; EDIV ; NIL operation ; PAIR }");
    auto div = [&](big_int a, big_int b) {
        return run1(ts, mk_pair(mk_num(std::move(a)), mk_num(std::move(b))), mk_none());
    };
    cvalue_ptr r = div(7, 2);
    REQUIRE(r->a);
    CHECK(r->a->a->num == 3);
    CHECK(r->a->b->num == 1);
    r = div(-7, 2); // remainder stays non-negative
    CHECK(r->a->a->num == -4);
    CHECK(r->a->b->num == 1);
    r = div(-7, -2);
    CHECK(r->a->a->num == 4);
    CHECK(r->a->b->num == 1);
    CHECK_FALSE(div(5, 0)->a);
}

TEST_CASE("mutez addition overflows at the 63-bit cap") {
    typed_script ts = compile(
        "parameter mutez ; storage mutez ; code { UNPAIR ; ADD ; NIL operation ; PAIR }");
    CHECK(run1(ts, mk_num(1), mk_num(mutez_max() - 1))->num == mutez_max());
    try {
        run1(ts, mk_num(1), mk_num(mutez_max()));
        FAIL("expected overflow");
    } catch (const interp_failure& e) {
        CHECK(e.kind == fail_kind::f_mutez_overflow);
        CHECK(std::string(fail_kind_name(e.kind)) == "mutez-overflow");
        CHECK(e.where.line == 1);
    }
}

TEST_CASE("mutez subtraction underflows below zero") {
    typed_script ts = compile(
        "parameter mutez ; storage mutez ; code { UNPAIR ; SUB ; NIL operation ; PAIR }");
    CHECK(run1(ts, mk_num(5), mk_num(2))->num == 3);
    CHECK_THROWS_AS(run1(ts, mk_num(0), mk_num(1)), interp_failure);
    try {
        run1(ts, mk_num(0), mk_num(1));
    } catch (const interp_failure& e) {
        CHECK(e.kind == fail_kind::f_mutez_underflow);
    }
}

TEST_CASE("mutez multiplication is checked") {
    typed_script ts = compile(
        "parameter (pair mutez nat) ; storage mutez ;"
        "code { CAR ; UNPAIR ; MUL ; NIL operation ; PAIR }");
    auto mul = [&](big_int a, big_int b) {
        return run1(ts, mk_pair(mk_num(std::move(a)), mk_num(std::move(b))), mk_num(0));
    };
    CHECK(mul(10, 3)->num == 30);
    CHECK_THROWS_AS(mul(mutez_max(), 2), interp_failure);
}

TEST_CASE("shifts fail when the width exceeds 256") {
    CHECK(fold2("nat nat", "nat", "LSL", 1, 8)->num == 256);
    CHECK(fold2("nat nat", "nat", "LSL", 1, 256)->num == big_int(1) << 256);
    CHECK(fold2("nat nat", "nat", "LSR", 256, 4)->num == 16);
    CHECK(fold2("nat nat", "nat", "LSR", 7, 256)->num == 0);
    try {
        fold2("nat nat", "nat", "LSL", 1, 257);
        FAIL("expected shift failure");
    } catch (const interp_failure& e) {
        CHECK(e.kind == fail_kind::f_shift_overflow);
    }
    CHECK_THROWS_AS(fold2("nat nat", "nat", "LSR", 7, 300), interp_failure);
}

TEST_CASE("FAILWITH carries its payload") {
    typed_script ts = compile(
        "parameter unit ; storage unit ;"
        "code { DROP ; PUSH string \"boom\" ; FAILWITH }");
    try {
        run1(ts, mk_unit(), mk_unit());
        FAIL("expected failure");
    } catch (const interp_failure& e) {
        CHECK(e.kind == fail_kind::f_failwith);
        REQUIRE(e.payload);
        CHECK(e.payload->str == "boom");
        CHECK(e.to_string().find("boom") != std::string::npos);
    }
}

TEST_CASE("an unbounded loop hits the step budget") {
    typed_script ts = compile(
        "parameter unit ; storage unit ;"
        "code { CDR ; PUSH bool True ; LOOP { PUSH bool True } ; NIL operation ; PAIR }");
    CHECK_THROWS_AS(
        run_contract(ts, "default", mk_unit(), mk_unit(), ctx0(), nullptr, 1000),
        interp_step_limit);
}

TEST_CASE("bounded loops and ITER fold as expected") {
    typed_script count = compile(
        "parameter nat ; storage nat ;"
        "code { CAR ; PUSH nat 0 ; DUP 2 ; DUP 2 ; COMPARE ; LT ;"
        "       LOOP { PUSH nat 1 ; ADD ; DUP 2 ; DUP 2 ; COMPARE ; LT } ;"
        "       DIP { DROP } ; NIL operation ; PAIR }");
    CHECK(run1(count, mk_num(6), mk_num(99))->num == 6);
    CHECK(run1(count, mk_num(0), mk_num(99))->num == 0);

    typed_script sum = compile(
        "parameter (list nat) ; storage nat ;"
        "code { UNPAIR ; ITER { ADD } ; NIL operation ; PAIR }");
    CHECK(run1(sum, mk_list({mk_num(1), mk_num(2), mk_num(3)}), mk_num(10))->num == 16);
    CHECK(run1(sum, mk_list({}), mk_num(10))->num == 10);

    typed_script dbl = compile(
        "parameter (list int) ; storage (list int) ;"
        "code { CAR ; MAP { PUSH int 2 ; MUL } ; NIL operation ; PAIR }");
    cvalue_ptr out = run1(dbl, mk_list({mk_num(3), mk_num(-1)}), mk_list({}));
    REQUIRE(out->items.size() == 2);
    CHECK(out->items[0]->num == 6);
    CHECK(out->items[1]->num == -2);
}

TEST_CASE("map GET, UPDATE and MEM") {
    typed_script ts = compile(
        "parameter (pair nat nat) ; storage (map nat nat) ;"
        "code { UNPAIR ; UNPAIR ; DIP { SOME } ; UPDATE ; NIL operation ; PAIR }");
    cvalue_ptr m = run1(ts, mk_pair(mk_num(1), mk_num(10)), mk_map_sorted({}));
    REQUIRE(m->entries.size() == 1);
    m = run_contract(ts, "default", mk_pair(mk_num(2), mk_num(20)), m, ctx0()).storage;
    m = run_contract(ts, "default", mk_pair(mk_num(1), mk_num(11)), m, ctx0()).storage;
    REQUIRE(m->entries.size() == 2); // overwrite, not insert
    CHECK(m->entries[0].first->num == 1);
    CHECK(m->entries[0].second->num == 11);
    CHECK(m->entries[1].second->num == 20);

    typed_script get = compile(
        "parameter nat ; storage (map nat nat) ;"
        "code { UNPAIR ; DUP 2 ; SWAP ; GET ; IF_NONE { PUSH bool False } { DROP ; PUSH bool True } ;"
        "       DROP ; NIL operation ; PAIR }");
    CHECK_NOTHROW(run_contract(get, "default", mk_num(1), m, ctx0()));
}

TEST_CASE("entry point dispatch wraps the argument along the or path") {
    typed_script ts = compile(
        "parameter (or (nat %inc) (nat %dec)) ; storage int ;"
        "code { UNPAIR ; IF_LEFT { INT ; ADD } { INT ; SWAP ; SUB } ; NIL operation ; PAIR }");
    CHECK(run_contract(ts, "inc", mk_num(3), mk_num(10), ctx0()).storage->num == 13);
    CHECK(run_contract(ts, "dec", mk_num(3), mk_num(10), ctx0()).storage->num == 7);
    CHECK(find_entrypoint(ts, "inc") != nullptr);
    CHECK(find_entrypoint(ts, "nope") == nullptr);

    // the same dispatch by hand through run_contract_param
    cvalue_ptr wrapped = wrap_entrypoint(*find_entrypoint(ts, "dec"), mk_num(4));
    CHECK(wrapped->k == vkind::v_or);
    CHECK(wrapped->flag); // Right
    CHECK(run_contract_param(ts, wrapped, mk_num(10), ctx0()).storage->num == 6);
}

TEST_CASE("context instructions read the call context") {
    typed_script ts = compile(
        "parameter unit ; storage (pair address mutez) ;"
        "code { DROP ; SENDER ; AMOUNT ; SWAP ; PAIR ; NIL operation ; PAIR }");
    call_context ctx{"alice", "alice", "self", 42, 100, 7};
    contract_result r = run_contract(ts, "default", mk_unit(), mk_pair(mk_string("x"), mk_num(0)), ctx);
    CHECK(r.storage->a->str == "alice");
    CHECK(r.storage->b->num == 42);
}

TEST_CASE("apply_call runs a contract inside a world") {
    world w;
    auto acc = std::make_shared<typed_script>(compile(
        "parameter nat ; storage nat ; code { UNPAIR ; ADD ; NIL operation ; PAIR }"));
    w.accounts["acc"] = {acc, mk_num(0), 50};

    w = apply_call(w, "acc", mk_num(5), "alice", "alice", 2, 0);
    CHECK(w.accounts["acc"].storage->num == 5);
    w = apply_call(w, "acc", mk_num(7), "bob", "bob", 0, 0);
    CHECK(w.accounts["acc"].storage->num == 12);

    // calls to implicit accounts are no-ops
    w.accounts["alice"] = {nullptr, nullptr, 10};
    CHECK_NOTHROW(w = apply_call(w, "alice", mk_unit(), "bob", "bob", 1, 0));
}

TEST_CASE("a failing call leaves the caller's world untouched") {
    world w;
    auto strict = std::make_shared<typed_script>(compile(
        "parameter nat ; storage nat ;"
        "code { UNPAIR ; DUP ; PUSH nat 100 ; CMPLT ;"
        "       IF {} { PUSH string \"too-small\" ; FAILWITH } ; ADD ; NIL operation ; PAIR }"));
    w.accounts["strict"] = {strict, mk_num(1), 0};
    w = apply_call(w, "strict", mk_num(500), "a", "a", 0, 0);
    CHECK(w.accounts["strict"].storage->num == 501);
    CHECK_THROWS_AS(apply_call(w, "strict", mk_num(5), "a", "a", 0, 0), interp_failure);
    CHECK(w.accounts["strict"].storage->num == 501); // snapshot semantics
}

TEST_CASE("emitted transfers run nested calls depth-first") {
    world w;
    auto acc = std::make_shared<typed_script>(compile(
        "parameter nat ; storage nat ; code { UNPAIR ; ADD ; NIL operation ; PAIR }"));
    auto fwd = std::make_shared<typed_script>(compile(
        "parameter address ; storage unit ;"
        "code { CAR ; CONTRACT nat ; IF_NONE { PUSH string \"bad\" ; FAILWITH } {} ;"
        "       PUSH mutez 0 ; PUSH nat 5 ; TRANSFER_TOKENS ;"
        "       NIL operation ; SWAP ; CONS ; UNIT ; SWAP ; PAIR }"));
    w.accounts["acc"] = {acc, mk_num(1), 0};
    w.accounts["fwd"] = {fwd, mk_unit(), 0};
    w = apply_call(w, "fwd", mk_string("acc"), "alice", "alice", 0, 0);
    CHECK(w.accounts["acc"].storage->num == 6);
    // the nested call saw the forwarder as its sender
    auto probe = std::make_shared<typed_script>(compile(
        "parameter nat ; storage address ; code { DROP ; SENDER ; NIL operation ; PAIR }"));
    w.accounts["probe"] = {probe, mk_string(""), 0};
    w = apply_call(w, "fwd", mk_string("probe"), "alice", "alice", 0, 0);
    CHECK(w.accounts["probe"].storage->str == "fwd");
}

TEST_CASE("compare_values orders pairs lexicographically") {
    CHECK(compare_values(*mk_num(1), *mk_num(2)) == -1);
    CHECK(compare_values(*mk_pair(mk_num(1), mk_num(9)), *mk_pair(mk_num(2), mk_num(0))) == -1);
    CHECK(compare_values(*mk_pair(mk_num(1), mk_num(9)), *mk_pair(mk_num(1), mk_num(3))) == 1);
    CHECK(compare_values(*mk_string("abc"), *mk_string("abd")) == -1);
    CHECK(compare_values(*mk_bool(false), *mk_bool(true)) == -1);
}

TEST_CASE("zero_value and value_of_literal agree with the type") {
    CHECK(zero_value(ty_nat())->num == 0);
    CHECK(zero_value(ty_option(ty_int()))->a == nullptr);
    CHECK(zero_value(ty_or(ty_nat(), ty_string()))->flag == false);
    CHECK(zero_value(ty_map(ty_address(), ty_mutez()))->entries.empty());
    cvalue_ptr v = value_of_literal(*parse_literal_string("Pair 3 { Elt 1 2 }"),
                                    ty_pair(ty_nat(), ty_map(ty_nat(), ty_nat())));
    CHECK(v->a->num == 3);
    REQUIRE(v->b->entries.size() == 1);
    CHECK(v->b->entries[0].second->num == 2);
}
