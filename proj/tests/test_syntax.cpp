#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "michelstat/parser.hpp"
#include "michelstat/printer.hpp"
#include "michelstat/typecheck.hpp"

using namespace michelstat;

static script parse_simple(const std::string& code,
                           const std::string& param = "unit",
                           const std::string& storage = "unit") {
    std::string src = "parameter " + param + " ; storage " + storage + " ; code " + code;
    return parse_script(src);
}

TEST_CASE("sections parse in any order with optional separators") {
    script a = parse_script("parameter nat ; storage int ; code { DROP ; PUSH int 0 ; NIL operation ; PAIR }");
    script b = parse_script("code { DROP ; PUSH int 0 ; NIL operation ; PAIR }\nstorage int\nparameter nat");
    CHECK(a.param_ty->to_string() == "nat");
    CHECK(a.storage_ty->to_string() == "int");
    CHECK(b.param_ty->to_string() == "nat");
    CHECK(b.storage_ty->to_string() == "int");
    CHECK(a.code.size() == b.code.size());
}

TEST_CASE("section errors") {
    CHECK_THROWS_WITH_AS(parse_script("parameter nat ; parameter nat ; storage nat ; code {}"),
                         "duplicate parameter section", script_error);
    CHECK_THROWS_WITH_AS(parse_script("parameter nat ; code {}"),
                         "missing storage section", script_error);
    CHECK_THROWS_WITH_AS(parse_script("banana nat ; storage nat ; code {}"),
                         "unknown section 'banana'", script_error);
    CHECK_THROWS_WITH_AS(
        parse_script("parameter nat ; storage (list operation) ; code {}"),
        "storage type cannot contain operation values", script_error);
}

TEST_CASE("comments and spans") {
    script sc = parse_script("# leading comment\nparameter nat\nstorage nat\ncode { DROP ; # tail\n  PUSH nat 1 ; NIL operation ; PAIR }");
    REQUIRE(sc.code.size() == 4);
    CHECK(sc.code[0].op == opcode::op_drop);
    CHECK(sc.code[0].where.line == 4);
    CHECK(sc.code[1].op == opcode::op_push);
    CHECK(sc.code[1].where.line == 5);
    CHECK(sc.code[1].where.col == 3);
}

TEST_CASE("DROP and DUP counts") {
    script sc = parse_simple("{ DROP ; DROP 2 ; DUP ; DUP 3 ; DIG 2 ; DUG 1 }");
    CHECK(sc.code[0].n == 1);
    CHECK(sc.code[1].n == 2);
    CHECK(sc.code[2].n == 1);
    CHECK(sc.code[3].n == 3);
    CHECK(sc.code[4].n == 2);
    CHECK(sc.code[5].n == 1);
    CHECK_THROWS_WITH_AS(parse_simple("{ DUP 0 }"), "DUP 0 is not allowed", script_error);
    CHECK_THROWS_AS(parse_simple("{ DIG 2000 }"), script_error);
}

TEST_CASE("PUSH literals") {
    script sc = parse_simple(
        "{ PUSH int -5 ; PUSH string \"hi\" ; PUSH bool True ; PUSH (pair nat nat) (Pair 1 2) ;"
        "  PUSH (option int) (Some 3) ; PUSH (option int) None ; PUSH (list nat) { 1 ; 2 } ;"
        "  PUSH (map nat int) { Elt 1 -1 ; Elt 2 -2 } }");
    CHECK(sc.code[0].lit->kind == lit_kind::l_int);
    CHECK(sc.code[0].lit->num == -5);
    CHECK(sc.code[1].lit->str == "hi");
    CHECK(sc.code[2].lit->kind == lit_kind::l_bool);
    CHECK(sc.code[3].lit->kind == lit_kind::l_pair);
    CHECK(sc.code[4].lit->kind == lit_kind::l_some);
    CHECK(sc.code[5].lit->kind == lit_kind::l_none);
    CHECK(sc.code[6].lit->items.size() == 2);
    CHECK(sc.code[7].lit->entries.size() == 2);
}

TEST_CASE("container key comparability") {
    CHECK_THROWS_WITH_AS(parse_simple("{ EMPTY_SET (list nat) ; DROP }"),
                         "EMPTY_SET element type must be comparable", script_error);
    CHECK_THROWS_WITH_AS(parse_simple("{ EMPTY_MAP (map nat nat) int ; DROP }"),
                         "EMPTY_MAP key type must be comparable", script_error);
    CHECK_THROWS_AS(parse_script("parameter (set (list nat)) ; storage unit ; code {}"),
                    script_error);
}

TEST_CASE("comparison macros expand") {
    script sc = parse_simple("{ CMPLT }");
    REQUIRE(sc.code.size() == 2);
    CHECK(sc.code[0].op == opcode::op_compare);
    CHECK(sc.code[1].op == opcode::op_lt);
    CHECK(sc.code[0].where.col == sc.code[1].where.col);

    script sc2 = parse_simple("{ IFCMPEQ { UNIT } { UNIT } }");
    REQUIRE(sc2.code.size() == 3);
    CHECK(sc2.code[0].op == opcode::op_compare);
    CHECK(sc2.code[1].op == opcode::op_eq);
    CHECK(sc2.code[2].op == opcode::op_if);
    CHECK(sc2.code[2].blocks[0].size() == 1);

    script sc3 = parse_simple("{ ASSERT_CMPGE }");
    REQUIRE(sc3.code.size() == 3);
    CHECK(sc3.code[2].op == opcode::op_if);
    CHECK(sc3.code[2].blocks[0].empty());
    REQUIRE(sc3.code[2].blocks[1].size() == 2);
    CHECK(sc3.code[2].blocks[1][1].op == opcode::op_failwith);

    script sc4 = parse_simple("{ ASSERT }");
    REQUIRE(sc4.code.size() == 1);
    CHECK(sc4.code[0].op == opcode::op_if);

    script sc5 = parse_simple("{ FAIL }");
    REQUIRE(sc5.code.size() == 2);
    CHECK(sc5.code[1].op == opcode::op_failwith);
}

TEST_CASE("unknown instruction error carries a span") {
    try {
        parse_simple("{ DROP ;\n  FROBNICATE }");
        FAIL("expected script_error");
    } catch (const script_error& e) {
        CHECK(std::string(e.what()) == "unknown instruction 'FROBNICATE'");
        CHECK(e.where.line == 2);
        CHECK(e.where.col == 3);
    }
}

TEST_CASE("printer output reparses to the same program") {
    std::string src =
        "parameter (or (unit %deposit) (pair %withdraw address mutez)) ;\n"
        "storage (map address mutez) ;\n"
        "code { UNPAIR ; IF_LEFT { DROP ; SENDER ; DUP 2 ; DUP 2 ; GET ;"
        " IF_NONE { PUSH mutez 0 } {} ; AMOUNT ; ADD ; SOME ; SWAP ; UPDATE }"
        " { DROP } ; NIL operation ; PAIR }";
    script sc = parse_script(src);
    std::string printed = to_source(sc);
    script re = parse_script(printed);
    CHECK(to_source(re) == printed);
    CHECK(re.code.size() == sc.code.size());
    CHECK(type_eq(re.param_ty, sc.param_ty));
    CHECK(type_eq(re.storage_ty, sc.storage_ty));
}

TEST_CASE("parse_type_string and parse_literal_string") {
    mtype_ptr t = parse_type_string("pair (list nat) (option mutez)");
    CHECK(t->ctor == type_ctor::t_pair);
    CHECK(t->args[0]->ctor == type_ctor::t_list);
    CHECK_THROWS_AS(parse_type_string("nat nat"), script_error);
    literal_ptr l = parse_literal_string("Pair 1 (Some 2)");
    CHECK(l->kind == lit_kind::l_pair);
    CHECK_THROWS_AS(parse_literal_string("Pair 1 2 trailing junk ;;"), script_error);
}

TEST_CASE("typecheck accepts a well-typed script and records entry points") {
    typed_script ts = typecheck(parse_script(
        "parameter (or (nat %inc) (or (nat %dec) unit)) ; storage nat ;"
        "code { UNPAIR ; IF_LEFT { ADD } { IF_LEFT { SWAP ; SUB ; ABS } { DROP } } ;"
        "       NIL operation ; PAIR }"));
    REQUIRE(ts.entrypoints.size() == 3);
    CHECK(ts.entrypoints[0].name == "inc");
    CHECK(ts.entrypoints[0].path == std::vector<bool>{false});
    CHECK(ts.entrypoints[1].name == "dec");
    CHECK(ts.entrypoints[1].path == std::vector<bool>{true, false});
    CHECK(ts.entrypoints[2].name == "ep2");
    CHECK(ts.entrypoints[2].path == std::vector<bool>{true, true});
}

TEST_CASE("non-or parameters form a single default entry point") {
    typed_script ts = typecheck(parse_script(
        "parameter nat ; storage nat ; code { UNPAIR ; ADD ; NIL operation ; PAIR }"));
    REQUIRE(ts.entrypoints.size() == 1);
    CHECK(ts.entrypoints[0].name == "default");
    CHECK(ts.entrypoints[0].path.empty());
}

TEST_CASE("duplicate entry point annotations are rejected") {
    CHECK_THROWS_WITH_AS(
        entrypoints_of(parse_type_string("or (nat %a) (int %a)")),
        "duplicate entry point name 'a'", script_error);
}

TEST_CASE("arithmetic typing rules") {
    auto param_of = [](const std::string& code, const std::string& param) {
        return typecheck(parse_script("parameter " + param + " ; storage unit ; code " + code));
    };
    // nat + int = int, usable where int is expected
    CHECK_NOTHROW(param_of("{ CAR ; UNPAIR ; ADD ; NEG ; DROP ; UNIT ; NIL operation ; PAIR }",
                           "(pair nat int)"));
    // nat - nat = int: ABS needed before using as nat
    CHECK_NOTHROW(param_of("{ CAR ; UNPAIR ; SUB ; ABS ; DROP ; UNIT ; NIL operation ; PAIR }",
                           "(pair nat nat)"));
    // mutez * mutez is not a thing
    CHECK_THROWS_AS(param_of("{ CAR ; UNPAIR ; MUL ; DROP ; UNIT ; NIL operation ; PAIR }",
                             "(pair mutez mutez)"),
                    script_error);
    // mutez - mutez = mutez (checked), mutez + int rejected
    CHECK_NOTHROW(param_of("{ CAR ; UNPAIR ; SUB ; DROP ; UNIT ; NIL operation ; PAIR }",
                           "(pair mutez mutez)"));
    CHECK_THROWS_AS(param_of("{ CAR ; UNPAIR ; ADD ; DROP ; UNIT ; NIL operation ; PAIR }",
                             "(pair mutez int)"),
                    script_error);
    // LSL takes nat nat
    CHECK_THROWS_AS(param_of("{ CAR ; UNPAIR ; LSL ; DROP ; UNIT ; NIL operation ; PAIR }",
                             "(pair int nat)"),
                    script_error);
}

TEST_CASE("mutez operations are marked for the range check") {
    typed_script ts = typecheck(parse_script(
        "parameter (pair mutez mutez) ; storage mutez ;"
        "code { CAR ; UNPAIR ; ADD ; PUSH nat 2 ; SWAP ; MUL ; NIL operation ; PAIR }"));
    REQUIRE(ts.sc.code.size() == 8);
    CHECK(ts.sc.code[2].op == opcode::op_add);
    CHECK(ts.sc.code[2].mutez_checked);
    CHECK(ts.sc.code[5].op == opcode::op_mul);
    CHECK(ts.sc.code[5].mutez_checked);

    typed_script ts2 = typecheck(parse_script(
        "parameter (pair nat nat) ; storage nat ;"
        "code { CAR ; UNPAIR ; ADD ; NIL operation ; PAIR }"));
    CHECK_FALSE(ts2.sc.code[2].mutez_checked);
}

TEST_CASE("stack shape errors") {
    CHECK_THROWS_AS(typecheck(parse_script("parameter unit ; storage unit ; code { DROP }")),
                    script_error);
    CHECK_THROWS_AS(typecheck(parse_script(
                        "parameter unit ; storage unit ; code { SWAP }")),
                    script_error);
    // final stack must be exactly [pair (list operation) storage]
    CHECK_THROWS_AS(typecheck(parse_script(
                        "parameter unit ; storage unit ; code { CDR ; NIL operation ; PAIR ; UNIT }")),
                    script_error);
    // branches must agree
    CHECK_THROWS_AS(typecheck(parse_script(
                        "parameter bool ; storage unit ; code "
                        "{ CAR ; IF { PUSH nat 1 } { PUSH int 1 } ; DROP ; UNIT ; NIL operation ; PAIR }")),
                    script_error);
}

TEST_CASE("code after FAILWITH is rejected, diverging branches unify") {
    CHECK_THROWS_WITH_AS(typecheck(parse_script(
                             "parameter unit ; storage unit ;"
                             "code { CDR ; PUSH string \"x\" ; FAILWITH ; DROP }")),
                         "unreachable code after FAILWITH", script_error);
    // a failing branch imposes no shape constraint on the join
    CHECK_NOTHROW(typecheck(parse_script(
        "parameter bool ; storage nat ; code "
        "{ UNPAIR ; IF { PUSH string \"no\" ; FAILWITH } {} ; NIL operation ; PAIR }")));
}

TEST_CASE("ITER and MAP bodies are typed against the element") {
    CHECK_NOTHROW(typecheck(parse_script(
        "parameter (list nat) ; storage nat ;"
        "code { UNPAIR ; ITER { ADD } ; NIL operation ; PAIR }")));
    CHECK_NOTHROW(typecheck(parse_script(
        "parameter (list int) ; storage (list int) ;"
        "code { CAR ; MAP { PUSH int 2 ; MUL } ; NIL operation ; PAIR }")));
    // MAP body must keep exactly one extra value
    CHECK_THROWS_AS(typecheck(parse_script(
                        "parameter (list int) ; storage (list int) ;"
                        "code { CAR ; MAP { DROP ; PUSH int 0 ; PUSH int 0 } ; NIL operation ; PAIR }")),
                    script_error);
}

TEST_CASE("check_literal enforces ranges") {
    CHECK_NOTHROW(check_literal(*lit_int(0), ty_nat()));
    CHECK_THROWS_AS(check_literal(*lit_int(-1), ty_nat()), script_error);
    CHECK_NOTHROW(check_literal(*lit_int(mutez_max()), ty_mutez()));
    CHECK_THROWS_AS(check_literal(*lit_int(mutez_max() + 1), ty_mutez()), script_error);
    CHECK_THROWS_AS(check_literal(*lit_string("x"), ty_int()), script_error);
}
