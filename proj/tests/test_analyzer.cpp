#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "michelstat/analyzer.hpp"
#include "michelstat/parser.hpp"
#include "michelstat/typecheck.hpp"

using namespace michelstat;

namespace {

interval iv(long lo, long hi) { return interval(bound(lo), bound(hi)); }
interval from(long lo) { return interval(bound(lo), bound::plus_inf()); }

typed_script compile(const std::string& src) { return typecheck(parse_script(src)); }

typed_script load(const std::string& name) {
    return typecheck(parse_file(std::string(MICHELSTAT_CONTRACTS_DIR) + "/" + name));
}

interval storage_itv(const analysis_result& r, const path& p = {}) {
    return r.invariant.get_itv({r.storage_root.root, p});
}

const entry_report& entry(const analysis_result& r, const std::string& name) {
    for (const entry_report& e : r.entries)
        if (e.name == name) return e;
    REQUIRE(false);
    static entry_report dummy;
    return dummy;
}

interval post_itv(const entry_report& e, const path& p = {}) {
    return e.post.get_itv({reserved_root::storage, p});
}

} // namespace

TEST_CASE("parameter flows into storage through ADD") {
    typed_script ts = compile(
        "parameter nat ; storage nat ; code { UNPAIR ; ADD ; NIL operation ; PAIR }");
    analyzer_options o;
    analysis_result r = analyze(ts, o);
    CHECK_FALSE(r.timed_out);
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].name == "default");
    CHECK_FALSE(r.entries[0].always_fails);
    // zero initial storage plus an arbitrary nat parameter
    CHECK(post_itv(r.entries[0]) == from(0));
    CHECK(storage_itv(r) == from(0));
    CHECK(r.entries[0].ops_len == iv(0, 0));
    CHECK(r.arith.empty());
    CHECK(r.render_invariant() == "storage in [0, +oo)");
    CHECK_FALSE(r.storage_has_balance_map);
}

TEST_CASE("multi-call stabilizes the accumulator in two rounds") {
    typed_script ts = compile(
        "parameter nat ; storage nat ; code { UNPAIR ; ADD ; NIL operation ; PAIR }");
    analyzer_options o;
    o.multi_call = true;
    analysis_result r = analyze(ts, o);
    CHECK(r.rounds == 2);
    CHECK(r.fixpoint_verified);
    CHECK(r.render_invariant() == "storage in [0, +oo)");
}

TEST_CASE("a concrete initial storage seeds the analysis") {
    typed_script ts = compile(
        "parameter unit ; storage nat ; code { CDR ; NIL operation ; PAIR }");
    analyzer_options o;
    o.initial_storage = value_of_literal(*parse_literal_string("42"), ts.sc.storage_ty);
    analysis_result r = analyze(ts, o);
    CHECK(storage_itv(r) == iv(42, 42));

    analyzer_options top;
    top.arbitrary_storage = true;
    CHECK(storage_itv(analyze(ts, top)) == from(0));
}

TEST_CASE("guard resolution bounds a counted loop") {
    std::string src =
        "parameter nat ; storage nat ;"
        "code { DROP ; PUSH nat 0 ; PUSH nat 10 ; DUP 2 ; COMPARE ; LT ;"
        "       LOOP { PUSH nat 1 ; ADD ; PUSH nat 10 ; DUP 2 ; COMPARE ; LT } ;"
        "       NIL operation ; PAIR }";
    typed_script ts = compile(src);

    analyzer_options exp;
    exp.narrow_steps = 1;
    analysis_result r = analyze(ts, exp);
    CHECK(post_itv(r.entries[0]) == iv(10, 10));
    CHECK(storage_itv(r) == iv(0, 10));

    // without the symbolic domain the exit guard is unreadable
    analyzer_options plain;
    plain.use_sym = false;
    plain.narrow_steps = 1;
    analysis_result rp = analyze(ts, plain);
    CHECK(storage_itv(rp) == from(0));
    CHECK(storage_itv(r).leq(storage_itv(rp)));
    CHECK(storage_itv(rp) != storage_itv(r)); // strictly tighter with guards
}

TEST_CASE("a loop whose guard starts false is skipped") {
    typed_script ts = compile(
        "parameter unit ; storage nat ;"
        "code { CDR ; PUSH bool False ; LOOP { PUSH nat 1 ; ADD ; PUSH bool True } ;"
        "       NIL operation ; PAIR }");
    analysis_result r = analyze(ts, {});
    CHECK(storage_itv(r) == iv(0, 0));
}

TEST_CASE("branch refinement narrows the surviving flow") {
    std::string src =
        "parameter unit ; storage nat ;"
        "code { CDR ; DUP ; PUSH nat 10 ; SWAP ; COMPARE ; LT ;"
        "       IF { PUSH nat 1 ; ADD } { DROP ; PUSH nat 0 } ;"
        "       NIL operation ; PAIR }";
    typed_script ts = compile(src);
    analyzer_options o;
    o.arbitrary_storage = true;
    analysis_result r = analyze(ts, o);
    CHECK(post_itv(r.entries[0]) == iv(0, 10));

    analyzer_options plain = o;
    plain.use_sym = false;
    CHECK(post_itv(analyze(ts, plain).entries[0]) == from(0));
}

TEST_CASE("IF_CONS splits on list emptiness") {
    typed_script ts = compile(
        "parameter (list nat) ; storage nat ;"
        "code { UNPAIR ; IF_CONS { SWAP ; DROP ; ADD } {} ; NIL operation ; PAIR }");
    analysis_result r = analyze(ts, {});
    CHECK(storage_itv(r) == from(0));
    CHECK_FALSE(r.entries[0].always_fails);
}

TEST_CASE("LOOP_LEFT threads or-values") {
    typed_script ts = compile(
        "parameter nat ; storage nat ;"
        "code { CAR ; LEFT nat ; LOOP_LEFT { RIGHT nat } ; NIL operation ; PAIR }");
    analysis_result r = analyze(ts, {});
    CHECK(storage_itv(r) == from(0));
}

TEST_CASE("ITER folds element summaries into the accumulator") {
    typed_script ts = compile(
        "parameter (list nat) ; storage nat ;"
        "code { UNPAIR ; ITER { ADD } ; NIL operation ; PAIR }");
    analysis_result r = analyze(ts, {});
    CHECK(storage_itv(r) == from(0));

    // a literal list gives precise element bounds
    typed_script ts2 = compile(
        "parameter unit ; storage (pair nat (list nat)) ;"
        "code { CDR ; UNPAIR ; SWAP ; DUP ; DUG 2 ; ITER { ADD } ; PAIR ;"
        "       NIL operation ; PAIR }");
    analyzer_options o;
    o.initial_storage = value_of_literal(*parse_literal_string("Pair 0 { 1 ; 3 }"),
                                         ts2.sc.storage_ty);
    analysis_result r2 = analyze(ts2, o);
    // the accumulator widens up but stays a nat
    CHECK(storage_itv(r2, {step::fst}) == from(0));
    CHECK(storage_itv(r2, {step::snd, step::list_elems}) == iv(1, 3));
    CHECK(storage_itv(r2, {step::snd, step::list_len}) == iv(2, 2));
}

TEST_CASE("MAP rebuilds a list with transformed elements") {
    typed_script ts = compile(
        "parameter unit ; storage (list int) ;"
        "code { CDR ; MAP { PUSH int 2 ; MUL } ; NIL operation ; PAIR }");
    analyzer_options o;
    o.initial_storage = value_of_literal(*parse_literal_string("{ 1 ; 2 }"), ts.sc.storage_ty);
    analysis_result r = analyze(ts, o);
    REQUIRE(r.entries.size() == 1);
    CHECK(post_itv(r.entries[0], {step::list_elems}) == iv(2, 4));
    CHECK(post_itv(r.entries[0], {step::list_len}) == iv(2, 2));
}

TEST_CASE("mutez overflow events carry their source span") {
    typed_script ts = compile(
        "parameter unit ;\nstorage mutez ;\ncode { CDR ; AMOUNT ; ADD ; NIL operation ; PAIR }");
    analyzer_options o;
    o.arbitrary_storage = true;
    analysis_result r = analyze(ts, o);
    REQUIRE(r.arith.size() == 1);
    CHECK_FALSE(r.arith[0].shift);
    CHECK(r.arith[0].where.line == 3);
    CHECK(r.arith[0].entrypoint == "default");
    // the surviving flow still fits the mutez range
    CHECK(storage_itv(r) == interval(bound(0), bound(mutez_max())));

    // capping the incoming amount removes the alarm
    analyzer_options capped = o;
    capped.max_amount = big_int(0);
    CHECK(analyze(ts, capped).arith.empty());
}

TEST_CASE("shift overflow events are distinguished") {
    typed_script ts = compile(
        "parameter (pair nat nat) ; storage nat ;"
        "code { CAR ; UNPAIR ; LSL ; NIL operation ; PAIR }");
    analyzer_options o;
    o.arbitrary_storage = true;
    analysis_result r = analyze(ts, o);
    REQUIRE(r.arith.size() == 1);
    CHECK(r.arith[0].shift);
}

TEST_CASE("provably failing entry points are flagged") {
    typed_script ts = compile(
        "parameter unit ; storage unit ;"
        "code { DROP ; PUSH string \"nope\" ; FAILWITH }");
    analysis_result r = analyze(ts, {});
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].always_fails);
    CHECK(r.overall_always_fails());
    // the initial storage is still the only reachable state
    CHECK(r.render_invariant() == "storage unconstrained");

    typed_script ts2 = compile(
        "parameter bool ; storage unit ;"
        "code { CAR ; IF { PUSH string \"a\" ; FAILWITH } { PUSH string \"b\" ; FAILWITH } }");
    analysis_result r2 = analyze(ts2, {});
    CHECK(r2.entries[0].always_fails);

    // one failing branch is not an always-fail
    typed_script ts3 = compile(
        "parameter bool ; storage unit ;"
        "code { UNPAIR ; IF { PUSH string \"a\" ; FAILWITH } {} ; NIL operation ; PAIR }");
    analysis_result r3 = analyze(ts3, {});
    CHECK_FALSE(r3.entries[0].always_fails);
}

TEST_CASE("entry points are analyzed separately") {
    typed_script ts = compile(
        "parameter (or (nat %set) (unit %clear)) ; storage nat ;"
        "code { UNPAIR ; IF_LEFT { SWAP ; DROP } { DROP ; DROP ; PUSH nat 0 } ;"
        "       NIL operation ; PAIR }");
    analyzer_options o;
    o.arbitrary_storage = true;
    analysis_result r = analyze(ts, o);
    REQUIRE(r.entries.size() == 2);
    CHECK(entry(r, "set").name == "set");
    CHECK(post_itv(entry(r, "set")) == from(0));
    CHECK(post_itv(entry(r, "clear")) == iv(0, 0));
    CHECK(storage_itv(r) == from(0));
}

TEST_CASE("emitted transfers are recorded with amount and target") {
    typed_script ts = compile(
        "parameter address ; storage unit ;"
        "code { CAR ; CONTRACT unit ; IF_NONE { PUSH string \"bad\" ; FAILWITH } {} ;"
        "       PUSH mutez 5 ; UNIT ; TRANSFER_TOKENS ;"
        "       NIL operation ; SWAP ; CONS ; UNIT ; SWAP ; PAIR }");
    analysis_result r = analyze(ts, {});
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].ops_len == iv(1, 1));
    REQUIRE(r.entries[0].calls.size() == 1);
    CHECK(r.entries[0].calls[0].amount == iv(5, 5));
}

TEST_CASE("wallet deposit and withdraw against the empty map") {
    typed_script ts = load("wallet_fixed.tz");
    analyzer_options o;
    o.sender_split = true;
    analysis_result r = analyze(ts, o);
    CHECK(r.storage_has_balance_map);
    REQUIRE(r.entries.size() == 2);

    const entry_report& dep = entry(r, "deposit");
    CHECK_FALSE(dep.always_fails);
    CHECK(post_itv(dep, {step::map_card}) == iv(1, 1)); // exactly one key now
    CHECK(dep.ops_len == iv(0, 0));

    // withdrawing from an empty wallet always fails
    CHECK(entry(r, "withdraw").always_fails);
    CHECK(storage_itv(r, {step::map_card}) == iv(0, 1));
}

TEST_CASE("wallet under unbounded calls keeps balances non-negative") {
    typed_script ts = load("wallet_fixed.tz");
    analyzer_options o;
    o.sender_split = true;
    o.multi_call = true;
    o.arbitrary_storage = true;
    analysis_result r = analyze(ts, o);
    CHECK(r.fixpoint_verified);
    CHECK(r.decreases.empty()); // only the caller's balance can shrink
    CHECK(storage_itv(r, {step::map_sender_val})
              .leq(interval(bound(0), bound(mutez_max()))));
    CHECK(r.arith.size() == 2); // deposit ADD and withdraw SUB remain flagged
}

TEST_CASE("the unfixed wallet admits a non-caller decrease") {
    typed_script ts = load("wallet_unfixed.tz");
    analyzer_options o;
    o.sender_split = true;
    o.multi_call = true;
    o.arbitrary_storage = true;
    analysis_result r = analyze(ts, o);
    REQUIRE(r.decreases.size() == 1);
    CHECK(r.decreases[0].where.line == 21);
    CHECK(r.decreases[0].where.col == 12);
    CHECK(r.decreases[0].entrypoint == "withdraw");
}

TEST_CASE("a past deadline reports a timeout") {
    typed_script ts = compile(
        "parameter nat ; storage nat ; code { UNPAIR ; ADD ; NIL operation ; PAIR }");
    analyzer_options o;
    o.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
    analysis_result r = analyze(ts, o);
    CHECK(r.timed_out);
}

TEST_CASE("invariant rendering falls back when nothing is known") {
    typed_script ts = compile(
        "parameter unit ; storage int ; code { CDR ; NIL operation ; PAIR }");
    analyzer_options o;
    o.arbitrary_storage = true;
    analysis_result r = analyze(ts, o);
    CHECK(r.render_invariant() == "storage unconstrained");
}
