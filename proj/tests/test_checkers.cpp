#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "michelstat/checkers.hpp"
#include "michelstat/parser.hpp"

using namespace michelstat;

namespace {

typed_script dummy_script(const std::string& storage = "nat") {
    return typecheck(parse_script("parameter unit ; storage " + storage +
                                  " ; code { CDR ; NIL operation ; PAIR }"));
}

analysis_result base_result() {
    analysis_result r;
    entry_report e;
    e.name = "default";
    r.entries.push_back(std::move(e));
    return r;
}

arith_event mutez_at(int line, int col, const std::string& ep = "default") {
    arith_event e;
    e.shift = false;
    e.where = {line, col};
    e.entrypoint = ep;
    e.detail = "may exceed the mutez range";
    return e;
}

} // namespace

TEST_CASE("events map onto their alarm categories") {
    typed_script ts = dummy_script();
    analysis_result r = base_result();
    r.arith.push_back(mutez_at(3, 7));
    arith_event sh;
    sh.shift = true;
    sh.where = {4, 2};
    sh.entrypoint = "default";
    r.arith.push_back(sh);
    decrease_event d;
    d.where = {5, 1};
    d.entrypoint = "withdraw";
    r.decreases.push_back(d);

    check_result c = run_checkers(ts, r);
    REQUIRE(c.alarms.size() == 3);
    CHECK(c.alarms[0].category == "mutez-overflow");
    CHECK(c.alarms[0].where.line == 3);
    CHECK(c.alarms[0].where.col == 7);
    CHECK(c.alarms[1].category == "shift-overflow");
    CHECK(c.alarms[2].category == "owner-decrease-violation");
    CHECK(c.alarms[2].entrypoint == "withdraw");
}

TEST_CASE("alarms are deduplicated by category and site") {
    typed_script ts = dummy_script();
    analysis_result r = base_result();
    r.arith.push_back(mutez_at(3, 7));
    r.arith.push_back(mutez_at(3, 7, "other")); // same site, later entry
    r.arith.push_back(mutez_at(3, 9));
    check_result c = run_checkers(ts, r);
    CHECK(c.alarms.size() == 2);
    CHECK(c.alarms[0].entrypoint == "default"); // first reporter wins
}

TEST_CASE("alarms sort by position then category") {
    typed_script ts = dummy_script();
    analysis_result r = base_result();
    arith_event sh;
    sh.shift = true;
    sh.where = {2, 5};
    r.arith.push_back(mutez_at(9, 1));
    r.arith.push_back(sh);
    r.arith.push_back(mutez_at(2, 5));
    check_result c = run_checkers(ts, r);
    REQUIRE(c.alarms.size() == 3);
    CHECK(c.alarms[0].where.line == 2);
    CHECK(c.alarms[0].category == "mutez-overflow"); // ties break alphabetically
    CHECK(c.alarms[1].category == "shift-overflow");
    CHECK(c.alarms[2].where.line == 9);
}

TEST_CASE("always-fail alarms name the entry point") {
    typed_script ts = dummy_script();
    analysis_result r = base_result();
    r.entries[0].always_fails = true;
    check_result c = run_checkers(ts, r);
    REQUIRE(c.alarms.size() == 1);
    CHECK(c.alarms[0].category == "always-fail");
    CHECK(c.alarms[0].entrypoint == "default");
    CHECK(c.alarms[0].where.line == 1); // anchored at the code block
    // a single-entry contract gets no extra summary alarm
    for (const michelstat::alarm& a : c.alarms) CHECK(a.entrypoint != "all");
}

TEST_CASE("an all-entry-points alarm appears only for multi-entry contracts") {
    typed_script ts = dummy_script();
    analysis_result r = base_result();
    entry_report e2;
    e2.name = "other";
    e2.always_fails = true;
    r.entries[0].always_fails = true;
    r.entries.push_back(std::move(e2));
    check_result c = run_checkers(ts, r);
    CHECK(c.alarms.size() == 3);
    int all = 0;
    for (const michelstat::alarm& a : c.alarms)
        if (a.entrypoint == "all") ++all;
    CHECK(all == 1);

    // one surviving entry point cancels the summary alarm
    r.entries[1].always_fails = false;
    check_result c2 = run_checkers(ts, r);
    CHECK(c2.alarms.size() == 1);
    CHECK(c2.alarms[0].entrypoint == "default");
}

TEST_CASE("the ownership verdict is skipped without a balance map") {
    typed_script ts = dummy_script();
    check_result c = run_checkers(ts, base_result());
    REQUIRE(c.verdicts.size() == 1);
    CHECK(c.verdicts[0].property == "owner-only-decrease");
    CHECK(c.verdicts[0].status == "not-applicable");
}

TEST_CASE("the ownership verdict needs the right analysis modes") {
    typed_script ts = dummy_script("(map address mutez)");
    analysis_result r = base_result();
    r.storage_has_balance_map = true;

    check_result c = run_checkers(ts, r);
    CHECK(c.verdicts[0].status == "unknown");
    CHECK(c.verdicts[0].note.find("--sender-split") != std::string::npos);

    r.sender_split = true;
    r.multi_call = false;
    CHECK(run_checkers(ts, r).verdicts[0].status == "unknown");

    r.multi_call = true;
    CHECK(run_checkers(ts, r).verdicts[0].status == "proved");

    r.timed_out = true;
    check_result t = run_checkers(ts, r);
    CHECK(t.verdicts[0].status == "unknown");
    CHECK(t.verdicts[0].note == "analysis timed out");
}

TEST_CASE("a decrease witness downgrades the verdict to an alarm") {
    typed_script ts = dummy_script("(map address mutez)");
    analysis_result r = base_result();
    r.storage_has_balance_map = true;
    r.sender_split = true;
    r.multi_call = true;
    decrease_event d;
    d.where = {21, 12};
    d.entrypoint = "withdraw";
    d.detail = "updated value may be lower";
    r.decreases.push_back(d);

    check_result c = run_checkers(ts, r);
    CHECK(c.verdicts[0].status == "alarm");
    REQUIRE(c.verdicts[0].alarms.size() == 1);
    CHECK(c.verdicts[0].alarms[0].category == "owner-decrease-violation");
    CHECK(c.verdicts[0].alarms[0].where.line == 21);
}
