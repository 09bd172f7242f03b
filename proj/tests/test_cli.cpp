#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "michelstat/cli.hpp"

using namespace michelstat;
using njson = nlohmann::json;

namespace {

int run(const std::vector<std::string>& args, std::string& out, std::string& err) {
    std::ostringstream o, e;
    int rc = run_cli(args, o, e);
    out = o.str();
    err = e.str();
    return rc;
}

std::string cpath(const std::string& f) {
    return std::string(MICHELSTAT_CONTRACTS_DIR) + "/" + f;
}

bool has(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("analyze reports a clean contract") {
    std::string out, err;
    int rc = run({"analyze", cpath("counter.tz")}, out, err);
    CHECK(rc == 0);
    CHECK(has(out, "== counter.tz =="));
    CHECK(has(out, "status: ok"));
    CHECK(has(out, "verdict: owner-only-decrease: not-applicable"));
    CHECK(err.empty());
}

TEST_CASE("analyze renders the multi-call invariant") {
    std::string out, err;
    int rc = run({"analyze", cpath("accumulator.tz"), "--multi-call"}, out, err);
    CHECK(rc == 0);
    CHECK(has(out, "storage in [0, +oo)"));
    CHECK(has(out, "2 round(s)"));
    CHECK(has(out, "fixpoint verified"));
}

TEST_CASE("analyze starts from a given storage literal") {
    std::string out, err;
    int rc = run({"analyze", cpath("accumulator.tz"), "--storage", "5"}, out, err);
    CHECK(rc == 0);
    CHECK(has(out, "storage in [5, +oo)"));
}

TEST_CASE("alarms set the exit code") {
    std::string out, err;
    int rc = run({"analyze", cpath("wallet_unfixed.tz"), "--multi-call",
                  "--sender-split", "--arbitrary-storage"},
                 out, err);
    CHECK(rc == 1);
    CHECK(has(out, "status: alarms"));
    CHECK(has(out, "alarms (3):"));
    CHECK(has(out, "mutez-overflow at 11:21"));
    CHECK(has(out, "mutez-overflow at 18:27"));
    CHECK(has(out, "owner-decrease-violation at 21:12 [withdraw]"));
    CHECK(has(out, "verdict: owner-only-decrease: alarm"));
}

TEST_CASE("json output for a single contract is one object") {
    std::string out, err;
    int rc = run({"analyze", cpath("accumulator.tz"), "--multi-call", "--format", "json"},
                 out, err);
    CHECK(rc == 0);
    njson j = njson::parse(out);
    REQUIRE(j.is_object());
    CHECK(j["contract"] == "accumulator.tz");
    CHECK(j["status"] == "ok");
    CHECK(j["invariant"] == "storage in [0, +oo)");
    CHECK(j["alarms"].empty());
    REQUIRE(j["verdicts"].size() == 1);
    CHECK(j["verdicts"][0]["property"] == "owner-only-decrease");
    CHECK(j["verdicts"][0]["status"] == "not-applicable");
}

TEST_CASE("json output for several contracts is an array") {
    std::string out, err;
    int rc = run({"analyze", cpath("accumulator.tz"), cpath("counter.tz"), "--format",
                  "json"},
                 out, err);
    CHECK(rc == 0);
    njson j = njson::parse(out);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 2);
    CHECK(j[0]["contract"] == "accumulator.tz");
    CHECK(j[1]["contract"] == "counter.tz");
}

TEST_CASE("json alarms carry category and position") {
    std::string out, err;
    int rc = run({"analyze", cpath("wallet_unfixed.tz"), "--multi-call", "--sender-split",
                  "--arbitrary-storage", "--format", "json"},
                 out, err);
    CHECK(rc == 1);
    njson j = njson::parse(out);
    bool found = false;
    for (const auto& a : j["alarms"])
        if (a["category"] == "owner-decrease-violation") {
            found = true;
            CHECK(a["line"] == 21);
            CHECK(a["col"] == 12);
            CHECK(a["entrypoint"] == "withdraw");
        }
    CHECK(found);
    CHECK(j["verdicts"][0]["status"] == "alarm");
}

TEST_CASE("a timeout exits with an error code") {
    std::string out, err;
    int rc = run({"analyze", cpath("wallet_unfixed.tz"), "--multi-call", "--sender-split",
                  "--arbitrary-storage", "--timeout", "0.0000001"},
                 out, err);
    CHECK(rc == 2);
    CHECK(has(out, "status: timeout"));
}

TEST_CASE("an unreadable contract is reported as an error") {
    const std::string bad = "/tmp/michelstat_cli_bad.tz";
    std::ofstream(bad) << "parameter nat ;\n"; // storage and code missing
    std::string out, err;
    int rc = run({"analyze", bad}, out, err);
    CHECK(rc == 2);
    CHECK(has(out, "status: error"));

    rc = run({"analyze", "/tmp/does_not_exist.tz"}, out, err);
    CHECK(rc == 2);
    CHECK(has(out, "status: error"));
}

TEST_CASE("exec runs one call") {
    std::string out, err;
    int rc = run({"exec", cpath("accumulator.tz"), "--arg", "3", "--storage", "4"}, out,
                 err);
    CHECK(rc == 0);
    CHECK(out == "storage: 7\noperations (0):\n");
}

TEST_CASE("exec reports a failing call") {
    std::string out, err;
    int rc = run({"exec", cpath("wallet_unfixed.tz"), "--entrypoint", "withdraw", "--arg",
                  "Pair \"x\" 5", "--storage", "{}"},
                 out, err);
    CHECK(rc == 1);
    CHECK(has(out, "failed: "));
    CHECK(has(out, "no-balance"));
}

TEST_CASE("exec rejects an unknown entry point") {
    std::string out, err;
    int rc = run({"exec", cpath("accumulator.tz"), "--entrypoint", "nope", "--arg", "1",
                  "--storage", "0"},
                 out, err);
    CHECK(rc == 2);
    CHECK(has(err, "unknown entry point: nope"));
}

TEST_CASE("corpus aggregates across a directory") {
    std::string out, err;
    int rc = run({"corpus", cpath("corpus12")}, out, err);
    CHECK(rc == 1);
    CHECK(has(out, "c1.tz: "));
    CHECK(has(out, "s2.tz: "));
    CHECK(has(out, "contracts: 12 (ok 5, alarms 7, errors 0)"));
    CHECK(has(out, "alarms by category: always-fail 2, mutez-overflow 3, shift-overflow 2"));
    CHECK(has(out, "time ms: min "));
}

TEST_CASE("corpus rejects a directory without contracts") {
    std::string out, err;
    int rc = run({"corpus", "/tmp"}, out, err);
    CHECK(rc == 2);
    CHECK(has(err, "no .tz contracts"));
}

TEST_CASE("usage errors exit with 2") {
    std::string out, err;
    CHECK(run({}, out, err) == 2);
    CHECK_FALSE(err.empty());
    CHECK(run({"analyze", cpath("counter.tz"), "--bogus"}, out, err) == 2);
    CHECK(run({"analyze", cpath("counter.tz"), "--domains", "magic"}, out, err) == 2);
}

TEST_CASE("help prints the subcommands and exits cleanly") {
    std::string out, err;
    int rc = run({"--help"}, out, err);
    CHECK(rc == 0);
    CHECK(has(out, "analyze"));
    CHECK(has(out, "exec"));
    CHECK(has(out, "corpus"));
}

TEST_CASE("plain intervals remain available") {
    std::string out, err;
    int rc = run({"analyze", cpath("counter.tz"), "--domains", "intv"}, out, err);
    CHECK(rc == 0);
    CHECK(has(out, "status: ok"));
}
