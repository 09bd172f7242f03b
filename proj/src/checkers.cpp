#include "michelstat/checkers.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace michelstat {

namespace {

span code_span(const typed_script& ts) {
    if (!ts.sc.code.empty()) return ts.sc.code.front().where;
    return span{};
}

} // namespace

check_result run_checkers(const typed_script& ts, const analysis_result& r) {
    check_result out;
    std::set<std::tuple<std::string, int, int, std::string>> seen;
    auto add = [&](alarm a, bool per_entry) {
        auto key = std::make_tuple(a.category, a.where.line, a.where.col,
                                   per_entry ? a.entrypoint : std::string());
        if (!seen.insert(key).second) return;
        out.alarms.push_back(std::move(a));
    };

    for (const arith_event& e : r.arith) {
        alarm a;
        a.category = e.shift ? "shift-overflow" : "mutez-overflow";
        a.where = e.where;
        a.entrypoint = e.entrypoint;
        a.detail = e.detail;
        add(std::move(a), false);
    }
    for (const decrease_event& e : r.decreases) {
        alarm a;
        a.category = "owner-decrease-violation";
        a.where = e.where;
        a.entrypoint = e.entrypoint;
        a.detail = e.detail;
        add(std::move(a), false);
    }
    span cs = code_span(ts);
    for (const entry_report& e : r.entries) {
        if (!e.always_fails) continue;
        alarm a;
        a.category = "always-fail";
        a.where = cs;
        a.entrypoint = e.name;
        a.detail = "every path through this entry point fails";
        add(std::move(a), true);
    }
    if (r.overall_always_fails() && r.entries.size() > 1) {
        alarm a;
        a.category = "always-fail";
        a.where = cs;
        a.entrypoint = "all";
        a.detail = "every entry point fails on every path";
        add(std::move(a), true);
    }

    std::stable_sort(out.alarms.begin(), out.alarms.end(),
                     [](const alarm& x, const alarm& y) {
                         return std::tie(x.where.line, x.where.col, x.category) <
                                std::tie(y.where.line, y.where.col, y.category);
                     });

    verdict v;
    v.property = "owner-only-decrease";
    if (!r.storage_has_balance_map) {
        v.status = "not-applicable";
        v.note = "storage carries no map from address to mutez";
    } else if (r.timed_out) {
        v.status = "unknown";
        v.note = "analysis timed out";
    } else if (!r.sender_split || !r.multi_call) {
        v.status = "unknown";
        v.note = "needs --sender-split and --multi-call";
    } else if (!r.decreases.empty()) {
        v.status = "alarm";
        v.note = "an update may lower a non-caller balance";
        for (const alarm& a : out.alarms)
            if (a.category == "owner-decrease-violation") v.alarms.push_back(a);
    } else {
        v.status = "proved";
        v.note = "over all call sequences, only the caller's balance can shrink";
    }
    out.verdicts.push_back(std::move(v));
    return out;
}

} // namespace michelstat
