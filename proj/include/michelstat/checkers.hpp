#pragma once

// Turns analysis results into alarms and property verdicts.
//
// Alarm categories:
//   mutez-overflow            ADD/SUB/MUL on mutez may leave [0, 2^63-1]
//   shift-overflow            LSL/LSR shift amount may exceed 256
//   always-fail               an entry point (or the whole contract) never
//                             finishes normally
//   owner-decrease-violation  a balance-map update may lower the stored
//                             balance of an address other than the caller
//
// The owner-only-decrease verdict is proved only from a multi-call analysis
// with sender partitioning; anything weaker reports unknown.

#include <string>
#include <vector>

#include "michelstat/analyzer.hpp"
#include "michelstat/ast.hpp"

namespace michelstat {

struct alarm {
    std::string category;
    span where;
    std::string entrypoint;
    std::string detail;
};

struct verdict {
    std::string property;
    std::string status; // proved | alarm | unknown | not-applicable
    std::string note;
    std::vector<alarm> alarms;
};

struct check_result {
    std::vector<alarm> alarms;
    std::vector<verdict> verdicts;
};

check_result run_checkers(const typed_script& ts, const analysis_result& r);

} // namespace michelstat
