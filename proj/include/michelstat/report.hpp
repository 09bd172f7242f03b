#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "michelstat/analyzer.hpp"
#include "michelstat/checkers.hpp"

namespace michelstat {

// Flat, serializable view of one analyzed contract.
struct contract_report {
    std::string contract;
    std::string status; // ok | alarms | timeout | error
    std::string error;  // set when status == error
    std::vector<alarm> alarms;
    std::vector<verdict> verdicts;
    std::string invariant; // newline-separated cell constraints
    bool multi_call = false;
    bool fixpoint_verified = false;
    unsigned rounds = 0;
    long long time_ms = 0;
};

contract_report make_report(const std::string& name, const analysis_result& r,
                            const check_result& c, long long time_ms);

void write_text(std::ostream& out, const contract_report& rep);

// {contract, status, alarms, verdicts, invariant, time_ms}
std::string report_json(const contract_report& rep);
std::string reports_json(const std::vector<contract_report>& reps);

int exit_code_for(const std::vector<contract_report>& reps);

} // namespace michelstat
