#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace michelstat {

// Exit codes: 0 clean, 1 alarms reported, 2 usage / parse / analysis error
// (timeouts included).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace michelstat
