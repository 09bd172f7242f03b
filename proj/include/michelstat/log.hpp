#pragma once

#include <string>

namespace michelstat {

// Verbosity from the MICHELSTAT_LOG environment variable:
// unset/empty/"off" = quiet, "info"/"1" = progress, "debug"/"2" = details.
int log_level();
bool log_on(int level);
void log_line(int level, const std::string& msg);

} // namespace michelstat
