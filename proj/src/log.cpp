#include "michelstat/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

namespace michelstat {

int log_level() {
    static const int level = [] {
        const char* v = std::getenv("MICHELSTAT_LOG");
        if (!v) return 0;
        std::string s(v);
        if (s.empty() || s == "0" || s == "off" || s == "quiet") return 0;
        if (s == "2" || s == "debug" || s == "trace") return 2;
        return 1;
    }();
    return level;
}

bool log_on(int level) { return log_level() >= level; }

void log_line(int level, const std::string& msg) {
    if (!log_on(level)) return;
    std::fprintf(stderr, "michelstat: %s\n", msg.c_str());
}

} // namespace michelstat
