#pragma once

#include <string>

#include "michelstat/ast.hpp"

namespace michelstat {

// Renders code back to concrete syntax. Re-parsing the output yields the same
// AST (macros stay expanded).
std::string to_source(const instr_seq& code, int indent = 0);
std::string to_source(const script& sc);

} // namespace michelstat
