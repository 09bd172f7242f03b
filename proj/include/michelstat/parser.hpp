#pragma once

#include <string>

#include "michelstat/ast.hpp"

namespace michelstat {

// Parses a full contract: storage/parameter/code sections in any order.
// ASSERT / CMP* / IFCMP* / ASSERT_CMP* / FAIL macros are expanded here; every
// instruction they expand to keeps the macro token's position.
script parse_script(const std::string& src, const std::string& source_name = "<input>");

script parse_file(const std::string& path);

// Standalone forms used by the command line (--storage, --arg) and by tests.
mtype_ptr parse_type_string(const std::string& src);
literal_ptr parse_literal_string(const std::string& src);

} // namespace michelstat
