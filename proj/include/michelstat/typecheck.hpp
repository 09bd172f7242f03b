#pragma once

#include <string>
#include <vector>

#include "michelstat/ast.hpp"

namespace michelstat {

// One leaf of the parameter's `or` tree. `path` records the Left/Right moves
// from the root (false = left, true = right); empty for a non-`or` parameter.
struct entrypoint {
    std::string name;
    mtype_ptr ty;
    std::vector<bool> path;
};

struct typed_script {
    script sc;
    std::vector<entrypoint> entrypoints;
};

// Checks that `code` maps [pair param storage] to [pair (list operation) storage]
// and that every instruction is well-typed. Throws script_error on failure.
typed_script typecheck(script sc);

// Checks a literal against an expected type. Throws script_error on mismatch.
void check_literal(const literal& lit, const mtype_ptr& ty);

// Entry point table of a parameter type, without typechecking any code.
std::vector<entrypoint> entrypoints_of(const mtype_ptr& param_ty);

} // namespace michelstat
