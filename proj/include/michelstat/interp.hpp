#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "michelstat/typecheck.hpp"
#include "michelstat/value.hpp"

namespace michelstat {

enum class fail_kind {
    f_failwith,
    f_mutez_overflow,
    f_mutez_underflow,
    f_shift_overflow,
};

const char* fail_kind_name(fail_kind k);

// Thrown when a contract execution fails (FAILWITH or a checked runtime error).
struct interp_failure {
    fail_kind kind;
    span where;
    cvalue_ptr payload; // FAILWITH argument, null otherwise
    std::string to_string() const;
};

// Thrown when the step budget runs out; distinct from contract failure.
struct interp_step_limit {};

struct call_context {
    std::string sender;
    std::string source;
    std::string self;
    big_int amount;  // mutez
    big_int balance; // mutez, includes amount per protocol convention
    big_int now;     // timestamp
};

struct world {
    struct account {
        std::shared_ptr<const typed_script> code; // null = implicit account
        cvalue_ptr storage;
        big_int balance;
    };
    std::map<std::string, account> accounts;
};

using cstack = std::vector<cvalue_ptr>; // index 0 = top of stack

// Runs a code block on a stack. `w` may be null; CONTRACT then resolves
// only unit-typed implicit accounts. Throws interp_failure / interp_step_limit.
cstack run_code(const instr_seq& code, cstack stack, const call_context& ctx,
                const world* w = nullptr, uint64_t max_steps = 10'000'000);

struct contract_result {
    std::vector<cvalue_ptr> operations;
    cvalue_ptr storage;
};

// One big-step contract execution with the parameter already wrapped in
// Left/Right selectors.
contract_result run_contract_param(const typed_script& ts, cvalue_ptr param, cvalue_ptr storage,
                                   const call_context& ctx, const world* w = nullptr,
                                   uint64_t max_steps = 10'000'000);

// Entry-point form: wraps `arg` along the entry point's or-path first.
contract_result run_contract(const typed_script& ts, const std::string& entrypoint,
                             cvalue_ptr arg, cvalue_ptr storage, const call_context& ctx,
                             const world* w = nullptr, uint64_t max_steps = 10'000'000);

cvalue_ptr wrap_entrypoint(const entrypoint& ep, cvalue_ptr leaf);

const entrypoint* find_entrypoint(const typed_script& ts, const std::string& name);

// One external call: runs the target contract, then executes every emitted
// operation depth-first (a callee's emissions run before remaining siblings).
// Returns the updated world. On failure the exception propagates and the
// caller's world value is untouched (pass by value = snapshot semantics).
world apply_call(world w, const std::string& target, cvalue_ptr param,
                 const std::string& sender, const std::string& source,
                 big_int amount, big_int now, uint64_t max_steps = 10'000'000);

} // namespace michelstat
