/*******************************************************************************
 * The abstract interpreter proper: transfer functions over abstract_state,
 * widening fixpoints at loop heads, per-entry-point analysis and the
 * multi-call fixpoint over unbounded sequences of contract invocations.
 *
 * Checked mutez/shift failures are reported as events at their source span;
 * the surviving flow carries the range-met result. FAILWITH and provably
 * failing arithmetic turn the ok-flow to bottom, which contributes nothing
 * to the storage invariant (failed calls revert).
 ******************************************************************************/

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "michelstat/abstract_state.hpp"
#include "michelstat/typecheck.hpp"
#include "michelstat/value.hpp"

namespace michelstat {

struct analyzer_options {
    // false: plain intervals; true: intervals + symbolic expressions and
    // equality classes (guard resolution, relational refinements)
    bool use_sym = true;
    bool sender_split = false;
    bool multi_call = false;
    // start from top-of-type storage instead of a concrete initial value
    bool arbitrary_storage = false;
    unsigned narrow_steps = 0;
    std::optional<big_int> max_amount;
    // initial storage; null means the all-zero value of the storage type
    cvalue_ptr initial_storage;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    unsigned widen_delay = 1;
    // safety caps; hitting one aborts the analysis as a timeout
    unsigned max_rounds = 1000;
    unsigned max_loop_iters = 1000;
};

// Thrown when the deadline or an iteration cap is hit; analyze() maps it to
// timed_out. A timed-out analysis proves nothing.
struct analysis_timeout {};

// A mutez range or shift-width violation possible on a live path.
struct arith_event {
    bool shift = false; // false: mutez over/underflow
    span where;
    std::string entrypoint; // first entry point that reached the site
    std::string detail;
};

// An UPDATE on the non-sender side of a split map(address, mutez) where a
// value decrease could not be excluded.
struct decrease_event {
    span where;
    std::string entrypoint;
    std::string detail;
};

struct entry_report {
    std::string name;
    // true when the ok-flow exit is bottom although the input was not
    bool always_fails = false;
    // storage-only post state of this entry point from the stable invariant
    abstract_state post;
    interval ops_len = interval::bottom();
    std::vector<abs_call> calls;
};

struct analysis_result {
    bool timed_out = false;
    unsigned rounds = 0; // multi-call iterations until stabilization
    // storage-only abstract state: the invariant under multi-call, or the
    // join of the initial storage with all single-call post states
    abstract_state invariant;
    slot storage_root{0, nullptr};
    std::vector<arith_event> arith;
    std::vector<decrease_event> decreases;
    std::vector<entry_report> entries;
    bool storage_has_balance_map = false; // map(address, mutez) in storage
    bool multi_call = false;
    bool sender_split = false;
    bool use_sym = true;
    // S0 joined with one more abstract call round stays below the invariant
    bool fixpoint_verified = false;
    std::vector<std::string> warnings;

    bool overall_always_fails() const;
    std::string render_invariant() const;
};

analysis_result analyze(const typed_script& ts, const analyzer_options& opt);

} // namespace michelstat
