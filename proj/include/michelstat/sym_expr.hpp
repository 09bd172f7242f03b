/*******************************************************************************
 * Symbolic constant domain: each cell is bound to an expression over other
 * cells and literals, or to Top (no binding). Bindings are shallow: an
 * assignment stores the expression over its operand cells as written, and
 * reassigning an operand snapshots it first so existing bindings keep their
 * meaning. Shallow bindings stay syntactically stable across loop
 * iterations, which the equality-based join needs. The IF transfer function
 * recognizes the eq/neq/lt/gt/le/ge-of-COMPARE shape and turns it into
 * primitive relations.
 ******************************************************************************/

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "michelstat/bigint.hpp"
#include "michelstat/cells.hpp"
#include "michelstat/interval.hpp"

namespace michelstat {

enum class sym_node {
    s_var,
    s_num,    // integer literal
    s_str,    // string/address literal
    s_add,
    s_sub,
    s_mul,
    s_neg,
    s_compare,
    s_eq,
    s_neq,
    s_lt,
    s_gt,
    s_le,
    s_ge,
    s_pair,
    s_some,
    s_none,
    s_left,
    s_right,
    s_unit,
};

struct sym_expr;
using sym_ptr = std::shared_ptr<const sym_expr>;

struct sym_expr {
    sym_node node;
    cell_var var;                // s_var
    big_int num;                 // s_num
    std::string str;             // s_str
    std::vector<sym_ptr> args;

    std::string to_string() const;
};

sym_ptr sym_var(cell_var v);
sym_ptr sym_num(big_int n);
sym_ptr sym_str(std::string s);
sym_ptr sym_app(sym_node node, std::vector<sym_ptr> args);

int sym_depth(const sym_expr& e);
bool sym_mentions(const sym_expr& e, const cell_var& v);
void sym_collect_vars(const sym_expr& e, std::set<cell_var>& out);
bool sym_equal(const sym_expr& a, const sym_expr& b);

// Replaces every occurrence of `v` by `by`.
sym_ptr sym_subst_var(const sym_ptr& e, const cell_var& v, const sym_ptr& by);
// Renames a variable leaf without changing structure.
sym_ptr sym_rename_var(const sym_ptr& e, const cell_var& from, const cell_var& to);

inline constexpr int sym_depth_cap = 16;

// A primitive relation produced by guard resolution: lhs rel rhs where rhs
// is a cell or a literal.
struct sym_rel {
    cmp_rel rel;
    cell_var x;
    std::optional<cell_var> y;
    big_int k; // used when !y
};

class sym_env {
  public:
    // Top (no binding) when absent.
    sym_ptr get(const cell_var& v) const {
        auto it = m_.find(v);
        return it == m_.end() ? nullptr : it->second;
    }

    // Binds dst to `e` as written (no substitution of operand bindings).
    // Deep expressions drop to Top. Callers must have snapshotted dst first
    // if `e` or other bindings mention it (see abstract_state::assign_num).
    void bind(const cell_var& dst, sym_ptr e);

    void forget(const cell_var& v) { m_.erase(v); }
    void rename(const cell_var& from, const cell_var& to);
    void rename_root(uint64_t from, uint64_t to);
    void forget_root(uint64_t root);

    bool mentions(const cell_var& v) const;
    // Replaces occurrences of `v` inside *other* bindings by `by`
    // (used when v is about to be overwritten).
    void subst_everywhere(const cell_var& v, const sym_ptr& by);
    // Drops every binding that mentions v (including v's own).
    void drop_mentions(const cell_var& v);

    // Keep only syntactically identical bindings.
    sym_env join(const sym_env& o) const;
    bool leq(const sym_env& o) const;
    bool operator==(const sym_env& o) const;

    // The cells transitively mentioned by live bindings (for snapshot GC).
    void collect_mentioned(std::set<cell_var>& out) const;

    const std::map<cell_var, sym_ptr>& entries() const { return m_; }

    // Resolves a boolean cell's binding into primitive relations implied by
    // the branch outcome; empty when unrecognized.
    std::vector<sym_rel> resolve_guard(const cell_var& v, bool branch) const;

  private:
    std::map<cell_var, sym_ptr> m_;
};

} // namespace michelstat
