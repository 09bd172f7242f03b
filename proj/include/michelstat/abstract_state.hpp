/*******************************************************************************
 * The combined abstract state: a typed stack of cell roots over a product
 * of domains (intervals, symbolic expressions, equality classes, address
 * and string abstractions) plus container bookkeeping.
 *
 * Stack-to-variable translation: every stack slot is a root object; every
 * scalar component of its type is one cell (root + path). Structural
 * instructions permute or rename roots without touching domain values;
 * DUP makes component-wise copies and records the equalities.
 *
 * Containers are summarized: one summary cell per component plus a
 * length/cardinality cell. map(address, mutez) can instead be split into
 * the caller's entry and a summary of all other entries; updates on the
 * other-keys side report whether a decrease is provably excluded.
 *
 * Ghost bookkeeping (value-identity groups, key presence facts learned
 * from IF_NONE, read links from GET) makes the common read-modify-write
 * map pattern precise: updating a key just read keeps the cardinality
 * exact and lets new >= old be established structurally.
 ******************************************************************************/

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "michelstat/addr_abs.hpp"
#include "michelstat/bool_abs.hpp"
#include "michelstat/cells.hpp"
#include "michelstat/domain.hpp"
#include "michelstat/eq_classes.hpp"
#include "michelstat/sym_expr.hpp"
#include "michelstat/value.hpp"

namespace michelstat {

// String abstraction: a known constant or anything. Bottom marks empty
// summaries.
struct str_abs {
    enum kind { s_bot, s_const, s_top } k = s_top;
    std::string value;

    static str_abs bottom() { return {s_bot, {}}; }
    static str_abs top() { return {s_top, {}}; }
    static str_abs of(std::string v) { return {s_const, std::move(v)}; }

    bool leq(const str_abs& o) const {
        if (k == s_bot) return true;
        if (o.k == s_top) return true;
        if (o.k == s_bot) return false;
        return k == s_const && value == o.value;
    }
    str_abs join(const str_abs& o) const {
        if (k == s_bot) return o;
        if (o.k == s_bot) return *this;
        if (k == s_const && o.k == s_const && value == o.value) return *this;
        return top();
    }
    str_abs meet(const str_abs& o) const {
        if (k == s_top) return o;
        if (o.k == s_top) return *this;
        if (k == s_const && o.k == s_const && value == o.value) return *this;
        return bottom();
    }
    bool operator==(const str_abs& o) const {
        return k == o.k && (k != s_const || value == o.value);
    }
    std::string to_string() const {
        if (k == s_bot) return "_|_";
        if (k == s_top) return "T";
        return "\"" + value + "\"";
    }
};

// Three-valued key/side presence.
enum class presence { p_bot, p_absent, p_present, p_maybe };

presence presence_join(presence a, presence b);
const char* presence_name(presence p);

// An abstract pending operation (transfer) captured by value at its
// emission site.
struct abs_call {
    span where;
    addr_abs target = addr_abs::top();
    interval amount = interval::top();
    mtype_ptr param_ty;
    // argument snapshot, keyed by component path
    std::map<path, interval> arg_num;
    std::map<path, addr_abs> arg_addr;

    abs_call join(const abs_call& o) const;
};

struct slot {
    uint64_t root;
    mtype_ptr ty;
};

class abstract_state {
  public:
    struct options {
        bool sender_split = false;
        bool use_sym = true; // symbolic + equality domains ("exp")
    };

    abstract_state();
    explicit abstract_state(options opts);

    static abstract_state make_bottom();
    static abstract_state make_bottom(options opts);
    bool is_bottom() const { return bottom_; }
    void set_bottom();

    const options& opts() const { return opts_; }
    decompose_opts dopts() const { return {opts_.sender_split}; }

    // ---- stack shape ----
    size_t depth() const { return stack_.size(); }
    const slot& at(size_t i) const { return stack_[i]; }
    uint64_t fresh_root();

    // Pushes a slot whose cells are all top-of-kind.
    uint64_t push_top(const mtype_ptr& ty);
    // Pushes a slot initialized from a concrete literal value.
    uint64_t push_value(const mtype_ptr& ty, const cvalue& v);
    // Pushes a slot without initializing any cell (caller fills them).
    uint64_t push_raw(const mtype_ptr& ty);
    // Pops the top slot, keeping its cells in the domains (operands of
    // arithmetic stay constrainable through equalities).
    slot pop_keep();
    // Pops and forgets all cells (DROP).
    void pop_forget();

    void do_swap();
    void do_dig(size_t n);
    void do_dug(size_t n);
    // DUP: fresh root, component-wise copy + equalities.
    void do_dup(size_t n);

    // ---- cell-level access ----
    interval get_itv(const cell_var& v) const { return num_.get(v); }
    void set_itv(const cell_var& v, const interval& i) { num_.set(v, i); }
    addr_abs get_addr(const cell_var& v) const;
    void set_addr(const cell_var& v, const addr_abs& a);
    str_abs get_str(const cell_var& v) const;
    void set_str(const cell_var& v, const str_abs& s);

    // Copies the full abstraction of one leaf cell (interval or
    // address/string value), binds dst := src symbolically and records the
    // equality.
    void assign_leaf_copy(const cell_var& dst, const cell_var& src, cell_kind kind);

    // Numeric assignment dst := e (interval `i` is e's evaluation).
    // Snapshots dst first when e or other bindings mention it.
    void assign_num(const cell_var& dst, const interval& i, sym_ptr e);

    // Forgets dst's own value but keeps other bindings meaningful by
    // snapshotting (used before weak updates).
    void invalidate(const cell_var& dst);

    void forget_cell(const cell_var& v);
    void rename_cell(const cell_var& from, const cell_var& to);
    void rename_root(uint64_t from, uint64_t to);
    void forget_root(uint64_t root);

    // ---- conditions ----
    // Applies "x rel y" / "x rel k" across domains: intervals refined (with
    // equality-class propagation), eq recorded on eq-rel, address cells
    // refined through the sender relation. The cell kind is inferred from
    // which domain carries the operands.
    void assume_rel(cmp_rel rel, const cell_var& x, const std::optional<cell_var>& y,
                    const big_int& k);

    // Refine a cell to a sub-interval (tag refinements etc.); bottoms the
    // state on contradiction.
    void assume_itv(const cell_var& v, const interval& i);

    // ---- equality reduction ----
    void eq_merge_reduce(const cell_var& x, const cell_var& y);
    bool eq_same(const cell_var& x, const cell_var& y) const;

    // ---- sender anchor ----
    uint64_t sender_gen() const { return sender_gen_; }
    void new_sender_gen();

    // ---- containers ----
    uint64_t group_of(const cell_var& map_cell) const;
    void set_group(const cell_var& map_cell, uint64_t g);
    uint64_t fresh_group();

    // GET: pops key and map slots logically (caller drives the stack);
    // this computes the option result cells for `result_root` and records
    // the ghost read link / origin.
    void map_get(const slot& map_slot, const slot& key_slot, uint64_t result_root);

    // UPDATE with an option value on a plain map; `val_slot` holds option(v).
    void map_update(const slot& map_slot, const slot& key_slot, const slot& val_slot);

    // UPDATE on a sender-split map; returns true when a decrease of some
    // other key's value is NOT excluded (the owner-decrease witness).
    bool smap_update(const slot& map_slot, const slot& key_slot, const slot& val_slot);

    bool is_split_map_slot(const slot& s) const;

    // set UPDATE (key, bool, set)
    void set_update(const slot& set_slot, const slot& key_slot, const slot& flag_slot);

    // MEM on set or map
    bool_abs mem_query(const slot& cont_slot, const slot& key_slot) const;

    // IF_NONE refinement hook: called with the popped option slot's root
    // before branching. Records key presence facts when the option came
    // from a map read.
    void refine_on_option_branch(const slot& opt_slot, bool is_some);

    // ---- emitted operations ----
    void record_call(const cell_var& op_cell, abs_call call);
    std::vector<abs_call> calls_of(const cell_var& cell) const;
    void move_calls(const cell_var& from, const cell_var& to); // CONS: join into list
    void clear_calls(const cell_var& cell);

    // ---- lattice ----
    bool leq(const abstract_state& o) const;
    abstract_state join(const abstract_state& o) const;
    abstract_state widen(const abstract_state& o) const;
    abstract_state narrow(const abstract_state& o) const;
    bool same_as(const abstract_state& o) const; // equality for fixpoints

    // Renames both states' stacks to one canonical set of fresh roots so a
    // pointwise join is meaningful. Requires equal stack shapes.
    static void realign(abstract_state& a, abstract_state& b);

    // Drops domain bindings of cells unreachable from the stack, the
    // context anchors and live symbolic bindings.
    void gc();

    // ---- views ----
    const itv_env& nums() const { return num_; }
    const sym_env& syms() const { return sym_; }
    const eq_classes& eqs() const { return eqs_; }
    sym_env& syms_mut() { return sym_; }
    const std::map<cell_var, addr_abs>& addrs() const { return addrs_; }
    const std::vector<slot>& stack() const { return stack_; }
    std::vector<slot>& stack_mut() { return stack_; }

    presence side_presence(const cell_var& map_cell, bool sender_side) const;
    void set_side_presence(const cell_var& map_cell, bool sender_side, presence p);

    // Invalidates per-value ghost bookkeeping of storage maps (fresh
    // groups, presence flags rederived from cardinality); used when
    // (re)entering a call on invariant storage.
    void reset_storage_meta(const slot& storage_slot);
    // Joins split-map sides back into uniform summaries at call exit.
    void collapse_split(const slot& storage_slot);

    // Moves/copies a whole typed object between (root, prefix) locations.
    void rename_object(uint64_t from_root, const path& from_prefix, const mtype_ptr& ty,
                       uint64_t to_root, const path& to_prefix);
    void copy_object(uint64_t from_root, const path& from_prefix, const mtype_ptr& ty,
                     uint64_t to_root, const path& to_prefix);
    void forget_object(uint64_t root, const path& prefix, const mtype_ptr& ty);
    // Sets every cell of the object to the empty summary (dead branch).
    void bottom_object(uint64_t root, const path& prefix, const mtype_ptr& ty);
    // Sets every cell of the object to top-of-kind.
    void top_object(uint64_t root, const path& prefix, const mtype_ptr& ty);
    // Pointwise join of src into dst cells (weak writes into summaries).
    void join_object_into(uint64_t src_root, const path& src_prefix, const mtype_ptr& ty,
                          uint64_t dst_root, const path& dst_prefix);

    std::string render_cells(const slot& s, const std::string& label) const;

  private:
    struct key_fact {
        cell_var key;
        presence pres;
        bool operator==(const key_fact&) const = default;
    };
    struct read_link {
        cell_var key;
        cell_var content;
        bool operator==(const read_link&) const = default;
    };
    struct get_origin {
        uint64_t group = 0;
        cell_var key;
        // 0 = plain map, 1 = sender side, 2 = other side, 3 = unknown side
        int side = 0;
        cell_var map_cell;
    };
    struct split_meta {
        presence s = presence::p_maybe;
        presence o = presence::p_maybe;
        bool operator==(const split_meta&) const = default;
    };

    void acc_value(uint64_t root, const path& prefix, const mtype_ptr& ty, const cvalue& v,
                   bool weak);
    bool snapshot_if_referenced(const cell_var& dst);
    void apply_interval_refinement(const cell_var& x, const interval& i);
    presence key_presence(uint64_t group, const cell_var& key) const;
    const read_link* find_link(uint64_t group, const cell_var& key) const;
    bool expr_ge_cell(const sym_expr& e, const cell_var& c) const;
    bool provably_ge(const cell_var& new_cell, uint64_t group, const cell_var& key) const;
    bool provably_distinct(const cell_var& a, const cell_var& b) const;
    void rename_in_meta(const cell_var& from, const cell_var& to);
    void forget_root_in_meta(uint64_t root);
    void drop_group_facts_on_update(uint64_t old_group, uint64_t new_group,
                                    const cell_var& updated_key, bool may_some,
                                    bool may_none);

    options opts_;
    bool bottom_ = false;
    std::vector<slot> stack_;
    itv_env num_;
    sym_env sym_;
    eq_classes eqs_;
    std::map<cell_var, addr_abs> addrs_;
    std::map<cell_var, str_abs> strs_;
    std::map<cell_var, uint64_t> groups_;
    std::map<cell_var, split_meta> splits_;
    std::map<uint64_t, std::vector<key_fact>> facts_;
    std::map<uint64_t, std::vector<read_link>> links_;
    std::map<uint64_t, get_origin> origins_; // option root -> origin
    std::map<cell_var, std::map<uint64_t, abs_call>> calls_; // keyed by emission site hash
    uint64_t sender_gen_ = 1;
    std::shared_ptr<uint64_t> next_root_;
    std::shared_ptr<uint64_t> next_group_;

    friend class analyzer_impl;
};

} // namespace michelstat
