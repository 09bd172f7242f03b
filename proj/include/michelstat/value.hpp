#pragma once

#include <memory>
#include <string>
#include <vector>

#include "michelstat/ast.hpp"

namespace michelstat {

struct cvalue;
using cvalue_ptr = std::shared_ptr<const cvalue>;

enum class vkind {
    v_num,     // int / nat / mutez / timestamp
    v_bool,
    v_string,  // string / address
    v_unit,
    v_pair,
    v_option,  // a null => None
    v_or,      // flag: false = Left, true = Right
    v_list,    // items
    v_set,     // items, sorted, no duplicates
    v_map,     // entries, sorted by key, unique keys
    v_contract, // str = address, ty = parameter type
    v_operation, // transfer: a = argument, num = amount, str = destination, ty = parameter type
};

// Immutable runtime value; sharing makes DUP cheap.
struct cvalue {
    vkind k;
    big_int num;
    bool flag = false;
    std::string str;
    cvalue_ptr a, b;
    std::vector<cvalue_ptr> items;
    std::vector<std::pair<cvalue_ptr, cvalue_ptr>> entries;
    mtype_ptr ty;

    std::string to_string() const;
};

cvalue_ptr mk_num(big_int v);
cvalue_ptr mk_bool(bool v);
cvalue_ptr mk_string(std::string v);
cvalue_ptr mk_unit();
cvalue_ptr mk_pair(cvalue_ptr fst, cvalue_ptr snd);
cvalue_ptr mk_some(cvalue_ptr v);
cvalue_ptr mk_none();
cvalue_ptr mk_or(bool is_right, cvalue_ptr v);
cvalue_ptr mk_list(std::vector<cvalue_ptr> items);
cvalue_ptr mk_set_sorted(std::vector<cvalue_ptr> sorted_items);
cvalue_ptr mk_map_sorted(std::vector<std::pair<cvalue_ptr, cvalue_ptr>> sorted_entries);
cvalue_ptr mk_contract(std::string addr, mtype_ptr param_ty);
cvalue_ptr mk_transfer(cvalue_ptr arg, big_int amount, std::string dest, mtype_ptr param_ty);

// Total order on comparable values (numbers, bools, strings, unit, addresses,
// and pairs of those, lexicographically). Returns -1 / 0 / +1.
int compare_values(const cvalue& x, const cvalue& y);

// Converts a checked literal into a runtime value. Set elements and map keys
// are sorted; duplicates are rejected.
cvalue_ptr value_of_literal(const literal& lit, const mtype_ptr& ty);

// The all-zeros value of a type: 0, "", False, None, empty containers,
// Left of the zero of the left branch.
cvalue_ptr zero_value(const mtype_ptr& ty);

bool values_equal(const cvalue& x, const cvalue& y);

} // namespace michelstat
