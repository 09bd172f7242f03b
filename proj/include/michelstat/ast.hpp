#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "michelstat/bigint.hpp"
#include "michelstat/types.hpp"

namespace michelstat {

// 1-based source position of the token that starts an instruction or literal.
struct span {
    int line = 0;
    int col = 0;
};

struct script_error : std::runtime_error {
    span where;
    script_error(const std::string& msg, span s = {})
        : std::runtime_error(msg), where(s) {}
};

enum class opcode {
    // stack shuffling
    op_push,
    op_unit,
    op_drop,
    op_dup,
    op_swap,
    op_dig,
    op_dug,
    op_dip,
    // pairs
    op_pair,
    op_unpair,
    op_car,
    op_cdr,
    // options
    op_some,
    op_none,
    op_if_none,
    // unions
    op_left,
    op_right,
    op_if_left,
    // lists
    op_nil,
    op_cons,
    op_if_cons,
    // sets and maps
    op_empty_set,
    op_empty_map,
    op_mem,
    op_get,
    op_update,
    op_size,
    op_iter,
    op_map,
    // arithmetic
    op_add,
    op_sub,
    op_mul,
    op_ediv,
    op_neg,
    op_abs,
    op_isnat,
    op_int,
    op_lsl,
    op_lsr,
    op_and,
    op_or,
    op_xor,
    op_not,
    // comparison
    op_compare,
    op_eq,
    op_neq,
    op_lt,
    op_gt,
    op_le,
    op_ge,
    // control
    op_if,
    op_loop,
    op_loop_left,
    op_failwith,
    // environment
    op_sender,
    op_source,
    op_amount,
    op_balance,
    op_now,
    op_self_address,
    op_contract,
    op_transfer_tokens,
};

const char* opcode_name(opcode op);

// Literal values as parsed. Typing is resolved against an expected type.
struct literal;
using literal_ptr = std::shared_ptr<const literal>;

enum class lit_kind {
    l_int,    // 3, -4
    l_string, // "abc"
    l_bool,   // True / False
    l_unit,   // Unit
    l_pair,   // (Pair a b)
    l_some,   // (Some a)
    l_none,   // None
    l_left,   // (Left a)
    l_right,  // (Right a)
    l_seq,    // { a; b; ... } for lists and sets
    l_map,    // { Elt k v; ... } for maps
};

struct literal {
    lit_kind kind;
    span where;
    big_int num;                       // l_int
    std::string str;                   // l_string
    bool flag = false;                 // l_bool
    std::vector<literal_ptr> items;    // l_pair/l_some/l_left/l_right/l_seq
    std::vector<std::pair<literal_ptr, literal_ptr>> entries; // l_map

    std::string to_string() const;
};

literal_ptr lit_int(big_int v, span s = {});
literal_ptr lit_string(std::string v, span s = {});
literal_ptr lit_bool(bool v, span s = {});
literal_ptr lit_unit(span s = {});
literal_ptr lit_pair(literal_ptr a, literal_ptr b, span s = {});
literal_ptr lit_some(literal_ptr a, span s = {});
literal_ptr lit_none(span s = {});
literal_ptr lit_left(literal_ptr a, span s = {});
literal_ptr lit_right(literal_ptr a, span s = {});
literal_ptr lit_seq(std::vector<literal_ptr> items, span s = {});
literal_ptr lit_map(std::vector<std::pair<literal_ptr, literal_ptr>> entries, span s = {});

struct instr;
using instr_seq = std::vector<instr>;

struct instr {
    opcode op;
    span where;
    uint64_t n = 0;          // DROP n / DUP n / DIG n / DUG n / DIP n
    mtype_ptr ty;            // PUSH / NONE / LEFT / RIGHT / NIL / EMPTY_SET / CONTRACT
    mtype_ptr ty2;           // EMPTY_MAP value type (ty = key type)
    literal_ptr lit;         // PUSH
    std::vector<instr_seq> blocks; // IF-family: 2; DIP/ITER/MAP/LOOP/LOOP_LEFT: 1
    // set by the typechecker: ADD/SUB/MUL over mutez operands carry the
    // 63-bit range check at run time
    bool mutez_checked = false;
};

struct script {
    mtype_ptr storage_ty;
    mtype_ptr param_ty;
    instr_seq code;
    std::string source_name; // file name for reports
};

} // namespace michelstat
