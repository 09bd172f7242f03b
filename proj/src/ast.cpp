#include "michelstat/ast.hpp"

namespace michelstat {

const char* opcode_name(opcode op) {
    switch (op) {
    case opcode::op_push: return "PUSH";
    case opcode::op_unit: return "UNIT";
    case opcode::op_drop: return "DROP";
    case opcode::op_dup: return "DUP";
    case opcode::op_swap: return "SWAP";
    case opcode::op_dig: return "DIG";
    case opcode::op_dug: return "DUG";
    case opcode::op_dip: return "DIP";
    case opcode::op_pair: return "PAIR";
    case opcode::op_unpair: return "UNPAIR";
    case opcode::op_car: return "CAR";
    case opcode::op_cdr: return "CDR";
    case opcode::op_some: return "SOME";
    case opcode::op_none: return "NONE";
    case opcode::op_if_none: return "IF_NONE";
    case opcode::op_left: return "LEFT";
    case opcode::op_right: return "RIGHT";
    case opcode::op_if_left: return "IF_LEFT";
    case opcode::op_nil: return "NIL";
    case opcode::op_cons: return "CONS";
    case opcode::op_if_cons: return "IF_CONS";
    case opcode::op_empty_set: return "EMPTY_SET";
    case opcode::op_empty_map: return "EMPTY_MAP";
    case opcode::op_mem: return "MEM";
    case opcode::op_get: return "GET";
    case opcode::op_update: return "UPDATE";
    case opcode::op_size: return "SIZE";
    case opcode::op_iter: return "ITER";
    case opcode::op_map: return "MAP";
    case opcode::op_add: return "ADD";
    case opcode::op_sub: return "SUB";
    case opcode::op_mul: return "MUL";
    case opcode::op_ediv: return "EDIV";
    case opcode::op_neg: return "NEG";
    case opcode::op_abs: return "ABS";
    case opcode::op_isnat: return "ISNAT";
    case opcode::op_int: return "INT";
    case opcode::op_lsl: return "LSL";
    case opcode::op_lsr: return "LSR";
    case opcode::op_and: return "AND";
    case opcode::op_or: return "OR";
    case opcode::op_xor: return "XOR";
    case opcode::op_not: return "NOT";
    case opcode::op_compare: return "COMPARE";
    case opcode::op_eq: return "EQ";
    case opcode::op_neq: return "NEQ";
    case opcode::op_lt: return "LT";
    case opcode::op_gt: return "GT";
    case opcode::op_le: return "LE";
    case opcode::op_ge: return "GE";
    case opcode::op_if: return "IF";
    case opcode::op_loop: return "LOOP";
    case opcode::op_loop_left: return "LOOP_LEFT";
    case opcode::op_failwith: return "FAILWITH";
    case opcode::op_sender: return "SENDER";
    case opcode::op_source: return "SOURCE";
    case opcode::op_amount: return "AMOUNT";
    case opcode::op_balance: return "BALANCE";
    case opcode::op_now: return "NOW";
    case opcode::op_self_address: return "SELF_ADDRESS";
    case opcode::op_contract: return "CONTRACT";
    case opcode::op_transfer_tokens: return "TRANSFER_TOKENS";
    }
    return "?";
}

static literal_ptr mk(literal l) { return std::make_shared<const literal>(std::move(l)); }

literal_ptr lit_int(big_int v, span s) {
    literal l; l.kind = lit_kind::l_int; l.num = std::move(v); l.where = s; return mk(std::move(l));
}
literal_ptr lit_string(std::string v, span s) {
    literal l; l.kind = lit_kind::l_string; l.str = std::move(v); l.where = s; return mk(std::move(l));
}
literal_ptr lit_bool(bool v, span s) {
    literal l; l.kind = lit_kind::l_bool; l.flag = v; l.where = s; return mk(std::move(l));
}
literal_ptr lit_unit(span s) {
    literal l; l.kind = lit_kind::l_unit; l.where = s; return mk(std::move(l));
}
literal_ptr lit_pair(literal_ptr a, literal_ptr b, span s) {
    literal l; l.kind = lit_kind::l_pair; l.items = {std::move(a), std::move(b)}; l.where = s;
    return mk(std::move(l));
}
literal_ptr lit_some(literal_ptr a, span s) {
    literal l; l.kind = lit_kind::l_some; l.items = {std::move(a)}; l.where = s; return mk(std::move(l));
}
literal_ptr lit_none(span s) {
    literal l; l.kind = lit_kind::l_none; l.where = s; return mk(std::move(l));
}
literal_ptr lit_left(literal_ptr a, span s) {
    literal l; l.kind = lit_kind::l_left; l.items = {std::move(a)}; l.where = s; return mk(std::move(l));
}
literal_ptr lit_right(literal_ptr a, span s) {
    literal l; l.kind = lit_kind::l_right; l.items = {std::move(a)}; l.where = s; return mk(std::move(l));
}
literal_ptr lit_seq(std::vector<literal_ptr> items, span s) {
    literal l; l.kind = lit_kind::l_seq; l.items = std::move(items); l.where = s; return mk(std::move(l));
}
literal_ptr lit_map(std::vector<std::pair<literal_ptr, literal_ptr>> entries, span s) {
    literal l; l.kind = lit_kind::l_map; l.entries = std::move(entries); l.where = s; return mk(std::move(l));
}

static std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string literal::to_string() const {
    switch (kind) {
    case lit_kind::l_int: return num.str();
    case lit_kind::l_string: return quote(str);
    case lit_kind::l_bool: return flag ? "True" : "False";
    case lit_kind::l_unit: return "Unit";
    case lit_kind::l_pair:
        return "(Pair " + items[0]->to_string() + " " + items[1]->to_string() + ")";
    case lit_kind::l_some: return "(Some " + items[0]->to_string() + ")";
    case lit_kind::l_none: return "None";
    case lit_kind::l_left: return "(Left " + items[0]->to_string() + ")";
    case lit_kind::l_right: return "(Right " + items[0]->to_string() + ")";
    case lit_kind::l_seq: {
        std::string out = "{";
        for (size_t i = 0; i < items.size(); ++i) {
            if (i) out += ";";
            out += " " + items[i]->to_string();
        }
        out += items.empty() ? "}" : " }";
        return out;
    }
    case lit_kind::l_map: {
        std::string out = "{";
        for (size_t i = 0; i < entries.size(); ++i) {
            if (i) out += ";";
            out += " Elt " + entries[i].first->to_string() + " " + entries[i].second->to_string();
        }
        out += entries.empty() ? "}" : " }";
        return out;
    }
    }
    return "?";
}

} // namespace michelstat
