#include "michelstat/types.hpp"

namespace michelstat {

mtype_ptr ty_int() { static mtype_ptr t = mtype::make(type_ctor::t_int); return t; }
mtype_ptr ty_nat() { static mtype_ptr t = mtype::make(type_ctor::t_nat); return t; }
mtype_ptr ty_mutez() { static mtype_ptr t = mtype::make(type_ctor::t_mutez); return t; }
mtype_ptr ty_timestamp() { static mtype_ptr t = mtype::make(type_ctor::t_timestamp); return t; }
mtype_ptr ty_bool() { static mtype_ptr t = mtype::make(type_ctor::t_bool); return t; }
mtype_ptr ty_string() { static mtype_ptr t = mtype::make(type_ctor::t_string); return t; }
mtype_ptr ty_unit() { static mtype_ptr t = mtype::make(type_ctor::t_unit); return t; }
mtype_ptr ty_address() { static mtype_ptr t = mtype::make(type_ctor::t_address); return t; }
mtype_ptr ty_operation() { static mtype_ptr t = mtype::make(type_ctor::t_operation); return t; }
mtype_ptr ty_contract(mtype_ptr t) { return mtype::make(type_ctor::t_contract, {std::move(t)}); }
mtype_ptr ty_pair(mtype_ptr a, mtype_ptr b) { return mtype::make(type_ctor::t_pair, {std::move(a), std::move(b)}); }
mtype_ptr ty_option(mtype_ptr t) { return mtype::make(type_ctor::t_option, {std::move(t)}); }
mtype_ptr ty_or(mtype_ptr a, mtype_ptr b) { return mtype::make(type_ctor::t_or, {std::move(a), std::move(b)}); }
mtype_ptr ty_list(mtype_ptr t) { return mtype::make(type_ctor::t_list, {std::move(t)}); }
mtype_ptr ty_set(mtype_ptr t) { return mtype::make(type_ctor::t_set, {std::move(t)}); }
mtype_ptr ty_map(mtype_ptr k, mtype_ptr v) { return mtype::make(type_ctor::t_map, {std::move(k), std::move(v)}); }

static const char* ctor_name(type_ctor c) {
    switch (c) {
    case type_ctor::t_int: return "int";
    case type_ctor::t_nat: return "nat";
    case type_ctor::t_mutez: return "mutez";
    case type_ctor::t_timestamp: return "timestamp";
    case type_ctor::t_bool: return "bool";
    case type_ctor::t_string: return "string";
    case type_ctor::t_unit: return "unit";
    case type_ctor::t_address: return "address";
    case type_ctor::t_operation: return "operation";
    case type_ctor::t_contract: return "contract";
    case type_ctor::t_pair: return "pair";
    case type_ctor::t_option: return "option";
    case type_ctor::t_or: return "or";
    case type_ctor::t_list: return "list";
    case type_ctor::t_set: return "set";
    case type_ctor::t_map: return "map";
    }
    return "?";
}

std::string mtype::to_string() const {
    std::string s = ctor_name(ctor);
    if (!annot.empty()) s += " %" + annot;
    if (args.empty()) return s;
    std::string out = "(" + s;
    for (const auto& a : args) out += " " + a->to_string();
    out += ")";
    return out;
}

} // namespace michelstat
