#pragma once

#include <memory>
#include <string>
#include <vector>

namespace michelstat {

enum class type_ctor {
    t_int,
    t_nat,
    t_mutez,
    t_timestamp,
    t_bool,
    t_string,
    t_unit,
    t_address,
    t_operation,
    t_contract, // internal: produced by CONTRACT, consumed by TRANSFER_TOKENS
    t_pair,
    t_option,
    t_or,
    t_list,
    t_set,
    t_map,
};

class mtype;
using mtype_ptr = std::shared_ptr<const mtype>;

// Immutable, structurally shared Michelson type. `annot` carries a %field
// annotation (entry-point names on `or` branches).
class mtype {
  public:
    type_ctor ctor;
    std::vector<mtype_ptr> args;
    std::string annot;

    mtype(type_ctor c, std::vector<mtype_ptr> a = {}, std::string an = "")
        : ctor(c), args(std::move(a)), annot(std::move(an)) {}

    static mtype_ptr make(type_ctor c, std::vector<mtype_ptr> a = {}, std::string an = "") {
        return std::make_shared<const mtype>(c, std::move(a), std::move(an));
    }

    bool is_scalar() const {
        switch (ctor) {
        case type_ctor::t_pair:
        case type_ctor::t_option:
        case type_ctor::t_or:
        case type_ctor::t_list:
        case type_ctor::t_set:
        case type_ctor::t_map: return false;
        default: return true;
        }
    }

    bool is_numeric() const {
        switch (ctor) {
        case type_ctor::t_int:
        case type_ctor::t_nat:
        case type_ctor::t_mutez:
        case type_ctor::t_timestamp: return true;
        default: return false;
        }
    }

    // Comparable types back set elements and map keys in this subset.
    bool is_comparable_key() const {
        return is_scalar() && ctor != type_ctor::t_operation && ctor != type_ctor::t_contract;
    }

    // COMPARE additionally accepts pairs of comparables (lexicographic).
    bool is_comparable() const {
        if (ctor == type_ctor::t_pair)
            return args[0]->is_comparable() && args[1]->is_comparable();
        return is_comparable_key();
    }

    bool contains_operation() const {
        if (ctor == type_ctor::t_operation || ctor == type_ctor::t_contract) return true;
        for (const auto& a : args)
            if (a->contains_operation()) return true;
        return false;
    }

    // Structural equality; annotations do not affect it.
    bool equals(const mtype& o) const {
        if (ctor != o.ctor || args.size() != o.args.size()) return false;
        for (size_t i = 0; i < args.size(); ++i)
            if (!args[i]->equals(*o.args[i])) return false;
        return true;
    }

    std::string to_string() const;
};

inline bool type_eq(const mtype_ptr& a, const mtype_ptr& b) { return a->equals(*b); }

mtype_ptr ty_int();
mtype_ptr ty_nat();
mtype_ptr ty_mutez();
mtype_ptr ty_timestamp();
mtype_ptr ty_bool();
mtype_ptr ty_string();
mtype_ptr ty_unit();
mtype_ptr ty_address();
mtype_ptr ty_operation();
mtype_ptr ty_contract(mtype_ptr t);
mtype_ptr ty_pair(mtype_ptr a, mtype_ptr b);
mtype_ptr ty_option(mtype_ptr t);
mtype_ptr ty_or(mtype_ptr a, mtype_ptr b);
mtype_ptr ty_list(mtype_ptr t);
mtype_ptr ty_set(mtype_ptr t);
mtype_ptr ty_map(mtype_ptr k, mtype_ptr v);

} // namespace michelstat
