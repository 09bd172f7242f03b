#include "michelstat/value.hpp"

#include <algorithm>

namespace michelstat {

namespace {
cvalue_ptr mk(cvalue v) { return std::make_shared<const cvalue>(std::move(v)); }
} // namespace

cvalue_ptr mk_num(big_int v) {
    cvalue c; c.k = vkind::v_num; c.num = std::move(v); return mk(std::move(c));
}
cvalue_ptr mk_bool(bool v) {
    cvalue c; c.k = vkind::v_bool; c.flag = v; return mk(std::move(c));
}
cvalue_ptr mk_string(std::string v) {
    cvalue c; c.k = vkind::v_string; c.str = std::move(v); return mk(std::move(c));
}
cvalue_ptr mk_unit() {
    static cvalue_ptr u = [] { cvalue c; c.k = vkind::v_unit; return mk(std::move(c)); }();
    return u;
}
cvalue_ptr mk_pair(cvalue_ptr fst, cvalue_ptr snd) {
    cvalue c; c.k = vkind::v_pair; c.a = std::move(fst); c.b = std::move(snd);
    return mk(std::move(c));
}
cvalue_ptr mk_some(cvalue_ptr v) {
    cvalue c; c.k = vkind::v_option; c.a = std::move(v); return mk(std::move(c));
}
cvalue_ptr mk_none() {
    static cvalue_ptr n = [] { cvalue c; c.k = vkind::v_option; return mk(std::move(c)); }();
    return n;
}
cvalue_ptr mk_or(bool is_right, cvalue_ptr v) {
    cvalue c; c.k = vkind::v_or; c.flag = is_right; c.a = std::move(v);
    return mk(std::move(c));
}
cvalue_ptr mk_list(std::vector<cvalue_ptr> items) {
    cvalue c; c.k = vkind::v_list; c.items = std::move(items); return mk(std::move(c));
}
cvalue_ptr mk_set_sorted(std::vector<cvalue_ptr> sorted_items) {
    cvalue c; c.k = vkind::v_set; c.items = std::move(sorted_items); return mk(std::move(c));
}
cvalue_ptr mk_map_sorted(std::vector<std::pair<cvalue_ptr, cvalue_ptr>> sorted_entries) {
    cvalue c; c.k = vkind::v_map; c.entries = std::move(sorted_entries); return mk(std::move(c));
}
cvalue_ptr mk_contract(std::string addr, mtype_ptr param_ty) {
    cvalue c; c.k = vkind::v_contract; c.str = std::move(addr); c.ty = std::move(param_ty);
    return mk(std::move(c));
}
cvalue_ptr mk_transfer(cvalue_ptr arg, big_int amount, std::string dest, mtype_ptr param_ty) {
    cvalue c; c.k = vkind::v_operation; c.a = std::move(arg); c.num = std::move(amount);
    c.str = std::move(dest); c.ty = std::move(param_ty);
    return mk(std::move(c));
}

int compare_values(const cvalue& x, const cvalue& y) {
    switch (x.k) {
    case vkind::v_num:
        return x.num < y.num ? -1 : x.num > y.num ? 1 : 0;
    case vkind::v_bool:
        return int(x.flag) - int(y.flag);
    case vkind::v_string:
        return x.str < y.str ? -1 : x.str > y.str ? 1 : 0;
    case vkind::v_unit:
        return 0;
    case vkind::v_pair: {
        int c = compare_values(*x.a, *y.a);
        return c != 0 ? c : compare_values(*x.b, *y.b);
    }
    default:
        throw std::logic_error("compare_values: not a comparable value");
    }
}

bool values_equal(const cvalue& x, const cvalue& y) {
    if (x.k != y.k) return false;
    switch (x.k) {
    case vkind::v_num: return x.num == y.num;
    case vkind::v_bool: return x.flag == y.flag;
    case vkind::v_string: return x.str == y.str;
    case vkind::v_unit: return true;
    case vkind::v_pair: return values_equal(*x.a, *y.a) && values_equal(*x.b, *y.b);
    case vkind::v_option:
        if (!x.a != !y.a) return false;
        return !x.a || values_equal(*x.a, *y.a);
    case vkind::v_or:
        return x.flag == y.flag && values_equal(*x.a, *y.a);
    case vkind::v_list:
    case vkind::v_set: {
        if (x.items.size() != y.items.size()) return false;
        for (size_t i = 0; i < x.items.size(); ++i)
            if (!values_equal(*x.items[i], *y.items[i])) return false;
        return true;
    }
    case vkind::v_map: {
        if (x.entries.size() != y.entries.size()) return false;
        for (size_t i = 0; i < x.entries.size(); ++i) {
            if (!values_equal(*x.entries[i].first, *y.entries[i].first)) return false;
            if (!values_equal(*x.entries[i].second, *y.entries[i].second)) return false;
        }
        return true;
    }
    case vkind::v_contract:
        return x.str == y.str && type_eq(x.ty, y.ty);
    case vkind::v_operation:
        return x.str == y.str && x.num == y.num && type_eq(x.ty, y.ty) &&
               values_equal(*x.a, *y.a);
    }
    return false;
}

cvalue_ptr value_of_literal(const literal& lit, const mtype_ptr& ty) {
    switch (ty->ctor) {
    case type_ctor::t_int:
    case type_ctor::t_nat:
    case type_ctor::t_mutez:
    case type_ctor::t_timestamp:
        return mk_num(lit.num);
    case type_ctor::t_bool:
        return mk_bool(lit.flag);
    case type_ctor::t_string:
    case type_ctor::t_address:
        return mk_string(lit.str);
    case type_ctor::t_unit:
        return mk_unit();
    case type_ctor::t_pair:
        return mk_pair(value_of_literal(*lit.items[0], ty->args[0]),
                       value_of_literal(*lit.items[1], ty->args[1]));
    case type_ctor::t_option:
        if (lit.kind == lit_kind::l_none) return mk_none();
        return mk_some(value_of_literal(*lit.items[0], ty->args[0]));
    case type_ctor::t_or:
        if (lit.kind == lit_kind::l_left)
            return mk_or(false, value_of_literal(*lit.items[0], ty->args[0]));
        return mk_or(true, value_of_literal(*lit.items[0], ty->args[1]));
    case type_ctor::t_list: {
        std::vector<cvalue_ptr> items;
        for (const auto& it : lit.items) items.push_back(value_of_literal(*it, ty->args[0]));
        return mk_list(std::move(items));
    }
    case type_ctor::t_set: {
        std::vector<cvalue_ptr> items;
        for (const auto& it : lit.items) items.push_back(value_of_literal(*it, ty->args[0]));
        std::sort(items.begin(), items.end(), [](const cvalue_ptr& a, const cvalue_ptr& b) {
            return compare_values(*a, *b) < 0;
        });
        for (size_t i = 1; i < items.size(); ++i)
            if (compare_values(*items[i - 1], *items[i]) == 0)
                throw script_error("duplicate set element", lit.where);
        return mk_set_sorted(std::move(items));
    }
    case type_ctor::t_map: {
        std::vector<std::pair<cvalue_ptr, cvalue_ptr>> entries;
        for (const auto& [k, v] : lit.entries)
            entries.emplace_back(value_of_literal(*k, ty->args[0]),
                                 value_of_literal(*v, ty->args[1]));
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            return compare_values(*a.first, *b.first) < 0;
        });
        for (size_t i = 1; i < entries.size(); ++i)
            if (compare_values(*entries[i - 1].first, *entries[i].first) == 0)
                throw script_error("duplicate map key", lit.where);
        return mk_map_sorted(std::move(entries));
    }
    default:
        throw script_error("type " + ty->to_string() + " has no literals", lit.where);
    }
}

cvalue_ptr zero_value(const mtype_ptr& ty) {
    switch (ty->ctor) {
    case type_ctor::t_int:
    case type_ctor::t_nat:
    case type_ctor::t_mutez:
    case type_ctor::t_timestamp:
        return mk_num(0);
    case type_ctor::t_bool:
        return mk_bool(false);
    case type_ctor::t_string:
    case type_ctor::t_address:
        return mk_string("");
    case type_ctor::t_unit:
        return mk_unit();
    case type_ctor::t_pair:
        return mk_pair(zero_value(ty->args[0]), zero_value(ty->args[1]));
    case type_ctor::t_option:
        return mk_none();
    case type_ctor::t_or:
        return mk_or(false, zero_value(ty->args[0]));
    case type_ctor::t_list:
        return mk_list({});
    case type_ctor::t_set:
        return mk_set_sorted({});
    case type_ctor::t_map:
        return mk_map_sorted({});
    default:
        throw std::logic_error("zero_value: type has no values");
    }
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

std::string cvalue::to_string() const {
    switch (k) {
    case vkind::v_num: return num.str();
    case vkind::v_bool: return flag ? "True" : "False";
    case vkind::v_string: return quote(str);
    case vkind::v_unit: return "Unit";
    case vkind::v_pair: return "(Pair " + a->to_string() + " " + b->to_string() + ")";
    case vkind::v_option: return a ? "(Some " + a->to_string() + ")" : "None";
    case vkind::v_or:
        return (flag ? "(Right " : "(Left ") + a->to_string() + ")";
    case vkind::v_list:
    case vkind::v_set: {
        std::string out = "{";
        for (size_t i = 0; i < items.size(); ++i) {
            if (i) out += ";";
            out += " " + items[i]->to_string();
        }
        out += items.empty() ? "}" : " }";
        return out;
    }
    case vkind::v_map: {
        std::string out = "{";
        for (size_t i = 0; i < entries.size(); ++i) {
            if (i) out += ";";
            out += " Elt " + entries[i].first->to_string() + " " + entries[i].second->to_string();
        }
        out += entries.empty() ? "}" : " }";
        return out;
    }
    case vkind::v_contract:
        return "(Contract " + quote(str) + " " + ty->to_string() + ")";
    case vkind::v_operation:
        return "(Transfer " + a->to_string() + " " + num.str() + " " + quote(str) + ")";
    }
    return "?";
}

} // namespace michelstat
