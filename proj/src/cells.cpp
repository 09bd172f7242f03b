#include "michelstat/cells.hpp"

namespace michelstat {

const char* step_name(step s) {
    switch (s) {
    case step::fst: return "fst";
    case step::snd: return "snd";
    case step::some_content: return "some-content";
    case step::left_content: return "left-content";
    case step::right_content: return "right-content";
    case step::list_elems: return "list-elems";
    case step::list_len: return "list-len";
    case step::set_elems: return "set-elems";
    case step::set_card: return "set-card";
    case step::map_keys: return "map-keys";
    case step::map_vals: return "map-vals";
    case step::map_card: return "map-card";
    case step::map_sender_val: return "map-sender-val";
    case step::map_nonsender_val: return "map-nonsender-val";
    case step::option_tag: return "option-tag";
    case step::union_tag: return "union-tag";
    case step::opslist_elems: return "opslist-elems";
    case step::opslist_len: return "opslist-len";
    }
    return "?";
}

std::string path_to_string(const path& p) {
    std::string out;
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) out += ".";
        out += step_name(p[i]);
    }
    return out;
}

std::string cell_var::to_string() const {
    std::string r;
    switch (root) {
    case reserved_root::sender: r = "ctx.sender"; break;
    case reserved_root::source: r = "ctx.source"; break;
    case reserved_root::amount: r = "ctx.amount"; break;
    case reserved_root::balance: r = "ctx.balance"; break;
    case reserved_root::now: r = "ctx.now"; break;
    case reserved_root::self: r = "ctx.self"; break;
    case reserved_root::storage: r = "storage"; break;
    default: r = "c" + std::to_string(root); break;
    }
    if (p.empty()) return r;
    return r + "." + path_to_string(p);
}

cell_kind scalar_kind(type_ctor c) {
    switch (c) {
    case type_ctor::t_int: return cell_kind::ck_int;
    case type_ctor::t_nat: return cell_kind::ck_nat;
    case type_ctor::t_mutez: return cell_kind::ck_mutez;
    case type_ctor::t_timestamp: return cell_kind::ck_timestamp;
    case type_ctor::t_bool: return cell_kind::ck_bool;
    case type_ctor::t_string: return cell_kind::ck_string;
    case type_ctor::t_unit: return cell_kind::ck_unit;
    case type_ctor::t_address: return cell_kind::ck_address;
    case type_ctor::t_contract: return cell_kind::ck_address;
    case type_ctor::t_operation: return cell_kind::ck_operation;
    default: throw std::logic_error("scalar_kind: not a scalar type");
    }
}

bool is_split_map(const mtype_ptr& ty, const decompose_opts& opts) {
    return opts.sender_split && ty->ctor == type_ctor::t_map &&
           ty->args[0]->ctor == type_ctor::t_address &&
           ty->args[1]->ctor == type_ctor::t_mutez;
}

namespace {

void walk(const mtype_ptr& ty, const decompose_opts& opts, path& prefix,
          std::vector<leaf>& out) {
    auto emit = [&](step s, cell_kind k) {
        path p = prefix;
        p.push_back(s);
        out.push_back({std::move(p), k});
    };
    auto recurse = [&](step s, const mtype_ptr& t) {
        prefix.push_back(s);
        walk(t, opts, prefix, out);
        prefix.pop_back();
    };
    switch (ty->ctor) {
    case type_ctor::t_pair:
        recurse(step::fst, ty->args[0]);
        recurse(step::snd, ty->args[1]);
        return;
    case type_ctor::t_option:
        emit(step::option_tag, cell_kind::ck_tag);
        recurse(step::some_content, ty->args[0]);
        return;
    case type_ctor::t_or:
        emit(step::union_tag, cell_kind::ck_tag);
        recurse(step::left_content, ty->args[0]);
        recurse(step::right_content, ty->args[1]);
        return;
    case type_ctor::t_list:
        if (ty->args[0]->ctor == type_ctor::t_operation) {
            emit(step::opslist_elems, cell_kind::ck_operation);
            emit(step::opslist_len, cell_kind::ck_len);
        } else {
            recurse(step::list_elems, ty->args[0]);
            emit(step::list_len, cell_kind::ck_len);
        }
        return;
    case type_ctor::t_set:
        recurse(step::set_elems, ty->args[0]);
        emit(step::set_card, cell_kind::ck_card);
        return;
    case type_ctor::t_map:
        if (is_split_map(ty, opts)) {
            emit(step::map_sender_val, cell_kind::ck_mutez);
            emit(step::map_nonsender_val, cell_kind::ck_mutez);
        } else {
            recurse(step::map_keys, ty->args[0]);
            recurse(step::map_vals, ty->args[1]);
        }
        emit(step::map_card, cell_kind::ck_card);
        return;
    default:
        out.push_back({prefix, scalar_kind(ty->ctor)});
        return;
    }
}

} // namespace

std::vector<leaf> decompose(const mtype_ptr& ty, const decompose_opts& opts) {
    std::vector<leaf> out;
    path prefix;
    walk(ty, opts, prefix, out);
    return out;
}

mtype_ptr type_at(const mtype_ptr& ty, const path& p) {
    mtype_ptr cur = ty;
    for (step s : p) {
        if (!cur) return nullptr;
        switch (s) {
        case step::fst: cur = cur->args[0]; break;
        case step::snd: cur = cur->args[1]; break;
        case step::some_content: cur = cur->args[0]; break;
        case step::left_content: cur = cur->args[0]; break;
        case step::right_content: cur = cur->args[1]; break;
        case step::list_elems: cur = cur->args[0]; break;
        case step::set_elems: cur = cur->args[0]; break;
        case step::map_keys: cur = cur->args[0]; break;
        case step::map_vals: cur = cur->args[1]; break;
        case step::map_sender_val:
        case step::map_nonsender_val: cur = cur->args[1]; break;
        case step::opslist_elems: cur = ty_operation(); break;
        case step::option_tag:
        case step::union_tag:
        case step::list_len:
        case step::set_card:
        case step::map_card:
        case step::opslist_len: return nullptr;
        }
    }
    return cur;
}

} // namespace michelstat
