#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "michelstat/interval.hpp"
#include "michelstat/types.hpp"

namespace michelstat {

// One step of a component path below a stack/storage/context root.
enum class step : uint8_t {
    fst,
    snd,
    some_content,
    left_content,
    right_content,
    list_elems,
    list_len,
    set_elems,
    set_card,
    map_keys,
    map_vals,
    map_card,
    map_sender_val,
    map_nonsender_val,
    option_tag,
    union_tag,
    opslist_elems,
    opslist_len,
};

const char* step_name(step s);

using path = std::vector<step>;

std::string path_to_string(const path& p);

// An abstract cell: a root object id plus a component path. Root ids come
// from a monotone per-analysis counter; a handful of low ids are reserved
// for the call context and the storage anchor.
struct cell_var {
    uint64_t root = 0;
    path p;

    auto operator<=>(const cell_var&) const = default;

    cell_var sub(step s) const {
        cell_var c{root, p};
        c.p.push_back(s);
        return c;
    }
    cell_var sub(const path& rest) const {
        cell_var c{root, p};
        c.p.insert(c.p.end(), rest.begin(), rest.end());
        return c;
    }
    std::string to_string() const;
};

namespace reserved_root {
inline constexpr uint64_t sender = 0;
inline constexpr uint64_t source = 1;
inline constexpr uint64_t amount = 2;
inline constexpr uint64_t balance = 3;
inline constexpr uint64_t now = 4;
inline constexpr uint64_t self = 5;
inline constexpr uint64_t storage = 8;
inline constexpr uint64_t first_free = 16;
} // namespace reserved_root

struct leaf {
    path p;
    cell_kind kind;
};

struct decompose_opts {
    // Split map(address, mutez) into a sender-side value and an
    // all-other-keys summary instead of a uniform value summary.
    bool sender_split = false;
};

cell_kind scalar_kind(type_ctor c);

// Enumerates every scalar leaf of a type, in a fixed deterministic order.
// Containers contribute their summary and length/cardinality leaves.
std::vector<leaf> decompose(const mtype_ptr& ty, const decompose_opts& opts = {});

// The type reached by following `p` from `ty`; steps that land on synthetic
// numeric cells (tags, lengths, cardinalities) return null.
mtype_ptr type_at(const mtype_ptr& ty, const path& p);

// True when the map type gets the sender-split treatment under `opts`.
bool is_split_map(const mtype_ptr& ty, const decompose_opts& opts);

} // namespace michelstat
