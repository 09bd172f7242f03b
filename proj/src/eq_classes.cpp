#include "michelstat/eq_classes.hpp"

#include <algorithm>

namespace michelstat {

void eq_classes::merge(const cell_var& x, const cell_var& y) {
    if (x == y) return;
    auto ix = cls_.find(x);
    auto iy = cls_.find(y);
    if (ix == cls_.end() && iy == cls_.end()) {
        uint32_t id = next_++;
        cls_[x] = id;
        cls_[y] = id;
        return;
    }
    if (ix == cls_.end()) {
        cls_[x] = iy->second;
        return;
    }
    if (iy == cls_.end()) {
        cls_[y] = ix->second;
        return;
    }
    if (ix->second == iy->second) return;
    uint32_t keep = ix->second, gone = iy->second;
    for (auto& [v, id] : cls_)
        if (id == gone) id = keep;
}

void eq_classes::drop_singletons(uint32_t id) {
    size_t n = 0;
    for (const auto& [v, i] : cls_)
        if (i == id) ++n;
    if (n > 1) return;
    for (auto it = cls_.begin(); it != cls_.end();) {
        if (it->second == id) it = cls_.erase(it);
        else ++it;
    }
}

void eq_classes::forget(const cell_var& x) {
    auto it = cls_.find(x);
    if (it == cls_.end()) return;
    uint32_t id = it->second;
    cls_.erase(it);
    drop_singletons(id);
}

bool eq_classes::same(const cell_var& x, const cell_var& y) const {
    if (x == y) return true;
    auto ix = cls_.find(x);
    if (ix == cls_.end()) return false;
    auto iy = cls_.find(y);
    return iy != cls_.end() && ix->second == iy->second;
}

void eq_classes::rename(const cell_var& from, const cell_var& to) {
    if (from == to) return;
    forget(to);
    auto it = cls_.find(from);
    if (it == cls_.end()) return;
    uint32_t id = it->second;
    cls_.erase(it);
    cls_[to] = id;
}

void eq_classes::rename_root(uint64_t from, uint64_t to) {
    if (from == to) return;
    std::map<cell_var, uint32_t> out;
    for (const auto& [v, id] : cls_)
        out[v.root == from ? cell_var{to, v.p} : v] = id;
    cls_ = std::move(out);
}

void eq_classes::forget_root(uint64_t root) {
    std::set<uint32_t> touched;
    for (auto it = cls_.begin(); it != cls_.end();) {
        if (it->first.root == root) {
            touched.insert(it->second);
            it = cls_.erase(it);
        } else {
            ++it;
        }
    }
    for (uint32_t id : touched) drop_singletons(id);
}

std::vector<cell_var> eq_classes::classmates(const cell_var& x) const {
    auto ix = cls_.find(x);
    if (ix == cls_.end()) return {};
    std::vector<cell_var> out;
    for (const auto& [v, id] : cls_)
        if (id == ix->second && !(v == x)) out.push_back(v);
    return out;
}

eq_classes eq_classes::join(const eq_classes& o) const {
    eq_classes out;
    // classes of the result = nonempty pairwise intersections
    std::map<std::pair<uint32_t, uint32_t>, uint32_t> pair_ids;
    for (const auto& [v, id] : cls_) {
        auto io = o.cls_.find(v);
        if (io == o.cls_.end()) continue;
        auto key = std::make_pair(id, io->second);
        auto it = pair_ids.find(key);
        if (it == pair_ids.end()) it = pair_ids.emplace(key, out.next_++).first;
        out.cls_[v] = it->second;
    }
    // drop classes that ended up with a single member
    std::map<uint32_t, size_t> count;
    for (const auto& [v, id] : out.cls_) ++count[id];
    for (auto it = out.cls_.begin(); it != out.cls_.end();) {
        if (count[it->second] < 2) it = out.cls_.erase(it);
        else ++it;
    }
    return out;
}

bool eq_classes::leq(const eq_classes& o) const {
    // every equality known in o must also be known here
    for (const auto& [v, id] : o.cls_) {
        for (const auto& [w, id2] : o.cls_) {
            if (id == id2 && v < w && !same(v, w)) return false;
        }
    }
    return true;
}

bool eq_classes::operator==(const eq_classes& o) const {
    return leq(o) && o.leq(*this);
}

void eq_classes::collect_members(std::set<cell_var>& out) const {
    for (const auto& [v, id] : cls_) out.insert(v);
}

std::map<uint32_t, std::vector<cell_var>> eq_classes::classes() const {
    std::map<uint32_t, std::vector<cell_var>> out;
    for (const auto& [v, id] : cls_) out[id].push_back(v);
    return out;
}

} // namespace michelstat
