/*******************************************************************************
 * Equality classes: a partition of (some) cells into groups known to hold
 * equal values. Join of two partitions is their intersection: cells stay
 * grouped only if grouped on both sides. Absence from every class carries
 * no information ("unknown"), so eq_same answering false never means
 * "definitely different".
 ******************************************************************************/

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "michelstat/cells.hpp"

namespace michelstat {

class eq_classes {
  public:
    // Unions the classes of x and y (singleton classes are created on demand).
    void merge(const cell_var& x, const cell_var& y);
    // Removes x from its class; classes of one member are dropped.
    void forget(const cell_var& x);
    // Definite equality; false = unknown.
    bool same(const cell_var& x, const cell_var& y) const;

    void rename(const cell_var& from, const cell_var& to);
    void rename_root(uint64_t from, uint64_t to);
    void forget_root(uint64_t root);

    // All cells grouped with x (x excluded); empty when x is in no class.
    std::vector<cell_var> classmates(const cell_var& x) const;

    // Partition intersection.
    eq_classes join(const eq_classes& o) const;
    bool leq(const eq_classes& o) const; // finer-or-equal partition on o's domain
    bool operator==(const eq_classes& o) const;

    void collect_members(std::set<cell_var>& out) const;

    std::map<uint32_t, std::vector<cell_var>> classes() const;

  private:
    std::map<cell_var, uint32_t> cls_;
    uint32_t next_ = 1;
    void drop_singletons(uint32_t id);
};

} // namespace michelstat
