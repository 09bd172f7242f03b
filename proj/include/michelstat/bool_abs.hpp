#pragma once

#include <string>

#include "michelstat/interval.hpp"

namespace michelstat {

// Four-point boolean lattice: bottom < {false, true} < top.
class bool_abs {
  public:
    enum point { bot = 0, bfalse = 1, btrue = 2, both = 3 };

    bool_abs() : p_(bot) {}
    bool_abs(point p) : p_(p) {}
    explicit bool_abs(bool b) : p_(b ? btrue : bfalse) {}

    static bool_abs top() { return bool_abs(both); }
    static bool_abs bottom() { return bool_abs(bot); }

    bool is_bottom() const { return p_ == bot; }
    bool is_top() const { return p_ == both; }
    bool is_true() const { return p_ == btrue; }
    bool is_false() const { return p_ == bfalse; }
    bool may_true() const { return p_ == btrue || p_ == both; }
    bool may_false() const { return p_ == bfalse || p_ == both; }

    bool leq(const bool_abs& o) const { return (p_ & ~o.p_) == 0; }
    bool operator==(const bool_abs& o) const { return p_ == o.p_; }

    bool_abs operator|(const bool_abs& o) const { return point(p_ | o.p_); }
    bool_abs operator&(const bool_abs& o) const { return point(p_ & o.p_); }
    bool_abs widen(const bool_abs& o) const { return *this | o; } // finite lattice

    bool_abs operator!() const {
        if (p_ == btrue) return bool_abs(bfalse);
        if (p_ == bfalse) return bool_abs(btrue);
        return *this;
    }

    // Bool cells are carried as [0,1] intervals in the valuation.
    static bool_abs from_interval(const interval& itv) {
        bool_abs out = bottom();
        if (itv.contains(0)) out = out | bool_abs(bfalse);
        if (itv.contains(1)) out = out | bool_abs(btrue);
        return out;
    }
    interval to_interval() const {
        interval out = interval::bottom();
        if (may_false()) out = out | interval(big_int(0));
        if (may_true()) out = out | interval(big_int(1));
        return out;
    }

    std::string to_string() const {
        switch (p_) {
        case bot: return "_|_";
        case bfalse: return "false";
        case btrue: return "true";
        default: return "T";
        }
    }

  private:
    point p_;
};

} // namespace michelstat
