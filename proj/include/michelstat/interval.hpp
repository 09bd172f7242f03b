/*******************************************************************************
 * The interval abstract domain over arbitrary-precision integers.
 *
 * A bound is either a finite integer or one of the two infinities; an
 * interval is a pair of bounds (lo <= hi) or Bottom. All integer kinds of
 * the analyzed language (int, nat, mutez, timestamp, bool and the internal
 * tag/length/cardinality cells) share this domain; each kind contributes a
 * legal range that results are met with, and the checked mutez/shift
 * operators report the alarm conditions alongside the surviving range.
 ******************************************************************************/

#pragma once

#include <string>

#include "michelstat/bigint.hpp"

namespace michelstat {

class bound {
  public:
    bound(big_int n) : finite_(true), n_(std::move(n)) {}
    bound(long n) : bound(big_int(n)) {}
    bound(int n) : bound(big_int(n)) {}

    static bound plus_inf() { return bound(false, 1); }
    static bound minus_inf() { return bound(false, -1); }

    bool is_finite() const { return finite_; }
    bool is_plus_inf() const { return !finite_ && sign_ > 0; }
    bool is_minus_inf() const { return !finite_ && sign_ < 0; }
    const big_int& number() const { return n_; }

    bool operator==(const bound& o) const {
        if (finite_ != o.finite_) return false;
        return finite_ ? n_ == o.n_ : sign_ == o.sign_;
    }
    bool operator!=(const bound& o) const { return !(*this == o); }
    bool operator<(const bound& o) const {
        if (!finite_) return sign_ < 0 && !o.is_minus_inf();
        if (!o.finite_) return o.sign_ > 0;
        return n_ < o.n_;
    }
    bool operator<=(const bound& o) const { return *this < o || *this == o; }
    bool operator>(const bound& o) const { return o < *this; }
    bool operator>=(const bound& o) const { return o <= *this; }

    // Addition of opposite infinities is not meaningful; callers never form it.
    bound operator+(const bound& o) const {
        if (!finite_) return *this;
        if (!o.finite_) return o;
        return bound(n_ + o.n_);
    }
    bound operator-(const bound& o) const {
        if (!finite_) return *this;
        if (!o.finite_) return bound(false, -o.sign_);
        return bound(n_ - o.n_);
    }
    bound operator*(const bound& o) const {
        if (is_zero() || o.is_zero()) return bound(0);
        int s = sign() * o.sign();
        if (!finite_ || !o.finite_) return bound(false, s);
        return bound(n_ * o.n_);
    }
    bound operator-() const {
        return finite_ ? bound(-n_) : bound(false, -sign_);
    }

    bool is_zero() const { return finite_ && n_ == 0; }
    int sign() const {
        if (!finite_) return sign_;
        return n_ < 0 ? -1 : n_ > 0 ? 1 : 0;
    }

    static const bound& min(const bound& a, const bound& b) { return a <= b ? a : b; }
    static const bound& max(const bound& a, const bound& b) { return a >= b ? a : b; }

    std::string to_string() const {
        if (is_plus_inf()) return "+oo";
        if (is_minus_inf()) return "-oo";
        return n_.str();
    }

  private:
    bound(bool, int sign) : finite_(false), sign_(sign) {}
    bool finite_;
    int sign_ = 0;
    big_int n_;
};

class interval {
  public:
    // Bottom is canonically [1, 0].
    static interval bottom() { return interval(bound(1), bound(0), tag_bottom{}); }
    static interval top() { return interval(bound::minus_inf(), bound::plus_inf()); }

    interval(bound lo, bound hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (hi_ < lo_) *this = bottom();
    }
    explicit interval(big_int n) : lo_(n), hi_(std::move(n)) {}
    static interval singleton(big_int n) { return interval(std::move(n)); }

    bool is_bottom() const { return hi_ < lo_; }
    bool is_top() const { return lo_.is_minus_inf() && hi_.is_plus_inf(); }
    const bound& lb() const { return lo_; }
    const bound& ub() const { return hi_; }

    bool is_singleton() const { return !is_bottom() && lo_ == hi_; }
    bool contains(const big_int& n) const {
        return !is_bottom() && bound(n) >= lo_ && bound(n) <= hi_;
    }

    bool leq(const interval& o) const {
        if (is_bottom()) return true;
        if (o.is_bottom()) return false;
        return o.lo_ <= lo_ && hi_ <= o.hi_;
    }
    bool operator==(const interval& o) const {
        if (is_bottom() || o.is_bottom()) return is_bottom() == o.is_bottom();
        return lo_ == o.lo_ && hi_ == o.hi_;
    }
    bool operator!=(const interval& o) const { return !(*this == o); }

    interval operator|(const interval& o) const { // join
        if (is_bottom()) return o;
        if (o.is_bottom()) return *this;
        return interval(bound::min(lo_, o.lo_), bound::max(hi_, o.hi_));
    }
    interval operator&(const interval& o) const { // meet
        if (is_bottom() || o.is_bottom()) return bottom();
        return interval(bound::max(lo_, o.lo_), bound::min(hi_, o.hi_));
    }
    // Widening: an unstable bound jumps to the corresponding infinity.
    interval widen(const interval& next) const {
        if (is_bottom()) return next;
        if (next.is_bottom()) return *this;
        bound lo = next.lo_ < lo_ ? bound::minus_inf() : lo_;
        bound hi = next.hi_ > hi_ ? bound::plus_inf() : hi_;
        return interval(std::move(lo), std::move(hi));
    }
    // Narrowing: an infinite bound recovers the other side's bound.
    interval narrow(const interval& o) const {
        if (is_bottom() || o.is_bottom()) return bottom();
        return interval(lo_.is_minus_inf() ? o.lo_ : lo_, hi_.is_plus_inf() ? o.hi_ : hi_);
    }

    interval operator+(const interval& o) const {
        if (is_bottom() || o.is_bottom()) return bottom();
        return interval(lo_ + o.lo_, hi_ + o.hi_);
    }
    interval operator-(const interval& o) const {
        if (is_bottom() || o.is_bottom()) return bottom();
        return interval(lo_ - o.hi_, hi_ - o.lo_);
    }
    interval operator*(const interval& o) const {
        if (is_bottom() || o.is_bottom()) return bottom();
        bound p1 = lo_ * o.lo_, p2 = lo_ * o.hi_, p3 = hi_ * o.lo_, p4 = hi_ * o.hi_;
        bound lo = bound::min(bound::min(p1, p2), bound::min(p3, p4));
        bound hi = bound::max(bound::max(p1, p2), bound::max(p3, p4));
        return interval(std::move(lo), std::move(hi));
    }
    interval operator-() const {
        if (is_bottom()) return bottom();
        return interval(-hi_, -lo_);
    }

    std::string to_string() const {
        if (is_bottom()) return "_|_";
        std::string lo = lo_.is_minus_inf() ? "(-oo" : "[" + lo_.to_string();
        std::string hi = hi_.is_plus_inf() ? "+oo)" : hi_.to_string() + "]";
        return lo + ", " + hi;
    }

  private:
    struct tag_bottom {};
    interval(bound lo, bound hi, tag_bottom) : lo_(std::move(lo)), hi_(std::move(hi)) {}
    bound lo_, hi_;
};

// Scalar leaf kinds carried by abstract cells. Numeric kinds map to intervals;
// address and string cells are handled by their own domains; unit and
// operation cells carry no value abstraction.
enum class cell_kind {
    ck_int,
    ck_nat,
    ck_mutez,
    ck_timestamp,
    ck_bool,
    ck_tag,  // option/union selector, 0 or 1
    ck_len,  // list length
    ck_card, // set/map cardinality
    ck_address,
    ck_string,
    ck_unit,
    ck_operation,
};

bool is_numeric_kind(cell_kind k);

// The legal value range of a kind; results of transfer functions are met
// with this.
interval kind_range(cell_kind k);

enum class itv_op { add, sub, mul, ediv, lsl, lsr, band, bor, bxor };

struct itv_binop_result {
    interval result = interval::bottom();
    bool mutez_overflow = false; // covers both overflow and underflow
    bool shift_overflow = false;
};

// Transfer function for binary arithmetic. `kind` is the result kind;
// mutez add/sub/mul carry the 63-bit range check, lsl/lsr the shift <= 256
// check. The result over-approximates all non-failing executions and is
// Bottom when every concrete pair fails.
itv_binop_result itv_binop(itv_op op, cell_kind kind, const interval& l, const interval& r);

// EDIV: quotient/remainder pair plus whether the None branch (divisor = 0)
// is reachable and whether a non-zero divisor exists at all.
struct itv_ediv_result {
    interval quot;
    interval rem;
    bool none_possible = false;
    bool some_possible = false;
};
itv_ediv_result itv_ediv(const interval& l, const interval& r);

// COMPARE: the set of possible comparison outcomes as a sub-interval of [-1,1].
interval itv_compare(const interval& l, const interval& r);

enum class cmp_rel { eq, ne, lt, le, gt, ge };

cmp_rel negate_rel(cmp_rel r);
cmp_rel swap_rel(cmp_rel r); // relation seen from the right operand

// Refines both operands of "x rel y"; sound: keeps every concrete pair
// satisfying the relation.
struct itv_refined {
    interval x;
    interval y;
};
itv_refined itv_assume(cmp_rel rel, const interval& x, const interval& y);

} // namespace michelstat
