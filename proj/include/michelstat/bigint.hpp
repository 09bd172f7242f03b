#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace michelstat {

// Arbitrary-precision integer used for int/nat/timestamp values and for
// interval bounds. mutez values are range-checked against [0, 2^63-1].
using big_int = boost::multiprecision::cpp_int;

inline const big_int& mutez_max() {
    static const big_int m = (big_int(1) << 63) - 1;
    return m;
}

// Euclidean division: 0 <= rem < |d|.
inline void ediv_euclid(const big_int& n, const big_int& d, big_int& quot, big_int& rem) {
    quot = n / d;
    rem = n % d;
    if (rem < 0) {
        if (d > 0) {
            quot -= 1;
            rem += d;
        } else {
            quot += 1;
            rem -= d;
        }
    }
}

} // namespace michelstat
