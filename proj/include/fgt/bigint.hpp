#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>

#include "fgt/error.hpp"

namespace fgt {

// Exact integer/rational backing for all counting results.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt big_pow(BigInt base, uint64_t exp) {
    BigInt r = 1;
    while (exp) {
        if (exp & 1) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

// C(n, k) exact.
inline BigInt big_binomial(int64_t n, int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (int64_t i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;  // exact: r is C(n-k+i, i) after each step
    }
    return r;
}

// Natural log of a positive BigInt. Splits off the top bits so the
// double conversion never overflows; relative error ~1e-16.
inline double big_log(const BigInt& x) {
    if (x <= 0) throw InvalidParams("big_log: argument must be positive");
    const unsigned bits = boost::multiprecision::msb(x);
    if (bits <= 900) return std::log(x.convert_to<double>());
    const unsigned shift = bits - 64;
    const BigInt top = x >> shift;
    return std::log(top.convert_to<double>()) + double(shift) * std::log(2.0);
}

inline double rat_to_double(const BigRat& r) {
    return r.convert_to<double>();
}

}  // namespace fgt
