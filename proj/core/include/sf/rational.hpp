#pragma once

#include <cassert>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sf/util.hpp"

namespace sf {

/// Exact positive/non-negative rational on 64-bit parts. All comparisons go
/// through 128-bit cross multiplication; no division, no rounding anywhere.
struct Rat {
    i64 num{0};
    i64 den{1};  // always > 0, gcd(num, den) == 1

    constexpr Rat() = default;
    Rat(i64 n, i64 d) {
        if (d == 0) throw std::invalid_argument("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i64 g = std::gcd(n < 0 ? -n : n, d);
        if (g == 0) g = 1;
        num = n / g;
        den = d / g;
    }

    static Rat from_int(i64 v) { return Rat(v, 1); }

    bool positive() const { return num > 0; }
    bool zero() const { return num == 0; }

    std::string str() const {
        return std::to_string(num) + "/" + std::to_string(den);
    }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return (i128)a.num * b.den < (i128)b.num * a.den;
    }
    friend bool operator<=(const Rat& a, const Rat& b) {
        return (i128)a.num * b.den <= (i128)b.num * a.den;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }
};

/// a/b compared against integer x, exactly.
inline bool rat_le_int(const Rat& r, i64 x) { return (i128)r.num <= (i128)x * r.den; }
inline bool rat_lt_int(const Rat& r, i64 x) { return (i128)r.num < (i128)x * r.den; }

/// Wide rational for intermediate threshold values (products of a Rat with
/// weights and counters). Denominator always > 0. Never reduced; magnitudes
/// are asserted to stay well inside 128 bits under the documented input caps
/// (edge weights < 2^32, n < 2^20, eps parts < 2^31).
struct Q128 {
    i128 num{0};
    i128 den{1};

    Q128() = default;
    Q128(i128 n, i128 d) : num(n), den(d) { assert(d > 0); }

    static Q128 of(const Rat& r) { return Q128(r.num, r.den); }
    static Q128 of_int(i128 v) { return Q128(v, 1); }

    Q128 times_int(i128 f) const { return Q128(num * f, den); }
    Q128 div_int(i128 f) const {
        assert(f > 0);
        return Q128(num, den * f);
    }
    Q128 times(const Rat& r) const {
        Q128 q(num * r.num, den * r.den);
        if (q.den < 0) {
            q.num = -q.num;
            q.den = -q.den;
        }
        return q;
    }
};

inline bool q_lt(const Q128& a, const Q128& b) { return a.num * b.den < b.num * a.den; }
inline bool q_le(const Q128& a, const Q128& b) { return a.num * b.den <= b.num * a.den; }
inline bool int_le_q(i128 x, const Q128& q) { return x * q.den <= q.num; }
inline bool int_lt_q(i128 x, const Q128& q) { return x * q.den < q.num; }
inline bool q_le_int(const Q128& q, i128 x) { return q.num <= x * q.den; }
inline bool q_lt_int(const Q128& q, i128 x) { return q.num < x * q.den; }

/// Largest q with 2^q <= num/den; num/den must be >= 1.
inline int floor_log2_rat(i128 num, i128 den) {
    assert(num > 0 && den > 0 && num >= den);
    int q = 0;
    // num/den >= 2  <=>  num >= 2*den
    while (num >= 2 * den) {
        den *= 2;
        ++q;
    }
    return q;
}

}  // namespace sf
