#pragma once

// Exact rational arithmetic for points and arcs on the circle R/Z.
// All Bohr-set and arc-partition membership decisions go through this
// type so that half-open boundaries are decided exactly, never in
// floating point.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace forge {

struct Rat {
    std::int64_t num = 0;
    std::int64_t den = 1;  // always > 0, gcd(num, den) == 1

    Rat() = default;
    Rat(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::invalid_argument("Rat: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        num = (g != 0) ? n / g : 0;
        den = (g != 0) ? d / g : 1;
    }

    static Rat integer(std::int64_t n) { return Rat(n, 1); }

    // Representative in [0, 1), reducing num mod den.
    Rat mod1() const {
        std::int64_t r = num % den;
        if (r < 0) r += den;
        return Rat(r, den);
    }

    Rat operator+(const Rat& o) const {
        const __int128 n = static_cast<__int128>(num) * o.den +
                           static_cast<__int128>(o.num) * den;
        const __int128 d = static_cast<__int128>(den) * o.den;
        return reduce128(n, d);
    }
    Rat operator-(const Rat& o) const { return *this + Rat(-o.num, o.den); }
    Rat operator*(const Rat& o) const {
        const __int128 n = static_cast<__int128>(num) * o.num;
        const __int128 d = static_cast<__int128>(den) * o.den;
        return reduce128(n, d);
    }

    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rat& o) const { return !(*this == o); }
    bool operator<(const Rat& o) const {
        return static_cast<__int128>(num) * o.den <
               static_cast<__int128>(o.num) * den;
    }
    bool operator<=(const Rat& o) const { return !(o < *this); }
    bool operator>(const Rat& o) const { return o < *this; }
    bool operator>=(const Rat& o) const { return !(*this < o); }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

private:
    static Rat reduce128(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n, b = d;
        while (b) { const __int128 t = a % b; a = b; b = t; }
        if (a != 0) { n /= a; d /= a; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("Rat: reduced value exceeds 64 bits");
        Rat r;
        r.num = static_cast<std::int64_t>(n);
        r.den = static_cast<std::int64_t>(d == 0 ? 1 : d);
        return r;
    }
};

// floor(a / b) for positive rationals, exact.
inline std::int64_t floor_div(const Rat& a, const Rat& b) {
    if (b.num <= 0) throw std::invalid_argument("floor_div: divisor must be positive");
    const __int128 n = static_cast<__int128>(a.num) * b.den;
    const __int128 d = static_cast<__int128>(a.den) * b.num;
    __int128 q = n / d;
    if (n % d != 0 && ((n < 0) != (d < 0))) --q;
    return static_cast<std::int64_t>(q);
}

// Best rational approximation of x with denominator <= max_den
// (continued fractions). Used to pin real-valued arc widths to the
// exact grid before any membership decision is made.
inline Rat rat_from_real(double x, std::int64_t max_den = 1'000'000) {
    if (!(max_den >= 1)) throw std::invalid_argument("rat_from_real: bad max_den");
    const bool negative = x < 0;
    if (negative) x = -x;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = x;
    for (int iter = 0; iter < 64; ++iter) {
        const double fl = std::floor(frac);
        if (fl > 2e18) break;
        const std::int64_t a = static_cast<std::int64_t>(fl);
        const std::int64_t p2 = a * p1 + p0;
        const std::int64_t q2 = a * q1 + q0;
        if (q2 > max_den || q2 < 0) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        const double rem = frac - fl;
        if (rem < 1e-15) break;
        frac = 1.0 / rem;
    }
    if (q1 == 0) return Rat(negative ? -p0 : p0, q0);
    return Rat(negative ? -p1 : p1, q1);
}

}  // namespace forge
