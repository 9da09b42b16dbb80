#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace divrisk {

// expression templates off: these behave like plain value types in std::min,
// ternaries, and comparisons
using BigInt = boost::multiprecision::number<boost::multiprecision::backends::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

/// Parse "p/q", "p", or a decimal like "-1.25" into an exact rational.
inline Rat parse_rational(const std::string& text) {
    auto fail = [&] { throw std::invalid_argument("not a rational literal: '" + text + "'"); };
    std::string s = text;
    if (s.empty()) fail();
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (num.empty() || den.empty()) fail();
        try {
            BigInt n(num), d(den);
            return Rat(n, d);
        } catch (...) {
            fail();
        }
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        try {
            return Rat(BigInt(s));
        } catch (...) {
            fail();
        }
    }
    bool neg = s[0] == '-';
    if (neg || s[0] == '+') s = s.substr(1);
    dot = s.find('.');
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) fail();
    for (char c : ip + fp)
        if (!std::isdigit(static_cast<unsigned char>(c))) fail();
    BigInt scale = 1;
    for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
    BigInt whole = ip.empty() ? BigInt(0) : BigInt(ip);
    BigInt frac = fp.empty() ? BigInt(0) : BigInt(fp);
    Rat r(whole * scale + frac, scale);
    return neg ? Rat(-r) : r;
}

/// Canonical text form: "p" for integers, "p/q" otherwise.
inline std::string rational_to_string(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

/// Exact conversion of a finite double to a rational (every finite double is one).
inline Rat rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("cannot convert non-finite double to rational");
    if (x == 0.0) return Rat(0);
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, 0.5 <= |m| < 1
    // 53 bits of mantissa
    long long mant = static_cast<long long>(std::ldexp(m, 53));
    exp -= 53;
    Rat r(mant);
    if (exp > 0) {
        r *= Rat(BigInt(1) << exp);
    } else if (exp < 0) {
        r /= Rat(BigInt(1) << (-exp));
    }
    return r;
}

/// Exact integer n-th root if it exists.
inline std::optional<BigInt> exact_nth_root(const BigInt& v, unsigned n) {
    if (v < 0) return std::nullopt;
    if (v == 0 || v == 1 || n == 1) return v;
    // binary search
    BigInt lo = 0, hi = v + 1;
    while (lo + 1 < hi) {
        BigInt mid = (lo + hi) / 2;
        BigInt p = 1;
        bool over = false;
        for (unsigned i = 0; i < n; ++i) {
            p *= mid;
            if (p > v) { over = true; break; }
        }
        if (over) hi = mid; else lo = mid;
    }
    BigInt p = 1;
    for (unsigned i = 0; i < n; ++i) p *= lo;
    if (p == v) return lo;
    return std::nullopt;
}

/// Exact rational n-th root if it exists.
inline std::optional<Rat> exact_nth_root(const Rat& r, unsigned n) {
    if (r < 0) return std::nullopt;
    auto num = exact_nth_root(numerator(r), n);
    if (!num) return std::nullopt;
    auto den = exact_nth_root(denominator(r), n);
    if (!den) return std::nullopt;
    return Rat(*num, *den);
}

/// Exact integer power of a rational; e < 0 requires b != 0.
inline Rat rat_pow(const Rat& b, long long e) {
    if (e == 0) return Rat(1);
    if (b == 0 && e < 0) throw std::domain_error("zero to a negative power");
    Rat base = e < 0 ? Rat(1) / b : b;
    unsigned long long k = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
    Rat acc(1);
    while (k) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

}  // namespace divrisk
