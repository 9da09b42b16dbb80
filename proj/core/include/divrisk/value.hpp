#pragma once

#include "divrisk/rational.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace divrisk {

/// Numeric mode of a computation: exact rationals, or doubles with a merge/compare tolerance.
struct NumericMode {
    enum Kind { ExactRational, FloatWithTolerance } kind = ExactRational;
    double epsilon = 1e-9;

    static NumericMode exact() { return {ExactRational, 0.0}; }
    static NumericMode floating(double eps = 1e-9) {
        if (!(eps > 0)) throw std::domain_error("float mode requires epsilon > 0");
        return {FloatWithTolerance, eps};
    }
    bool is_exact() const { return kind == ExactRational; }
};

/// A scalar that stays an exact rational as long as every operation applied to it
/// is exact, and degrades to its double shadow once an irrational step occurs
/// (exp, non-perfect fractional power). Comparisons are exact whenever both
/// operands still are.
class Value {
public:
    Value() : approx_(0) { exact_ = Rat(0); }
    Value(const Rat& r) : exact_(r), approx_(to_double(r)) {}
    explicit Value(double d) : approx_(d) {}
    static Value from_double(double d) { return Value(d); }

    bool is_exact() const { return exact_.has_value(); }
    const Rat& exact() const { return *exact_; }
    double approx() const { return approx_; }

    Value operator-() const {
        if (exact_) return Value(Rat(-*exact_));
        return Value::from_double(-approx_);
    }

    friend Value operator+(const Value& a, const Value& b) {
        if (a.exact_ && b.exact_) return Value(Rat(*a.exact_ + *b.exact_));
        return Value::from_double(a.approx_ + b.approx_);
    }
    friend Value operator-(const Value& a, const Value& b) { return a + (-b); }
    friend Value operator*(const Value& a, const Value& b) {
        if (a.exact_ && b.exact_) return Value(Rat(*a.exact_ * *b.exact_));
        return Value::from_double(a.approx_ * b.approx_);
    }
    friend Value operator/(const Value& a, const Value& b) {
        if (b.is_zero()) throw std::domain_error("division by zero");
        if (a.exact_ && b.exact_) return Value(Rat(*a.exact_ / *b.exact_));
        return Value::from_double(a.approx_ / b.approx_);
    }

    Value abs() const {
        if (exact_) return Value(Rat(*exact_ < 0 ? -*exact_ : *exact_));
        return Value::from_double(std::fabs(approx_));
    }

    bool is_zero() const { return exact_ ? (*exact_ == 0) : approx_ == 0.0; }

    /// x^(p/q). Stays exact for integer exponents and perfect roots. Negative
    /// base with a fractional exponent is a domain error.
    Value pow(const Rat& exponent) const {
        if (is_integer(exponent)) {
            long long e = numerator(exponent).convert_to<long long>();
            if (exact_) {
                if (*exact_ == 0 && e < 0) throw std::domain_error("zero to a negative power");
                return Value(rat_pow(*exact_, e));
            }
            if (approx_ == 0.0 && e < 0) throw std::domain_error("zero to a negative power");
            return Value::from_double(std::pow(approx_, static_cast<double>(e)));
        }
        // fractional exponent
        if ((exact_ && *exact_ < 0) || (!exact_ && approx_ < 0))
            throw std::domain_error("negative base with fractional exponent");
        if (exact_) {
            long long p = numerator(exponent).convert_to<long long>();
            unsigned long long q = denominator(exponent).convert_to<unsigned long long>();
            Rat powed = rat_pow(*exact_, p < 0 ? -p : p);
            if (p < 0) {
                if (powed == 0) throw std::domain_error("zero to a negative power");
                powed = Rat(1) / powed;
            }
            if (auto root = exact_nth_root(powed, static_cast<unsigned>(q))) return Value(*root);
            return Value::from_double(pow_double(to_double(powed), Rat(1, q)));
        }
        return Value::from_double(pow_double(approx_, exponent));
    }

    Value exp_times(const Rat& a_coeff) const {  // e^(a*x)
        double ax = to_double(a_coeff) * approx_;
        return Value::from_double(std::exp(ax));
    }

    /// Three-way comparison: exact when both sides are exact, double otherwise.
    friend int compare(const Value& a, const Value& b) {
        if (a.exact_ && b.exact_) {
            if (*a.exact_ < *b.exact_) return -1;
            if (*a.exact_ > *b.exact_) return 1;
            return 0;
        }
        if (a.approx_ < b.approx_) return -1;
        if (a.approx_ > b.approx_) return 1;
        return 0;
    }
    /// Tolerance-aware comparison used in float mode: |a-b| <= eps counts as equal.
    friend int compare_eps(const Value& a, const Value& b, double eps) {
        if (std::fabs(a.approx_ - b.approx_) <= eps) return 0;
        return a.approx_ < b.approx_ ? -1 : 1;
    }
    friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
    friend bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }
    friend bool operator<=(const Value& a, const Value& b) { return compare(a, b) <= 0; }
    friend bool operator>(const Value& a, const Value& b) { return compare(a, b) > 0; }
    friend bool operator>=(const Value& a, const Value& b) { return compare(a, b) >= 0; }

    /// "p/q" when exact, shortest round-trip decimal otherwise.
    std::string str() const {
        if (exact_) return rational_to_string(*exact_);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", approx_);
        return buf;
    }

private:
    // Monotone fractional power: iterated correctly-rounded sqrt for q = 2^k,
    // std::pow otherwise.
    static double pow_double(double base, const Rat& exponent) {
        Rat e = exponent;
        long long p = numerator(e).convert_to<long long>();
        unsigned long long q = denominator(e).convert_to<unsigned long long>();
        bool inv = p < 0;
        if (inv) p = -p;
        double v = base;
        unsigned long long qq = q;
        while (qq % 2 == 0 && qq > 1) {
            v = std::sqrt(v);
            qq /= 2;
        }
        if (qq != 1) v = std::pow(v, 1.0 / static_cast<double>(qq));
        double r = std::pow(v, static_cast<double>(p));
        return inv ? 1.0 / r : r;
    }

    std::optional<Rat> exact_;
    double approx_;
};

/// Traits bridging the two numeric modes; S is Rat (exact) or double (float mode).
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
    static constexpr bool exact = true;
    static Rat zero() { return Rat(0); }
    static Rat one() { return Rat(1); }
    static Rat from_int(long long n) { return Rat(n); }
    static Rat from_rat(const Rat& r) { return r; }
    static double to_dbl(const Rat& r) { return to_double(r); }
    static bool close(const Rat& a, const Rat& b, double) { return a == b; }
    static bool leq(const Rat& a, const Rat& b, double) { return a <= b; }
    static std::string str(const Rat& r) { return rational_to_string(r); }
    static Rat abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }
    static Value value(const Rat& r) { return Value(r); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_int(long long n) { return static_cast<double>(n); }
    static double from_rat(const Rat& r) { return to_double(r); }
    static double to_dbl(double d) { return d; }
    static bool close(double a, double b, double eps) { return std::fabs(a - b) <= eps; }
    static bool leq(double a, double b, double eps) { return a <= b + eps; }
    static std::string str(double d) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", d);
        return buf;
    }
    static double abs(double d) { return std::fabs(d); }
    static Value value(double d) { return Value::from_double(d); }
};

}  // namespace divrisk
