#ifndef AXL_RATIONAL_HPP
#define AXL_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace axl {

/// Exact rational with canonical form (gcd-reduced, positive denominator).
/// The model layer computes all rates exactly; conversion to double happens
/// once, in the engine.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    friend Rational operator+(Rational a, Rational b) {
        return {a.num * b.den + b.num * a.den, a.den * b.den};
    }
    friend Rational operator-(Rational a, Rational b) {
        return {a.num * b.den - b.num * a.den, a.den * b.den};
    }
    friend Rational operator*(Rational a, Rational b) {
        return {a.num * b.num, a.den * b.den};
    }
    friend bool operator==(Rational a, Rational b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(Rational a, Rational b) { return !(a == b); }
    friend bool operator<(Rational a, Rational b) {
        return a.num * b.den < b.num * a.den;
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

} // namespace axl

#endif
