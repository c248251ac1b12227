#pragma once

/**
 * @file rational.hpp
 * @brief The characteristic-zero coefficient domain: exact rationals.
 */

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace linq {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct Rationals {
    using element = Rational;

    Rational zero() const { return Rational(0); }
    Rational one() const { return Rational(1); }
    Rational add(const Rational& a, const Rational& b) const { return a + b; }
    Rational sub(const Rational& a, const Rational& b) const { return a - b; }
    Rational mul(const Rational& a, const Rational& b) const { return a * b; }
    Rational neg(const Rational& a) const { return -a; }
    Rational inv(const Rational& a) const {
        if (a == 0) fail(ErrorKind::DivisionByZero, "division by zero in Q");
        return Rational(1) / a;
    }
    Rational from_int(long long v) const { return Rational(v); }
    bool is_zero(const Rational& a) const { return a == 0; }
    bool is_one(const Rational& a) const { return a == 1; }
    bool eq(const Rational& a, const Rational& b) const { return a == b; }

    friend bool operator==(const Rationals&, const Rationals&) noexcept { return true; }
};

/// "3", "-3", "1/2": numerator/denominator in lowest terms.
inline std::string to_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

}  // namespace linq
