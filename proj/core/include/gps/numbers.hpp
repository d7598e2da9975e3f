#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <string>

#include "gps/errors.hpp"

namespace gps {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using BigFloat = boost::multiprecision::mpfr_float; // dynamic precision

/// Working precision of the high-precision float fallback. Default 200 bits;
/// exact (rational / quadratic) values are unaffected.
void set_float_precision_bits(unsigned bits);
unsigned float_precision_bits();

/// Collision tolerance 2^-100 used when ordering float-backed values.
const BigFloat& collision_tolerance();

enum class SignClass { negative, zero, positive, ambiguous };

/// A scalar in the value field of a generator basis: either exact
/// a + b*sqrt(disc) with rational a, b (disc = 1 means plain rational), or a
/// high-precision float. Arithmetic stays exact as long as all operands lie
/// in one quadratic field; mixing fields degrades to float.
class Value {
public:
    Value() : exact_(true), disc_(1), a_(0), b_(0) {}

    static Value rational(Rational a);
    static Value integer(long n) { return rational(Rational(n)); }
    static Value quadratic(Rational a, Rational b, const BigInt& disc);
    static Value approx(BigFloat f);
    /// sqrt of a nonnegative rational, exact (squarefree kernel extracted).
    static Value sqrt_rational(const Rational& r);

    bool is_exact() const { return exact_; }
    bool is_rational() const { return exact_ && (disc_ == 1 || b_ == 0); }
    /// Rational part / sqrt coefficient of an exact value.
    const Rational& rat_part() const { return a_; }
    const Rational& quad_part() const { return b_; }
    const BigInt& discriminant() const { return disc_; }
    /// Exact rational content; throws DomainError unless is_rational().
    Rational as_rational() const;

    Value operator+(const Value& o) const;
    Value operator-(const Value& o) const;
    Value operator*(const Value& o) const;
    Value operator-() const;
    Value& operator+=(const Value& o) { return *this = *this + o; }
    Value& operator-=(const Value& o) { return *this = *this - o; }
    /// Division by a nonzero rational.
    Value div_rational(const Rational& r) const;
    /// Multiplicative inverse (exact for quadratic values).
    Value inverse() const;
    Value scaled(long k) const; // k * value

    /// Exact sign for exact values; tolerance-classified sign otherwise.
    SignClass sign_class() const;
    /// Strict sign; throws AmbiguityError on an unresolvable float collision.
    int sign() const;

    bool identical(const Value& o) const; // structural equality
    bool operator==(const Value& o) const { return compare(o) == 0; }
    bool operator<(const Value& o) const { return compare(o) < 0; }
    bool operator<=(const Value& o) const { return compare(o) <= 0; }
    bool operator>(const Value& o) const { return compare(o) > 0; }
    bool operator>=(const Value& o) const { return compare(o) >= 0; }
    /// -1/0/+1 of *this - o; throws AmbiguityError when unresolvable.
    int compare(const Value& o) const;

    bool is_zero() const;
    double to_double() const;
    BigFloat to_float() const;
    std::string to_string() const;

private:
    bool exact_;
    BigInt disc_;  // squarefree, >= 1; meaningful when exact_
    Rational a_, b_;
    BigFloat f_;   // meaningful when !exact_
};

/// Parses a value expression: rationals ("3", "5/4", "1.25"), sqrt of a
/// rational, sums/differences/products/quotients thereof, and "~<decimal>"
/// for an approximate (float) literal. Example: "1/2 + 3*sqrt(2)".
Value parse_value(const std::string& text);

} // namespace gps
