#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gps/numbers.hpp"

namespace gps {

class GeneratorBasis;
using BasisPtr = std::shared_ptr<const GeneratorBasis>;

/// Fixed finite set of positive real generators of an additive exponent
/// monoid. Generator 0 is always 1. When every generator lies in a single
/// quadratic field Q(sqrt(D)) (or in Q), coefficient vectors are
/// canonicalized against the integer lattice of Q-linear relations so that
/// equal values have identical coefficients; otherwise values are compared
/// through high-precision floats with a collision tolerance.
class GeneratorBasis : public std::enable_shared_from_this<GeneratorBasis> {
public:
    static BasisPtr create(std::vector<Value> generators,
                           bool independence_assumed = true);
    /// The basis <1>.
    static BasisPtr trivial();

    size_t size() const { return gens_.size(); }
    const Value& generator(size_t i) const { return gens_.at(i); }
    bool independence_assumed() const { return independence_assumed_; }
    /// True when canonicalization and comparisons are exact.
    bool exact() const { return exact_; }

    Value value_of(const std::vector<long>& coeffs) const;
    std::vector<long> canonicalize(std::vector<long> coeffs) const;
    /// Integer-combination representation of v over the generators, if any.
    std::optional<std::vector<long>> express(const Value& v) const;

    bool equivalent(const GeneratorBasis& o) const; // structural equality
    std::string to_string() const;

    /// Smallest basis containing this one and all of the given values;
    /// returns *this when every value is already representable.
    static BasisPtr extended(const BasisPtr& base, const std::vector<Value>& values);

private:
    GeneratorBasis() = default;
    void build_lattice();

    std::vector<Value> gens_;
    bool independence_assumed_ = true;
    bool exact_ = true;
    BigInt disc_ = 1; // common discriminant of the quadratic generators

    // Exact mode: generators as integer vectors in scaled Q^2 coordinates
    // (rational part, sqrt coefficient), the column-HNF H of that 2 x k
    // matrix and the unimodular transform U with G*U = H.
    BigInt scale_ = 1;
    std::vector<std::array<BigInt, 2>> gen_vec_;   // per generator
    std::array<std::array<BigInt, 2>, 2> hnf_{};   // hnf_[row][pivot]
    std::vector<std::vector<BigInt>> u_;           // k x k, u_[col] = column
    int rank_ = 0;
};

/// An exponent: integer coefficient vector over a basis plus its cached
/// real value. Monoid elements have value >= 0; group_element() skips the
/// sign check for transient group arithmetic.
class MonoidExponent {
public:
    MonoidExponent() = default;

    static MonoidExponent make(BasisPtr basis, std::vector<long> coeffs);
    static MonoidExponent group_element(BasisPtr basis, std::vector<long> coeffs);
    static MonoidExponent zero(BasisPtr basis);
    /// Exponent with the given value; extends nothing, throws DomainError if
    /// the value is not in the lattice.
    static MonoidExponent from_value(BasisPtr basis, const Value& v);

    bool valid() const { return basis_ != nullptr; }
    const BasisPtr& basis() const { return basis_; }
    const std::vector<long>& coeffs() const { return coeffs_; }
    const Value& value() const { return value_; }
    bool is_zero() const;

    MonoidExponent operator+(const MonoidExponent& o) const;
    /// Componentwise subtraction; DomainError when the result leaves [0, oo).
    MonoidExponent operator-(const MonoidExponent& o) const;
    /// Order by value: -1, 0, +1. Equal iff identical coefficients;
    /// AmbiguityError on an unresolvable collision.
    int compare(const MonoidExponent& o) const;
    bool operator==(const MonoidExponent& o) const { return same_key(o); }
    bool operator<(const MonoidExponent& o) const { return compare(o) < 0; }
    bool operator<=(const MonoidExponent& o) const { return compare(o) <= 0; }
    /// Identical coefficient vectors (canonical form equality).
    bool same_key(const MonoidExponent& o) const;

    /// Same exponent expressed over an extended basis.
    MonoidExponent rebase(const BasisPtr& basis) const;

    std::string to_string() const;

private:
    BasisPtr basis_;
    std::vector<long> coeffs_;
    Value value_;
};

/// Parses either the positional coefficient form "a0*1 + a1*<gen> + ..." or
/// a bare value expression that must lie in the basis lattice.
MonoidExponent parse_exponent(const BasisPtr& basis, const std::string& text);

} // namespace gps
