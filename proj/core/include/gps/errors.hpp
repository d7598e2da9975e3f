#pragma once

#include <stdexcept>
#include <string>

namespace gps {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two operands live over different generator bases.
class BasisMismatchError : public Error {
public:
    using Error::Error;
};

/// Two series have incompatible variable shapes (m, n).
class ShapeMismatchError : public Error {
public:
    using Error::Error;
};

/// A value left its mathematical domain (negative exponent, zero constant
/// term where a unit is required, malformed substitution data, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Two distinct exponent coefficient vectors evaluate to values closer than
/// the collision tolerance; the basis cannot resolve the order.
class AmbiguityError : public Error {
public:
    using Error::Error;
};

/// Variable index out of range.
class IndexError : public Error {
public:
    using Error::Error;
};

/// A series is not regular in the last analytic variable within its cap.
class NotRegularError : public Error {
public:
    using Error::Error;
};

/// Jacobian of an implicit system is singular at the origin.
class SingularJacobianError : public Error {
public:
    using Error::Error;
};

/// Input claimed symmetric is not; message names a violating permutation.
class NotSymmetricError : public Error {
public:
    using Error::Error;
};

/// Linear part at the origin is not a hyperbolic saddle.
class NotHyperbolicError : public Error {
public:
    using Error::Error;
};

/// Eigenvalue ratio is within tolerance of a low-denominator rational.
class ResonanceError : public Error {
public:
    using Error::Error;
};

/// A normalization divisor fell below the configured floor.
class SmallDivisorError : public Error {
public:
    SmallDivisorError(const std::string& msg, int p, int q)
        : Error(msg), p(p), q(q) {}
    int p, q;
};

/// Numerical integration failed (chart escape, step underflow, ...).
class IntegrationError : public Error {
public:
    using Error::Error;
};

/// Consecutive polycycle sections do not share a chart.
class ChartMismatchError : public Error {
public:
    using Error::Error;
};

/// Text input could not be parsed; carries line/column when known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line = 0, int column = 0)
        : Error(msg), line(line), column(column) {}
    int line, column;
};

} // namespace gps
