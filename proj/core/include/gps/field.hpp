#pragma once

#include <array>
#include <optional>

#include "gps/monoid.hpp"
#include "gps/mu_poly.hpp"

namespace gps {

/// Planar analytic vector field (dx/dt, dy/dt) = (P, Q)(x, y; mu) with
/// coefficients polynomial in the parameters; the origin is singular for
/// every mu.
struct PlanarAnalyticField {
    int params = 0;
    ParamSeries2 P, Q;

    PlanarAnalyticField() = default;
    PlanarAnalyticField(int params, ParamSeries2 P, ParamSeries2 Q);

    std::array<double, 2> eval(double x, double y, std::span<const double> mu) const {
        return {P.eval(x, y, mu), Q.eval(x, y, mu)};
    }
    /// Entries (a, b; c, d) of the linear part, which must be
    /// parameter-independent.
    std::array<double, 4> linear_part() const;
};

/// Non-resonant hyperbolic saddle at the origin: eigenvalues
/// lambda1 > 0 > lambda2 of the (parameter-independent) linear part and the
/// ratio lambda = -lambda2/lambda1, declared exactly when possible.
struct SaddleSpec {
    PlanarAnalyticField field;
    Value lambda1, lambda2;
    Value lambda;         // -lambda2/lambda1 > 0, irrational
    BasisPtr basis;       // <1, lambda>
    double divisor_floor = 0; // min over p+q <= 2N_scan of |p - q lambda - 1|
    bool diagonal = false;    // linear part already diag(lambda1, lambda2)
    std::array<double, 4> lin{};
};

struct ResonanceCheck {
    double tolerance = 1e-9;
    int max_denominator = 50;
    int divisor_scan = 40; // degree range for the recorded divisor floor
};

/// Eigen-analysis of the linear part: throws NotHyperbolicError when the
/// origin is not a hyperbolic saddle and ResonanceError when the eigenvalue
/// ratio is within tolerance of a rational with small denominator.
/// Numerically computed eigenvalues give a float-backed lambda; declare the
/// eigenvalues through the overload below to keep exact arithmetic.
SaddleSpec analyze_saddle(const PlanarAnalyticField& field,
                          const ResonanceCheck& check = {});

/// Same checks, but with exactly declared eigenvalues (verified against the
/// numeric linear part within the check tolerance).
SaddleSpec analyze_saddle(const PlanarAnalyticField& field, const Value& lambda1,
                          const Value& lambda2, const ResonanceCheck& check = {});

/// The standard quadratic domain {0 < r < c exp(-C sqrt(|phi|))} restricted
/// to numeric containment tests.
struct QuadraticDomain {
    double c = 1, C = 1;
    bool contains(double r, double phi) const;
};

} // namespace gps
