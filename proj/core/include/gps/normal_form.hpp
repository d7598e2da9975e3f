#pragma once

#include "gps/field.hpp"

namespace gps {

/// Degree-by-degree normalization of a non-resonant saddle. All monomials of
/// total degree 2..eliminated_through are removed from the diagonalized,
/// time-rescaled field (every one is non-resonant for irrational lambda), so
/// in the new coordinates du/dt = u and dv/dt = -v(lambda + ...) hold up to
/// that degree; the factorable part of the remaining tail is reported as
/// A_N with v' = -v(lambda + u^N v^N A_N(u, v, mu)).
struct NormalFormResult {
    int N = 1;
    int eliminated_through = 0; // >= 2N+1
    Value lambda;               // -lambda2/lambda1

    // linear frame: diag coordinates = D * original, original = Dinv * diag
    std::array<double, 4> diag_from_orig{1, 0, 0, 1};
    std::array<double, 4> orig_from_diag{1, 0, 0, 1};

    ParamMap2 change;         // (u, v) = Phi_N(x, y; mu), near-identity, diag coords
    ParamMap2 inverse_change; // (x, y) = Phi_N^{-1}(u, v; mu)
    ParamMap2 normalized;     // push-forward of the rescaled field, to working order
    ParamSeries2 residual;    // A_N(u, v; mu); identically 0 at the origin for mu = 0

    double divisor_floor = 0; // smallest |divisor| met during elimination
};

struct NormalFormOptions {
    int working_order = -1;      // default max(2N+1, ...)
    double divisor_minimum = 1e-9; // SmallDivisorError below this
};

NormalFormResult normal_form(const SaddleSpec& saddle, int N,
                             const NormalFormOptions& options = {});

} // namespace gps
