#pragma once

#include "gps/normal_form.hpp"
#include "gps/series.hpp"
#include "gps/transition.hpp"

namespace gps {

/// Asymptotic expansion sum c_alpha t^alpha, alpha in <1, lambda>, of the
/// saddle transition map, with the order up to which coefficients are
/// certified stable in N.
struct DulacExpansion {
    GeneralizedSeries series; // one generalized variable t
    Value lambda;
    Value certified_order; // nu(N) = N (1 + min(lambda, 1)), clipped by the cap
    int N = 0;
    std::vector<std::string> notes;

    /// Parameterized coefficients c_alpha(mu) for one parameter, fitted on
    /// Chebyshev nodes of [mu_lo, mu_hi]; empty for fixed-mu runs.
    struct CoeffPoly {
        MonoidExponent exponent;
        std::vector<double> poly; // ascending powers of mu
    };
    std::vector<CoeffPoly> coefficient_polynomials;
    double mu_lo = 0, mu_hi = 0;
};

struct DulacOptions {
    Value nu_target = Value::integer(0); // 0: use nu(N)
    int working_order = -1;
    double cleanup = 1e-12; // relative numerical-zero cleanup
    TransitionOptions transition;
};

/// Assembles the expansion at a fixed parameter value: normal form to order
/// N, entry/exit conjugacies from the change restricted to the sections, and
/// the model map t -> scale * t^lambda composed through the series engine.
DulacExpansion dulac_series(const SaddleSpec& saddle, int N, const SectionPair& sections,
                            std::span<const double> mu = {},
                            const DulacOptions& options = {});

/// One-parameter version: runs the pipeline on degree+1 Chebyshev nodes of
/// [mu_lo, mu_hi] and fits polynomial coefficient functions c_alpha(mu).
DulacExpansion dulac_series_parameterized(const SaddleSpec& saddle, int N,
                                          const SectionPair& sections, double mu_lo,
                                          double mu_hi, int degree,
                                          const DulacOptions& options = {});

/// Specializes fitted coefficient polynomials at mu.
GeneralizedSeries expansion_at_mu(const DulacExpansion& expansion, double mu);

/// Partial sum over exponents <= nu.
double evaluate_expansion(const GeneralizedSeries& series, const Value& nu, double t);

struct VerificationGrid {
    double t_lo = 1e-3, t_hi = 1e-1;
    int per_decade = 40;
};

struct VerificationReport {
    bool passed = false;
    double slope = 0;
    double margin = 0;
    Value nu;
    bool noise_floor_pass = false; // every residual at the integration floor
    bool monotone_lower_half = true;
    std::vector<double> t, numeric, series, residual;
    std::vector<bool> used; // above the noise floor, entered the fit
    std::string message;
};

/// Residuals r(t) = |transition(t) - partial sum| on a geometric grid and
/// the least-squares slope of log r against log t; passes iff the slope is
/// at least nu + margin (default margin 0.25 min(lambda, 1)) and the
/// residuals decrease monotonically on the lower half of the grid.
VerificationReport verify_asymptotics(const SaddleSpec& saddle,
                                      const SectionPair& sections,
                                      const GeneralizedSeries& expansion, const Value& nu,
                                      const VerificationGrid& grid = {},
                                      double tol = 1e-12,
                                      std::span<const double> mu = {},
                                      double margin = -1);

} // namespace gps
