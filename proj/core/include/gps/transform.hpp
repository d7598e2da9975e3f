#pragma once

#include "gps/series.hpp"

namespace gps {

/// Blow-up substitution parameters: X_i -> X_j^rho (lambda + X_i),
/// singular when lambda = 0, regular when lambda > 0.
struct BlowupSpec {
    enum class Kind { singular, regular };
    Kind kind = Kind::singular;
    Value rho = Value::integer(1);
    double lambda = 0;
    int i = 0, j = 0;
};

/// Multiplies exponents by a fixed positive rho, extending the basis by the
/// scaled generators when they are not already representable.
class ExponentScaler {
public:
    ExponentScaler(BasisPtr basis, const Value& rho);

    const BasisPtr& target() const { return target_; }
    MonoidExponent apply(const MonoidExponent& e) const;

private:
    BasisPtr source_, target_;
    std::vector<std::vector<long>> scaled_gen_;
};

/// Singular blow-up X_i -> X_j^rho X_i applied termwise; the result lives
/// over the (possibly extended) basis and keeps the cap of F.
GeneralizedSeries blowup_singular(const GeneralizedSeries& F, const Value& rho, int i,
                                  int j);

/// Regular blow-up X_i -> X_j^rho (lambda + Z) with lambda > 0. The slot of
/// X_i disappears from the generalized variables and a new analytic variable
/// Z is appended after Y_n. Defaults act on the last two X variables.
GeneralizedSeries blowup_regular(const GeneralizedSeries& F, const Value& rho,
                                 double lambda, int i = -1, int j = -1);

GeneralizedSeries blowup(const GeneralizedSeries& F, const BlowupSpec& spec);

/// F(X, G_1, ..., G_n): substitutes G for the analytic variables of F. Each
/// G_j must have zero constant term and all G_j share one shape; F's X part
/// carries over. The result cap is
/// min(caps of G, cap_F * min(1, minimal positive order among the G_j)).
GeneralizedSeries compose(const GeneralizedSeries& F,
                          const std::vector<GeneralizedSeries>& G);

/// G with F*G = 1 up to cap, via the geometric series in 1 - F/F(0).
GeneralizedSeries reciprocal(const GeneralizedSeries& F);

/// F^r for real r, requiring F(0) > 0 (binomial series in F/F(0) - 1).
GeneralizedSeries pow_real(const GeneralizedSeries& F, double r);

/// Taylor shift Z -> lambda + Z on the last lambda.size() analytic
/// variables, computed from the derivative formula sum_p (1/p!) d^p F (.,
/// lambda) Z^p.
GeneralizedSeries translate_y(const GeneralizedSeries& F, const std::vector<double>& lambda);

/// Leading factorization F = X^e (c + tail) of a one-variable series
/// (m = 1, n = 0) with tail(0) = 0; tail keeps exponents relative to e.
struct LeadingFactor {
    MonoidExponent exponent;
    double coeff = 0;
    GeneralizedSeries tail;
};
LeadingFactor leading_factorization(const GeneralizedSeries& F);

/// f(x', g(t), y) for a one-variable g = t^rho (lambda + h(t)) with
/// lambda > 0, h(0) = 0, substituted into X-variable `slot`: regular blow-up
/// followed by composition with h. The t variable takes over the slot.
GeneralizedSeries substitute_puiseux(const GeneralizedSeries& F,
                                     const GeneralizedSeries& g, int slot);

/// Compositional inverse of a one-variable series f = t^alpha (c + h) with
/// c > 0, f(0) = 0: returns g with f(g(T)) = T up to cap. Exponents of g lie
/// in the monoid extended by 1/alpha.
GeneralizedSeries composition_inverse(const GeneralizedSeries& f);

} // namespace gps
