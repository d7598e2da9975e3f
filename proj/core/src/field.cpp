#include "gps/field.hpp"

#include <cmath>

namespace gps {

PlanarAnalyticField::PlanarAnalyticField(int params, ParamSeries2 Pin, ParamSeries2 Qin)
    : params(params), P(std::move(Pin)), Q(std::move(Qin)) {
    for (const auto* s : {&P, &Q}) {
        if (const MuPoly* c = s->coeff(0, 0); c && !c->is_zero())
            throw DomainError("the origin must be singular for every parameter value");
    }
}

std::array<double, 4> PlanarAnalyticField::linear_part() const {
    std::array<double, 4> lin{};
    const struct {
        const ParamSeries2* s;
        int i, j, slot;
    } picks[] = {{&P, 1, 0, 0}, {&P, 0, 1, 1}, {&Q, 1, 0, 2}, {&Q, 0, 1, 3}};
    for (const auto& pk : picks) {
        if (const MuPoly* c = pk.s->coeff(pk.i, pk.j)) {
            if (!c->is_constant())
                throw DomainError("the linear part must be parameter-independent");
            lin[pk.slot] = c->constant();
        }
    }
    return lin;
}

namespace {

void check_nonresonant(const Value& lambda, const ResonanceCheck& check) {
    if (lambda.is_exact() && lambda.is_rational())
        throw ResonanceError("eigenvalue ratio " + lambda.to_string() + " is rational");
    double lv = lambda.to_double();
    for (int q = 1; q <= check.max_denominator; ++q) {
        double pq = std::round(lv * q);
        if (pq < 1) continue;
        if (std::fabs(lv - pq / q) < check.tolerance)
            throw ResonanceError("eigenvalue ratio " + std::to_string(lv) + " is within " +
                                 std::to_string(check.tolerance) + " of " +
                                 std::to_string(static_cast<long>(pq)) + "/" +
                                 std::to_string(q));
    }
}

double divisor_floor_for(double lambda, int scan) {
    double floor_v = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= scan; ++p)
        for (int q = 0; p + q <= scan; ++q) {
            if (p + q < 2) continue;
            floor_v = std::min(floor_v, std::fabs(p - q * lambda - 1));
            floor_v = std::min(floor_v, std::fabs(p - q * lambda + lambda));
        }
    return floor_v;
}

SaddleSpec finish_saddle(const PlanarAnalyticField& field, Value l1, Value l2,
                         const std::array<double, 4>& lin, const ResonanceCheck& check) {
    Value lambda = (-l2) * l1.inverse();
    check_nonresonant(lambda, check);

    SaddleSpec s;
    s.field = field;
    s.lambda1 = std::move(l1);
    s.lambda2 = std::move(l2);
    s.lambda = lambda;
    s.basis = GeneratorBasis::extended(GeneratorBasis::trivial(), {lambda});
    s.divisor_floor = divisor_floor_for(lambda.to_double(), check.divisor_scan);
    s.lin = lin;
    s.diagonal = lin[1] == 0.0 && lin[2] == 0.0;
    return s;
}

} // namespace

SaddleSpec analyze_saddle(const PlanarAnalyticField& field, const ResonanceCheck& check) {
    auto lin = field.linear_part();
    double tr = lin[0] + lin[3];
    double det = lin[0] * lin[3] - lin[1] * lin[2];
    if (!(det < 0))
        throw NotHyperbolicError(
            "linear part has determinant >= 0: not a hyperbolic saddle");
    double disc = std::sqrt(tr * tr - 4 * det);
    double l1 = (tr + disc) / 2;
    double l2 = (tr - disc) / 2;
    if (!(l1 > 0) || !(l2 < 0) || std::fabs(l1 * l2) < 1e-12)
        throw NotHyperbolicError("eigenvalues are not of opposite signs");
    return finish_saddle(field, Value::approx(BigFloat(l1)), Value::approx(BigFloat(l2)),
                         lin, check);
}

SaddleSpec analyze_saddle(const PlanarAnalyticField& field, const Value& lambda1,
                          const Value& lambda2, const ResonanceCheck& check) {
    if (lambda1.sign() <= 0 || lambda2.sign() >= 0)
        throw NotHyperbolicError("declared eigenvalues must satisfy l1 > 0 > l2");
    auto lin = field.linear_part();
    double tr = lin[0] + lin[3];
    double det = lin[0] * lin[3] - lin[1] * lin[2];
    double l1 = lambda1.to_double(), l2 = lambda2.to_double();
    if (std::fabs(l1 + l2 - tr) > 1e-7 * std::max(1.0, std::fabs(tr)) ||
        std::fabs(l1 * l2 - det) > 1e-7 * std::max(1.0, std::fabs(det)))
        throw DomainError("declared eigenvalues do not match the linear part");
    return finish_saddle(field, lambda1, lambda2, lin, check);
}

bool QuadraticDomain::contains(double r, double phi) const {
    if (!(r > 0)) throw DomainError("quadratic domain membership needs r > 0");
    return r < c * std::exp(-C * std::sqrt(std::fabs(phi)));
}

} // namespace gps
