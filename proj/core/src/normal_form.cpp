#include "gps/normal_form.hpp"

#include <cmath>

namespace gps {

namespace {

/// Diagonalized, time-rescaled field: eigen-coordinates with eigenvalues
/// (1, -lambda) after dividing by lambda1.
struct DiagField {
    ParamMap2 F;
    std::array<double, 4> diag_from_orig;
    std::array<double, 4> orig_from_diag;
};

DiagField diagonalize(const SaddleSpec& saddle, int cap) {
    const auto& lin = saddle.lin;
    double l1 = saddle.lambda1.to_double();
    double l2 = saddle.lambda2.to_double();
    const int p = saddle.field.params;

    DiagField out;
    ParamSeries2 P = saddle.field.P.truncated(cap);
    ParamSeries2 Q = saddle.field.Q.truncated(cap);

    if (saddle.diagonal) {
        out.F = {std::move(P), std::move(Q)};
    } else {
        // columns of M are the eigenvectors; original = M * diag
        auto column = [&](double l) -> std::array<double, 2> {
            if (std::fabs(lin[1]) > 1e-14) return {lin[1], l - lin[0]};
            if (std::fabs(lin[2]) > 1e-14) return {l - lin[3], lin[2]};
            return {l == l1 ? 1.0 : 0.0, l == l1 ? 0.0 : 1.0};
        };
        auto c1 = column(l1), c2 = column(l2);
        double det = c1[0] * c2[1] - c2[0] * c1[1];
        if (std::fabs(det) < 1e-14)
            throw NotHyperbolicError("linear part could not be diagonalized");
        std::array<double, 4> M{c1[0], c2[0], c1[1], c2[1]};
        std::array<double, 4> Minv{c2[1] / det, -c2[0] / det, -c1[1] / det, c1[0] / det};
        out.orig_from_diag = M;
        out.diag_from_orig = Minv;

        ParamSeries2 lx = ParamSeries2::variable(p, cap, 0).scaled(M[0]) +
                          ParamSeries2::variable(p, cap, 1).scaled(M[1]);
        ParamSeries2 ly = ParamSeries2::variable(p, cap, 0).scaled(M[2]) +
                          ParamSeries2::variable(p, cap, 1).scaled(M[3]);
        ParamSeries2 Pc = P.substitute(lx, ly);
        ParamSeries2 Qc = Q.substitute(lx, ly);
        out.F = {Pc.scaled(Minv[0]) + Qc.scaled(Minv[1]),
                 Pc.scaled(Minv[2]) + Qc.scaled(Minv[3])};
    }
    out.F.x = out.F.x.scaled(1.0 / l1);
    out.F.y = out.F.y.scaled(1.0 / l1);
    return out;
}

} // namespace

NormalFormResult normal_form(const SaddleSpec& saddle, int N,
                             const NormalFormOptions& options) {
    if (N < 1) throw DomainError("normalization order must be >= 1");
    const int K = std::max(2 * N + 1, options.working_order);
    const double lam = saddle.lambda.to_double();
    const int p = saddle.field.params;

    DiagField diag = diagonalize(saddle, K);

    NormalFormResult out;
    out.N = N;
    out.eliminated_through = K;
    out.lambda = saddle.lambda;
    out.diag_from_orig = diag.diag_from_orig;
    out.orig_from_diag = diag.orig_from_diag;
    out.divisor_floor = std::numeric_limits<double>::infinity();

    ParamMap2 change = ParamMap2::identity(p, K); // old from new
    ParamMap2 current = diag.F;

    for (int k = 2; k <= K; ++k) {
        ParamSeries2 fx = current.x.slice(k);
        ParamSeries2 fy = current.y.slice(k);
        if (fx.is_zero() && fy.is_zero()) continue;

        ParamMap2 h{ParamSeries2(p, K), ParamSeries2(p, K)};
        for (const auto& [key, c] : fx.terms()) {
            double div = key.first - key.second * lam - 1;
            out.divisor_floor = std::min(out.divisor_floor, std::fabs(div));
            if (std::fabs(div) < options.divisor_minimum)
                throw SmallDivisorError("divisor p - q lambda - 1 below floor at (" +
                                            std::to_string(key.first) + ", " +
                                            std::to_string(key.second) + ")",
                                        key.first, key.second);
            h.x.add_term(key.first, key.second, c.scaled(1.0 / div));
        }
        for (const auto& [key, c] : fy.terms()) {
            double div = key.first - key.second * lam + lam;
            out.divisor_floor = std::min(out.divisor_floor, std::fabs(div));
            if (std::fabs(div) < options.divisor_minimum)
                throw SmallDivisorError("divisor p - q lambda + lambda below floor at (" +
                                            std::to_string(key.first) + ", " +
                                            std::to_string(key.second) + ")",
                                        key.first, key.second);
            h.y.add_term(key.first, key.second, c.scaled(1.0 / div));
        }

        ParamMap2 id = ParamMap2::identity(p, K);
        ParamMap2 stage{id.x + h.x, id.y + h.y};
        change = change.after(stage);
        current = push_forward(diag.F, change);
    }

    out.inverse_change = change;
    out.change = change.inverse();
    out.normalized = current;

    // A_N: factorable tail terms v u^{N+i} v^{N+j} of the v-equation
    out.residual = ParamSeries2(p, K);
    for (const auto& [key, c] : current.y.terms()) {
        if (key.first >= N && key.second >= N + 1)
            out.residual.add_term(key.first - N, key.second - N - 1, c.scaled(-1.0));
    }
    return out;
}

} // namespace gps
