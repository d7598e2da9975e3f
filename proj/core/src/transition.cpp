#include "gps/transition.hpp"

#include <cmath>

namespace gps {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

using Vec2 = std::array<double, 2>;

struct DpResult {
    Vec2 y;
    Vec2 k_last;
    double err;
};

template <class F>
DpResult dp_step(const F& f, const Vec2& y, const Vec2& k1, double h) {
    auto at = [&](double a1, double a2, double a3, double a4, double a5, const Vec2& k2,
                  const Vec2& k3, const Vec2& k4, const Vec2& k5) {
        Vec2 out;
        for (int i = 0; i < 2; ++i)
            out[i] = y[i] + h * (a1 * k1[i] + a2 * k2[i] + a3 * k3[i] + a4 * k4[i] +
                                 a5 * k5[i]);
        return out;
    };
    Vec2 zero{0, 0};
    Vec2 k2 = f(at(A21, 0, 0, 0, 0, zero, zero, zero, zero));
    Vec2 k3 = f(at(A31, A32, 0, 0, 0, k2, zero, zero, zero));
    Vec2 k4 = f(at(A41, A42, A43, 0, 0, k2, k3, zero, zero));
    Vec2 k5 = f(at(A51, A52, A53, A54, 0, k2, k3, k4, zero));
    Vec2 k6 = f(at(A61, A62, A63, A64, A65, k2, k3, k4, k5));
    Vec2 y5;
    for (int i = 0; i < 2; ++i)
        y5[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    Vec2 k7 = f(y5);

    double err = 0;
    for (int i = 0; i < 2; ++i) {
        double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                        E7 * k7[i]);
        double scale = 1e-2 + std::max(std::fabs(y[i]), std::fabs(y5[i]));
        err = std::max(err, std::fabs(e) / scale);
    }
    return {y5, k7, err};
}

double horner(const std::vector<double>& c, double x) {
    double v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

} // namespace

EventIntegrationResult integrate_to_event(
    const std::function<std::array<double, 2>(const std::array<double, 2>&)>& f,
    std::array<double, 2> start,
    const std::function<double(const std::array<double, 2>&)>& event, double tol,
    long max_steps, const std::function<bool(const std::array<double, 2>&)>& escape) {
    double t = 0;
    double h = 1e-3;
    Vec2 y = start;
    Vec2 k1 = f(y);
    double g_prev = event(y);
    for (long step = 0; step < max_steps; ++step) {
        auto r = dp_step(f, y, k1, h);
        if (r.err <= tol) {
            double g_new = event(r.y);
            if (g_prev < 0 && g_new >= 0) {
                // locate the crossing inside [t, t + h]: bisection on the
                // cubic Hermite interpolant, then polished partial steps
                Vec2 y0 = y, k0 = k1, y1 = r.y, kend = r.k_last;
                auto hermite = [&](double s) {
                    Vec2 out;
                    double s2 = s * s, s3 = s2 * s;
                    for (int i = 0; i < 2; ++i) {
                        double d = y1[i] - y0[i];
                        out[i] = y0[i] + s * h * k0[i] +
                                 s2 * (3 * d - h * (2 * k0[i] + kend[i])) +
                                 s3 * (-2 * d + h * (k0[i] + kend[i]));
                    }
                    return out;
                };
                double lo = 0, hi = 1;
                for (int it = 0; it < 60; ++it) {
                    double mid = (lo + hi) / 2;
                    if (event(hermite(mid)) < 0)
                        lo = mid;
                    else
                        hi = mid;
                }
                double frac = (lo + hi) / 2;
                Vec2 yl = y0;
                Vec2 kl = k0;
                double done = 0;
                for (int polish = 0; polish < 6; ++polish) {
                    double want = frac - done;
                    if (want * h != 0) {
                        auto sub = dp_step(f, yl, kl, want * h);
                        yl = sub.y;
                        kl = sub.k_last;
                        done = frac;
                    }
                    double g = event(yl);
                    if (std::fabs(g) < tol * std::max(1.0, std::fabs(yl[0]))) break;
                    auto fv = f(yl);
                    const double dh = 1e-7;
                    Vec2 probe{yl[0] + dh * fv[0], yl[1] + dh * fv[1]};
                    double dg = (event(probe) - g) / dh;
                    if (dg == 0) break;
                    frac -= g / dg / h;
                }
                return {yl, t + frac * h};
            }
            g_prev = g_new;
            t += h;
            y = r.y;
            k1 = r.k_last;
            if (escape(y)) throw IntegrationError("trajectory escaped the chart");
        }
        double factor = r.err > 0 ? 0.9 * std::pow(tol / r.err, 0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        if (h < 1e-15) throw IntegrationError("step size underflow near the saddle");
    }
    throw IntegrationError("no section crossing within the step budget");
}

SaddleFrame::SaddleFrame(const SaddleSpec& saddle, const SectionPair& sections,
                         std::span<const double> mu, TransitionOptions options)
    : saddle_(saddle), sections_(sections), options_(options),
      mu_(mu.begin(), mu.end()) {
    if (!(sections_.x0 > 0) || !(sections_.y0 > 0) || !(sections_.eps > 0))
        throw DomainError("sections must lie at positive coordinates");
    int cap = std::max({options_.manifold_order, saddle_.field.P.cap(),
                        saddle_.field.Q.cap()});
    P_ = saddle_.field.P.truncated(cap).at_mu(mu_);
    Q_ = saddle_.field.Q.truncated(cap).at_mu(mu_);

    y_axis_invariant_ = true;
    for (const auto& [k, c] : P_.terms())
        if (k.first == 0) y_axis_invariant_ = false;
    x_axis_invariant_ = true;
    for (const auto& [k, c] : Q_.terms())
        if (k.second == 0) x_axis_invariant_ = false;

    build_graphs();
    compute_offsets();
}

std::array<double, 2> SaddleFrame::field_at(double x, double y) const {
    return {P_.eval(x, y, mu_), Q_.eval(x, y, mu_)};
}

void SaddleFrame::build_graphs() {
    // The transition charts are axis-parallel sections; asking for them only
    // makes sense when the separatrices are tangent to the axes.
    if (!saddle_.diagonal)
        throw DomainError("transition charts require a diagonal linear part");
    const int K = options_.manifold_order;
    const double l1 = saddle_.lambda1.to_double();
    const double l2 = saddle_.lambda2.to_double();

    unstable_.assign(K + 1, 0.0);
    if (!x_axis_invariant_) {
        ParamSeries2 w(0, K);
        for (int k = 2; k <= K; ++k) {
            ParamSeries2 xv = ParamSeries2::variable(0, K, 0);
            ParamSeries2 resid = w.dx() * P_.truncated(K).substitute(xv, w) -
                                 Q_.truncated(K).substitute(xv, w);
            const MuPoly* rk = resid.coeff(k, 0);
            if (!rk || rk->is_zero()) continue;
            w.add_term(k, 0, MuPoly(0, -rk->constant() / (k * l1 - l2)));
        }
        for (const auto& [k, c] : w.terms()) unstable_[k.first] = c.constant();
    }

    stable_.assign(K + 1, 0.0);
    if (!y_axis_invariant_) {
        ParamSeries2 V(0, K);
        for (int k = 2; k <= K; ++k) {
            ParamSeries2 yv = ParamSeries2::variable(0, K, 1);
            ParamSeries2 resid = V.dy() * Q_.truncated(K).substitute(V, yv) -
                                 P_.truncated(K).substitute(V, yv);
            const MuPoly* rk = resid.coeff(0, k);
            if (!rk || rk->is_zero()) continue;
            V.add_term(0, k, MuPoly(0, -rk->constant() / (k * l2 - l1)));
        }
        for (const auto& [k, c] : V.terms()) stable_[k.second] = c.constant();
    }
}

void SaddleFrame::compute_offsets() {
    exit_offset_ = horner(unstable_, sections_.x0);
    entry_offset_ = horner(stable_, sections_.y0);

    double bound = options_.chart_bound > 0
                       ? options_.chart_bound
                       : 4 * std::max({1.0, sections_.x0, sections_.y0});
    auto escape = [&](const std::array<double, 2>& s) {
        return std::fabs(s[0]) > bound || std::fabs(s[1]) > bound;
    };

    if (options_.refine_offsets && !x_axis_invariant_) {
        double eta = sections_.x0 / 16;
        std::array<double, 2> seed{eta, horner(unstable_, eta)};
        try {
            auto r = integrate_to_event(
                [&](const std::array<double, 2>& s) { return field_at(s[0], s[1]); },
                seed, [&](const std::array<double, 2>& s) { return s[0] - sections_.x0; },
                options_.tol, options_.max_steps, escape);
            exit_offset_ = r.state[1];
        } catch (const IntegrationError&) {
            // keep the series value
        }
    }
    if (options_.refine_offsets && !y_axis_invariant_) {
        double eta = sections_.y0 / 16;
        std::array<double, 2> seed{horner(stable_, eta), eta};
        try {
            auto r = integrate_to_event(
                [&](const std::array<double, 2>& s) {
                    auto v = field_at(s[0], s[1]);
                    return std::array<double, 2>{-v[0], -v[1]};
                },
                seed, [&](const std::array<double, 2>& s) { return s[1] - sections_.y0; },
                options_.tol, options_.max_steps, escape);
            entry_offset_ = r.state[0];
        } catch (const IntegrationError&) {
        }
    }
}

std::array<double, 2> SaddleFrame::entry_point(double t) const {
    return {entry_offset_ + t, sections_.y0};
}

double integrate_transition(const SaddleFrame& frame, double t) {
    const auto& sec = frame.sections();
    if (t <= 0) return 0.0; // extension g(t) = 0 for t <= 0
    if (t >= sec.eps) throw DomainError("entry value outside the section extent");
    const auto& opt = frame.options();

    if (frame.y_axis_invariant() && !opt.force_time_integration && t < sec.x0) {
        // integrate dy/ds with s = log x: state (s, y) in unit speed; the
        // entry offset vanishes because the y-axis is the stable separatrix
        auto rhs = [&](const Vec2& state) -> Vec2 {
            double x = std::exp(state[0]);
            auto v = frame.field_at(x, state[1]);
            double a = v[0] / x;
            if (!(std::fabs(a) > 1e-14))
                throw IntegrationError("x is not monotone along the passage");
            return {1.0, v[1] / a};
        };
        double s0 = std::log(t), s1 = std::log(sec.x0);
        Vec2 y{s0, sec.y0};
        Vec2 k1 = rhs(y);
        double h = std::max(1e-6, (s1 - s0) / 64);
        long steps = 0;
        for (;;) {
            double remaining = s1 - y[0];
            if (remaining <= 1e-13) break;
            if (++steps > opt.max_steps)
                throw IntegrationError("step budget exhausted in the log chart");
            if (h > remaining) h = remaining;
            auto r = dp_step(rhs, y, k1, h);
            if (r.err <= opt.tol) {
                y = r.y;
                k1 = r.k_last;
            }
            double factor = r.err > 0 ? 0.9 * std::pow(opt.tol / r.err, 0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
            if (h < 1e-15) throw IntegrationError("step size underflow");
        }
        return y[1] - frame.exit_offset();
    }

    double bound = opt.chart_bound > 0 ? opt.chart_bound
                                       : 4 * std::max({1.0, sec.x0, sec.y0});
    auto r = integrate_to_event(
        [&](const std::array<double, 2>& s) { return frame.field_at(s[0], s[1]); },
        frame.entry_point(t),
        [&](const std::array<double, 2>& s) { return s[0] - sec.x0; }, opt.tol,
        opt.max_steps,
        [&](const std::array<double, 2>& s) {
            return std::fabs(s[0]) > bound || std::fabs(s[1]) > bound;
        });
    return r.state[1] - frame.exit_offset();
}

double integrate_transition(const SaddleSpec& saddle, const SectionPair& sections,
                            double t, double tol, std::span<const double> mu) {
    TransitionOptions opt;
    opt.tol = tol;
    SaddleFrame frame(saddle, sections, mu, opt);
    return integrate_transition(frame, t);
}

double integrate_transition_back(const SaddleFrame& frame, double exit_value) {
    const auto& sec = frame.sections();
    const auto& opt = frame.options();
    double bound = opt.chart_bound > 0 ? opt.chart_bound
                                       : 4 * std::max({1.0, sec.x0, sec.y0});
    auto r = integrate_to_event(
        [&](const std::array<double, 2>& s) {
            auto v = frame.field_at(s[0], s[1]);
            return std::array<double, 2>{-v[0], -v[1]};
        },
        {sec.x0, frame.exit_offset() + exit_value},
        [&](const std::array<double, 2>& s) { return s[1] - sec.y0; }, opt.tol,
        opt.max_steps,
        [&](const std::array<double, 2>& s) {
            return std::fabs(s[0]) > bound || std::fabs(s[1]) > bound;
        });
    return r.state[0] - frame.entry_offset();
}

} // namespace gps
