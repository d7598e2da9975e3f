#include "gps/polycycle.hpp"

#include <cmath>

#include "gps/transform.hpp"

namespace gps {

CornerMap CornerMap::identity() { return {{0.0, 1.0}, 1.0}; }

CornerMap CornerMap::scale(double a) { return {{0.0, a}, 1.0}; }

double CornerMap::eval(double y) const {
    if (coeffs.empty() || coeffs[0] != 0.0)
        throw DomainError("corner maps must fix 0");
    if (std::fabs(y) >= radius)
        throw DomainError("corner map evaluated outside its radius");
    double v = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * y + *it;
    return v;
}

GeneralizedSeries CornerMap::to_series(const BasisPtr& basis, const Value& cap) const {
    GeneralizedSeries out = GeneralizedSeries::zero(basis, 1, 0, cap);
    for (size_t k = 1; k < coeffs.size(); ++k) {
        if (coeffs[k] == 0.0) continue;
        out = out + GeneralizedSeries::x_power(
                        basis, 1, 0, cap, 0,
                        MonoidExponent::from_value(basis,
                                                   Value::integer(static_cast<long>(k))))
                        .scaled(coeffs[k]);
    }
    return out;
}

double poincare_map(const PolycycleSpec& polycycle, double t, double tol,
                    std::span<const double> mu) {
    if (polycycle.vertices.empty()) throw DomainError("empty polycycle");
    if (t <= 0) return 0.0;
    double v = t;
    for (size_t i = 0; i < polycycle.vertices.size(); ++i) {
        const auto& vx = polycycle.vertices[i];
        try {
            TransitionOptions opt;
            opt.tol = tol;
            SaddleFrame frame(vx.saddle, vx.sections, mu, opt);
            v = integrate_transition(frame, v);
            v = vx.corner.eval(v);
        } catch (const Error& e) {
            throw IntegrationError("vertex " + std::to_string(i + 1) + ": " + e.what());
        }
        if (v <= 0) return 0.0; // left the inside of the polycycle
    }
    return v;
}

GeneralizedSeries poincare_series(const PolycycleSpec& polycycle, int N,
                                  const Value& nu_target, std::span<const double> mu) {
    if (polycycle.vertices.empty()) throw DomainError("empty polycycle");
    DulacOptions opts;
    opts.nu_target = nu_target;

    GeneralizedSeries composed;
    bool first = true;
    for (size_t i = 0; i < polycycle.vertices.size(); ++i) {
        const auto& vx = polycycle.vertices[i];
        if (vx.corner.coeffs.size() < 2 || !(vx.corner.coeffs[1] > 0))
            throw ChartMismatchError("corner map of vertex " + std::to_string(i + 1) +
                                     " does not preserve orientation");
        auto expansion = dulac_series(vx.saddle, N, vx.sections, mu, opts);
        GeneralizedSeries stage = expansion.series;
        if (first) {
            composed = stage;
            first = false;
        } else {
            composed = substitute_puiseux(stage, composed, 0);
        }
        auto corner = vx.corner.to_series(composed.basis(), composed.cap());
        composed = substitute_puiseux(corner, composed, 0);
    }
    return composed;
}

FixedPointReport count_fixed_points(const std::function<double(double)>& P, double a,
                                    double b, int resolution, double tol,
                                    double noise_floor) {
    if (!(0 < a && a < b)) throw DomainError("need 0 < a < b");
    if (resolution < 2) throw DomainError("resolution must be at least 2");

    FixedPointReport rep;
    auto delta = [&](double t) { return P(t) - t; };

    std::vector<double> ts(resolution + 1), ds(resolution + 1);
    for (int i = 0; i <= resolution; ++i) {
        ts[i] = a + (b - a) * i / resolution;
        ds[i] = delta(ts[i]);
    }
    for (int i = 0; i < resolution; ++i) {
        bool lo_small = std::fabs(ds[i]) < noise_floor;
        bool hi_small = std::fabs(ds[i + 1]) < noise_floor;
        if (lo_small || hi_small) {
            rep.indeterminate_cells.emplace_back(ts[i], ts[i + 1]);
            continue;
        }
        if ((ds[i] < 0) == (ds[i + 1] < 0)) continue;
        double lo = ts[i], hi = ts[i + 1];
        double dlo = ds[i];
        while (hi - lo > tol) {
            double mid = (lo + hi) / 2;
            double dm = delta(mid);
            if ((dm < 0) == (dlo < 0)) {
                lo = mid;
                dlo = dm;
            } else {
                hi = mid;
            }
        }
        rep.brackets.push_back({ts[i], ts[i + 1], (lo + hi) / 2});
    }
    rep.count = static_cast<int>(rep.brackets.size());
    return rep;
}

} // namespace gps
