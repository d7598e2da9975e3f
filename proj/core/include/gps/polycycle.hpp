#pragma once

#include "gps/dulac.hpp"

namespace gps {

/// Convergent analytic corner map with an explicit radius; maps the exit
/// chart of its vertex to the entry chart of the next one. c_0 = 0 and
/// c_1 > 0 (orientation).
struct CornerMap {
    std::vector<double> coeffs; // ascending powers, coeffs[0] = 0
    double radius = 1;

    static CornerMap identity();
    static CornerMap scale(double a);
    double eval(double y) const; // Horner with a tail-bound check
    GeneralizedSeries to_series(const BasisPtr& basis, const Value& cap) const;
};

/// Cyclic chain of non-resonant hyperbolic saddles: vertex i carries its
/// saddle, its section pair and the corner map applied after its passage.
struct PolycycleVertex {
    SaddleSpec saddle;
    SectionPair sections;
    CornerMap corner;
};

struct PolycycleSpec {
    std::vector<PolycycleVertex> vertices;
    int params = 0;
};

/// Numeric Poincare return map: alternately integrate each saddle passage
/// and apply each corner map; 0 for t <= 0.
double poincare_map(const PolycycleSpec& polycycle, double t, double tol,
                    std::span<const double> mu = {});

/// Formal return-map series: composes the Dulac expansions of the vertices
/// with the corner-map series.
GeneralizedSeries poincare_series(const PolycycleSpec& polycycle, int N,
                                  const Value& nu_target = Value::integer(0),
                                  std::span<const double> mu = {});

/// Sign changes of P(t) - t on a resolution grid, bisected to tol. Cells
/// with |P(t) - t| below the noise floor are flagged indeterminate instead
/// of counted.
struct FixedPointReport {
    struct Bracket {
        double lo = 0, hi = 0, root = 0;
    };
    int count = 0;
    std::vector<Bracket> brackets;
    std::vector<std::pair<double, double>> indeterminate_cells;
};
FixedPointReport count_fixed_points(const std::function<double(double)>& P, double a,
                                    double b, int resolution, double tol,
                                    double noise_floor = 1e-11);

} // namespace gps
