#pragma once

#include <iosfwd>

#include "gps/polycycle.hpp"

namespace gps {

/// Tolerances and grid shared by the batch pipelines.
struct RunTolerances {
    double tol = 1e-12;
    VerificationGrid grid;
};

/// One saddle job: field with named coefficient sections, eigen data or
/// auto-analysis, sections, orders.
struct DulacJob {
    int params = 0;
    PlanarAnalyticField field;
    std::optional<std::pair<Value, Value>> eigenvalues; // declared when present
    SectionPair sections;
    int N = 2;
    Value nu = Value::integer(0); // 0: default nu(N)
    RunTolerances tolerances;

    SaddleSpec analyze() const;
};

/// A polycycle job: one DulacJob-shaped vertex block per saddle plus its
/// corner map, and the fixed-point search window.
struct PoincareJob {
    int params = 0;
    std::vector<DulacJob> vertices;
    std::vector<CornerMap> corners;
    int N = 2;
    Value nu = Value::integer(0);
    RunTolerances tolerances;
    double fp_lo = 0.01, fp_hi = 0.9;
    int fp_resolution = 200;

    PolycycleSpec polycycle() const;
};

/// Parses the structured text formats (see README for the grammar).
DulacJob parse_dulac_file(std::istream& in);
PoincareJob parse_poincare_file(std::istream& in);

/// Coefficient polynomial in mu1..muP (numbers, + - *, ^ on integers).
MuPoly parse_mu_poly(const std::string& text, int params);

/// CSV with header "t,numeric,series,residual" and 17 significant digits.
void write_residual_csv(std::ostream& out, const std::vector<double>& t,
                        const std::vector<double>& numeric,
                        const std::vector<double>& series,
                        const std::vector<double>& residual);
void write_verification_summary(std::ostream& out, const VerificationReport& report);
void write_fixed_point_summary(std::ostream& out, const FixedPointReport& report);

} // namespace gps
