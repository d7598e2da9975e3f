#pragma once

#include <functional>

#include "gps/field.hpp"

namespace gps {

/// Entry section {y = y0, x in (0, eps)} with chart x, exit section
/// {x = x0, y in (0, eps)} with chart y, in the field's own coordinates.
/// Chart values are centered on the separatrix crossings.
struct SectionPair {
    double x0 = 1, y0 = 1, eps = 1;
};

struct TransitionOptions {
    double tol = 1e-10;
    long max_steps = 4000000;
    double chart_bound = 0;    // 0: derived from the sections
    int manifold_order = 14;   // series order of the separatrix graphs
    bool refine_offsets = true;
    bool force_time_integration = false; // disable the log-abscissa fast path
};

/// Charts adapted to one saddle passage: diagonalizing frame, separatrix
/// graphs, and the centered entry/exit chart offsets.
class SaddleFrame {
public:
    SaddleFrame(const SaddleSpec& saddle, const SectionPair& sections,
                std::span<const double> mu, TransitionOptions options = {});

    const SaddleSpec& saddle() const { return saddle_; }
    const SectionPair& sections() const { return sections_; }
    const TransitionOptions& options() const { return options_; }

    std::array<double, 2> field_at(double x, double y) const;
    /// Entry point for chart value t, in field coordinates.
    std::array<double, 2> entry_point(double t) const;
    double entry_offset() const { return entry_offset_; }
    double exit_offset() const { return exit_offset_; }
    /// Is the y-axis invariant (P(0, y) = 0), making log-abscissa
    /// integration applicable?
    bool y_axis_invariant() const { return y_axis_invariant_; }
    bool x_axis_invariant() const { return x_axis_invariant_; }

    /// Separatrix graphs (v = w(u), u = V(v)) as coefficient lists.
    const std::vector<double>& unstable_graph() const { return unstable_; }
    const std::vector<double>& stable_graph() const { return stable_; }

private:
    void build_graphs();
    void compute_offsets();

    SaddleSpec saddle_;
    SectionPair sections_;
    TransitionOptions options_;
    std::vector<double> mu_;
    ParamSeries2 P_, Q_; // specialized at mu
    bool y_axis_invariant_ = false, x_axis_invariant_ = false;
    std::vector<double> unstable_, stable_;
    double entry_offset_ = 0, exit_offset_ = 0;
};

/// Section-to-section transition map value at entry chart value t: adaptive
/// Runge-Kutta with dense-output event detection, switching to integration
/// in log x when the y-axis is invariant. Defined as 0 for t <= 0.
double integrate_transition(const SaddleFrame& frame, double t);
double integrate_transition(const SaddleSpec& saddle, const SectionPair& sections,
                            double t, double tol, std::span<const double> mu = {});

/// Reverse passage: from a centered exit value back to the entry chart.
double integrate_transition_back(const SaddleFrame& frame, double exit_value);

/// Generic adaptive Dormand-Prince 5(4) integration of x' = f(x) until the
/// event function crosses zero from below; dense-output refinement to tol.
struct EventIntegrationResult {
    std::array<double, 2> state;
    double time = 0;
};
EventIntegrationResult integrate_to_event(
    const std::function<std::array<double, 2>(const std::array<double, 2>&)>& f,
    std::array<double, 2> start,
    const std::function<double(const std::array<double, 2>&)>& event, double tol,
    long max_steps, const std::function<bool(const std::array<double, 2>&)>& escape);

} // namespace gps
