#pragma once

#include "gps/series.hpp"

namespace gps {

/// Regularity of F in the last analytic variable: the minimal Y_n-degree d
/// with F(0,0,Y_n) = c Y_n^d + higher order, c != 0. order is empty when
/// F(0,0,Y_n) vanishes up to the cap.
struct RegularityReport {
    std::optional<int> order;
    double leading = 0;
};
RegularityReport regular_order(const GeneralizedSeries& F);

/// Alternative processing schedules for the division loop; both must yield
/// the same (q, r) up to cap.
enum class DivisionSchedule { chunked, graded };

/// Weierstrass division g = q f + r with deg_{Y_n}(r) < d, for f regular in
/// Y_n of order d; order(g - qf - r) > cap.
struct DivisionResult {
    GeneralizedSeries quotient;
    GeneralizedSeries remainder;
};
DivisionResult weierstrass_divide(const GeneralizedSeries& g, const GeneralizedSeries& f,
                                  int d, DivisionSchedule schedule = DivisionSchedule::chunked);

/// Weierstrass preparation f = u w with u a unit and w monic of degree d in
/// Y_n whose non-leading coefficients vanish at the origin.
struct PreparationResult {
    GeneralizedSeries unit;
    GeneralizedSeries poly;
};
PreparationResult weierstrass_prepare(const GeneralizedSeries& f,
                                      DivisionSchedule schedule = DivisionSchedule::chunked);

/// Solves f(x, y', h) = 0 for the last analytic variable by Newton iteration
/// with order doubling; requires f(0) = 0 and df/dY_n(0) != 0. The result
/// has one fewer analytic variable and h(0) = 0.
GeneralizedSeries solve_implicit(const GeneralizedSeries& f);

/// Independent oracle for solve_implicit via the Lagrange inversion formula
/// b_p = (1/p!) [d^{p-1}(Y_n/g)^p]_{Y_n = 0}.
GeneralizedSeries solve_implicit_lagrange(const GeneralizedSeries& f);

/// Solves the system f_i(x, y', h_1..h_l) = 0 for the last l analytic
/// variables by pivoting and elimination; Jacobian in those variables must
/// be invertible at 0.
std::vector<GeneralizedSeries> solve_implicit_system(std::vector<GeneralizedSeries> f,
                                                     int l);

/// Rewrites f, symmetric in its last l analytic variables z, as g(x, y',
/// sigma_1..sigma_l) in the elementary symmetric functions (classical
/// lexicographic elimination, per homogeneous z-degree).
GeneralizedSeries reduce_symmetric(const GeneralizedSeries& f, int l);

/// The elementary symmetric polynomial sigma_i(z) in the last l analytic
/// variables of the given ring shape (1-based i <= l).
GeneralizedSeries elementary_symmetric(const BasisPtr& basis, int m, int n, Value cap,
                                       int l, int i);

} // namespace gps
