#include "doctest.h"

#include <random>

#include "gps/normal_form.hpp"

using namespace gps;

namespace {

PlanarAnalyticField field_linear_plus_x2(int p = 0, double pert = 1.0) {
    // dx/dt = x, dy/dt = -sqrt(2) y + pert x^2
    ParamSeries2 P = ParamSeries2::variable(p, 8, 0);
    ParamSeries2 Q = ParamSeries2::variable(p, 8, 1).scaled(-std::sqrt(2.0));
    ParamSeries2 x2(p, 8);
    x2.add_term(2, 0, MuPoly(p, pert));
    return PlanarAnalyticField(p, P, Q + x2);
}

SaddleSpec saddle_sqrt2(const PlanarAnalyticField& f) {
    return analyze_saddle(f, Value::integer(1), -Value::sqrt_rational(Rational(2)));
}

} // namespace

TEST_CASE("mu polynomial basics") {
    auto m1 = MuPoly::variable(2, 0);
    auto m2 = MuPoly::variable(2, 1);
    auto q = MuPoly(2, 3.0) + m1 * m1.scaled(2.0) - m2;
    double v = q.eval(std::array<double, 2>{0.5, 4.0});
    CHECK(v == doctest::Approx(3.0 + 2 * 0.25 - 4.0));
    CHECK(q.degree() == 2);
}

TEST_CASE("param series substitution and reciprocal") {
    // s = 1 + x + y^2; substitute x := x + y, y := y
    ParamSeries2 s(0, 6);
    s.add_term(0, 0, MuPoly(0, 1));
    s.add_term(1, 0, MuPoly(0, 1));
    s.add_term(0, 2, MuPoly(0, 1));
    auto sub = s.substitute(ParamSeries2::variable(0, 6, 0) + ParamSeries2::variable(0, 6, 1),
                            ParamSeries2::variable(0, 6, 1));
    REQUIRE(sub.coeff(0, 1) != nullptr);
    CHECK(sub.coeff(0, 1)->constant() == 1.0);
    CHECK(sub.coeff(0, 2)->constant() == 1.0);

    auto rec = s.reciprocal_unit();
    auto prod = rec * s;
    CHECK(prod.coeff(0, 0)->constant() == doctest::Approx(1.0));
    for (const auto& [k, c] : prod.terms()) {
        if (k.first == 0 && k.second == 0) continue;
        CHECK(std::fabs(c.constant()) < 1e-12);
    }
}

TEST_CASE("near-identity map inversion") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    for (int t = 0; t < 10; ++t) {
        ParamMap2 C = ParamMap2::identity(0, 6);
        for (int i = 0; i <= 3; ++i)
            for (int j = 0; i + j <= 3; ++j) {
                if (i + j < 2) continue;
                C.x.add_term(i, j, MuPoly(0, dist(rng)));
                C.y.add_term(i, j, MuPoly(0, dist(rng)));
            }
        auto Cinv = C.inverse();
        auto comp = C.after(Cinv);
        auto id = ParamMap2::identity(0, 6);
        auto dx = comp.x - id.x;
        auto dy = comp.y - id.y;
        double worst = 0;
        for (const auto& [k, c] : dx.terms()) worst = std::max(worst, std::fabs(c.constant()));
        for (const auto& [k, c] : dy.terms()) worst = std::max(worst, std::fabs(c.constant()));
        CHECK(worst < 1e-11);
    }
}

TEST_CASE("analyze_saddle examples") {
    auto f = field_linear_plus_x2(0, 0.0);
    auto s = saddle_sqrt2(f);
    CHECK(s.lambda == Value::sqrt_rational(Rational(2)));
    CHECK(s.diagonal);
    CHECK(s.basis->size() == 2);

    // dx = 2x + y, dy = -y: eigenvalues 2, -1 -> lambda = 1/2 resonant
    ParamSeries2 P = ParamSeries2::variable(0, 4, 0).scaled(2.0) +
                     ParamSeries2::variable(0, 4, 1);
    ParamSeries2 Q = ParamSeries2::variable(0, 4, 1).scaled(-1.0);
    PlanarAnalyticField res(0, P, Q);
    CHECK_THROWS_AS(analyze_saddle(res), ResonanceError);

    // dx = x^2, dy = -y: zero eigenvalue -> not hyperbolic
    ParamSeries2 P2(0, 4);
    P2.add_term(2, 0, MuPoly(0, 1));
    PlanarAnalyticField nh(0, P2, ParamSeries2::variable(0, 4, 1).scaled(-1.0));
    CHECK_THROWS_AS(analyze_saddle(nh), NotHyperbolicError);

    // declared eigenvalues must match the linear part
    CHECK_THROWS_AS(analyze_saddle(f, Value::integer(2), -Value::sqrt_rational(Rational(2))),
                    DomainError);
}

TEST_CASE("quadratic domain membership") {
    QuadraticDomain W{1, 1};
    CHECK(W.contains(0.5, 0.0));
    CHECK(!W.contains(0.5, 4.0)); // 0.5 < e^{-2} fails
    CHECK(!W.contains(1.0, 0.0)); // strict
}

TEST_CASE("normal form of an already linear saddle is the identity") {
    auto f = field_linear_plus_x2(0, 0.0);
    auto nf = normal_form(saddle_sqrt2(f), 2);
    auto id = ParamMap2::identity(0, nf.change.x.cap());
    CHECK(nf.change.x.terms() == id.x.terms());
    CHECK(nf.change.y.terms() == id.y.terms());
    CHECK(nf.residual.is_zero());
}

TEST_CASE("normal form eliminates the quadratic term with coefficient 1/(2+lambda)") {
    auto f = field_linear_plus_x2();
    auto nf = normal_form(saddle_sqrt2(f), 2);
    double beta = 1.0 / (2.0 + std::sqrt(2.0));
    REQUIRE(nf.change.y.coeff(2, 0) != nullptr);
    CHECK(nf.change.y.coeff(2, 0)->constant() == doctest::Approx(-beta).epsilon(1e-12));
    REQUIRE(nf.inverse_change.y.coeff(2, 0) != nullptr);
    CHECK(nf.inverse_change.y.coeff(2, 0)->constant() == doctest::Approx(beta).epsilon(1e-12));

    // this field linearizes exactly: the normalized field is linear
    for (const auto& [k, c] : nf.normalized.x.terms())
        if (!(k.first == 1 && k.second == 0)) CHECK(std::fabs(c.constant()) < 1e-13);
    for (const auto& [k, c] : nf.normalized.y.terms())
        if (!(k.first == 0 && k.second == 1)) CHECK(std::fabs(c.constant()) < 1e-13);
}

TEST_CASE("normal form is idempotent to the eliminated order") {
    auto f = field_linear_plus_x2();
    auto nf = normal_form(saddle_sqrt2(f), 1);
    PlanarAnalyticField g(0, nf.normalized.x.truncated(8),
                          nf.normalized.y.truncated(8));
    auto s2 = analyze_saddle(g, Value::integer(1), -Value::sqrt_rational(Rational(2)));
    auto nf2 = normal_form(s2, 1);
    for (const auto& [k, c] : nf2.change.x.terms())
        if (!(k.first == 1 && k.second == 0)) CHECK(std::fabs(c.constant()) < 1e-12);
    for (const auto& [k, c] : nf2.change.y.terms())
        if (!(k.first == 0 && k.second == 1)) CHECK(std::fabs(c.constant()) < 1e-12);
}

TEST_CASE("normal form conjugacy check on sample points") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(0.4, 1.0);
    ParamSeries2 P = ParamSeries2::variable(0, 9, 0);
    ParamSeries2 Q = ParamSeries2::variable(0, 9, 1).scaled(-std::sqrt(2.0));
    Q.add_term(2, 0, MuPoly(0, 1.0));
    Q.add_term(1, 2, MuPoly(0, -0.5));
    Q.add_term(3, 1, MuPoly(0, 0.25));
    PlanarAnalyticField f(0, P, Q);
    auto nf = normal_form(saddle_sqrt2(f), 2); // eliminated through degree 5

    auto eval_change_jacobian = [&](double x, double y) {
        double h = 1e-6;
        auto at = [&](double a, double b) { return nf.change.eval(a, b, {}); };
        auto c = at(x, y), cx1 = at(x + h, y), cx0 = at(x - h, y), cy1 = at(x, y + h),
             cy0 = at(x, y - h);
        return std::array<double, 6>{c[0],
                                     c[1],
                                     (cx1[0] - cx0[0]) / (2 * h),
                                     (cy1[0] - cy0[0]) / (2 * h),
                                     (cx1[1] - cx0[1]) / (2 * h),
                                     (cy1[1] - cy0[1]) / (2 * h)};
    };

    double prev = -1;
    for (double scale : {1.0, 0.5, 0.25}) {
        double worst = 0;
        for (int s = 0; s < 12; ++s) {
            double x = dist(rng) * 0.2 * scale;
            double y = dist(rng) * 0.2 * scale;
            auto J = eval_change_jacobian(x, y);
            auto F = f.eval(x, y, {});
            double pu = J[2] * F[0] + J[3] * F[1];
            double pv = J[4] * F[0] + J[5] * F[1];
            double nu_ = nf.normalized.x.eval(J[0], J[1], {});
            double nv_ = nf.normalized.y.eval(J[0], J[1], {});
            worst = std::max({worst, std::fabs(pu - nu_), std::fabs(pv - nv_)});
        }
        if (prev > 0) {
            // remainder of degree 6: halving the radius should divide the
            // mismatch by ~2^6; finite differences blur it, ask for 2^4
            CHECK(worst < prev / 16.0 + 1e-9);
        }
        prev = worst;
    }
}

TEST_CASE("parameterized normal form keeps polynomial mu dependence") {
    int p = 1;
    ParamSeries2 P = ParamSeries2::variable(p, 8, 0);
    ParamSeries2 Q = ParamSeries2::variable(p, 8, 1).scaled(-std::sqrt(2.0));
    MuPoly one_plus_mu = MuPoly(p, 1.0) + MuPoly::variable(p, 0);
    Q.add_term(2, 0, one_plus_mu);
    PlanarAnalyticField f(p, P, Q);
    auto s = analyze_saddle(f, Value::integer(1), -Value::sqrt_rational(Rational(2)));
    auto nf = normal_form(s, 2);
    const MuPoly* c = nf.inverse_change.y.coeff(2, 0);
    REQUIRE(c != nullptr);
    double beta = 1.0 / (2.0 + std::sqrt(2.0));
    CHECK(c->eval(std::array<double, 1>{0.0}) == doctest::Approx(beta));
    CHECK(c->eval(std::array<double, 1>{0.5}) == doctest::Approx(1.5 * beta));
    CHECK(c->degree() == 1);
}

TEST_CASE("small divisor guard") {
    ParamSeries2 P = ParamSeries2::variable(0, 6, 0);
    double lam = 0.5 + 1e-10;
    ParamSeries2 Q = ParamSeries2::variable(0, 6, 1).scaled(-lam);
    // eliminating x y^3 needs the divisor 1 - 3 lam + lam = 1 - 2 lam ~ 2e-10
    Q.add_term(1, 3, MuPoly(0, 1.0));
    PlanarAnalyticField f(0, P, Q);
    ResonanceCheck loose;
    loose.tolerance = 1e-12;
    auto s = analyze_saddle(f, loose);
    CHECK_THROWS_AS(normal_form(s, 3), SmallDivisorError);
}
