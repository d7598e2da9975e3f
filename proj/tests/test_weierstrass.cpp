#include "doctest.h"

#include "gps/transform.hpp"
#include "gps/weierstrass.hpp"
#include "test_util.hpp"

using namespace gps;
using gps::testutil::basis_1_sqrt2;
using gps::testutil::random_series;

namespace {

const Value CAP8 = Value::integer(8);

GeneralizedSeries S(const std::string& text, int m = 1, int n = 1, Value cap = CAP8) {
    return parse_series(basis_1_sqrt2(), m, n, cap, text, true);
}

/// Random series regular in Y_n of order d, built as
/// unit * (Y_n^d + lower-degree coefficients vanishing at 0).
GeneralizedSeries random_regular(std::mt19937& rng, const BasisPtr& b, int m, int n,
                                 const Value& cap, int d) {
    auto wlike = GeneralizedSeries::monomial(
        b, m, n, cap, 1.0, std::vector<MonoidExponent>(m, MonoidExponent::zero(b)),
        [&] {
            std::vector<int> y(n, 0);
            y[n - 1] = d;
            return y;
        }());
    std::uniform_real_distribution<double> cdist(-2.0, 2.0);
    for (int j = 0; j < d; ++j) {
        auto cj = random_series(rng, b, m, n, cap, 3, false);
        // coefficient of Y_n^j must vanish at (X, Y') = 0: drop terms whose
        // X part and Y' part are both zero, then attach Y_n^j
        GeneralizedSeries clean = cj.like_empty(cap);
        for (const auto& [key, c] : cj.terms()) {
            bool origin = std::all_of(key.x.begin(), key.x.end(),
                                      [](long v) { return v == 0; });
            for (int q = 0; origin && q < n - 1; ++q) origin = key.y[q] == 0;
            if (origin) continue;
            TermKey nk = key;
            nk.y[n - 1] = j;
            clean.add_term(std::move(nk), c);
        }
        wlike = wlike + clean;
    }
    auto unit = random_series(rng, b, m, n, cap, 3);
    unit = unit + GeneralizedSeries::constant(b, m, n, cap, 1.5 + cdist(rng) / 4);
    return unit * wlike;
}

} // namespace

TEST_CASE("regular_order examples") {
    // F = Y^2 - X -> d = 2, c = 1
    auto F = S("Y1^2 - X1^(1)");
    auto r = regular_order(F);
    REQUIRE(r.order.has_value());
    CHECK(*r.order == 2);
    CHECK(r.leading == 1.0);

    // F = X^{sqrt2} -> none
    CHECK(!regular_order(S("X1^(sqrt(2))")).order.has_value());

    // F = 3Y + XY^2 -> d = 1, c = 3
    auto r3 = regular_order(S("3*Y1 + X1^(1)*Y1^2"));
    REQUIRE(r3.order.has_value());
    CHECK(*r3.order == 1);
    CHECK(r3.leading == 3.0);
}

TEST_CASE("weierstrass division examples") {
    // g = Y^2, f = Y, d = 1 -> q = Y, r = 0
    auto g = S("Y1^2");
    auto f = S("Y1");
    auto [q, r] = weierstrass_divide(g, f, 1);
    CHECK(max_coeff_delta(q, S("Y1", 1, 1, q.cap())) == 0.0);
    CHECK(r.is_zero());

    // g = 1, f = Y - X^{1/2}, d = 1 -> q = 0, r = 1
    auto f2 = S("Y1 - X1^(1/2)");
    auto one = parse_series(f2.basis(), 1, 1, CAP8, "1");
    auto [q2, r2] = weierstrass_divide(one, f2, 1);
    CHECK(q2.is_zero());
    CHECK(max_coeff_delta(r2, one.with_cap(r2.cap())) == 0.0);

    // g = Y^2, f = Y - X^{1/2}, d = 1 -> q = Y + X^{1/2}, r = X
    auto g3 = parse_series(f2.basis(), 1, 1, CAP8, "Y1^2");
    auto [q3, r3] = weierstrass_divide(g3, f2, 1);
    CHECK(max_coeff_delta(q3, parse_series(f2.basis(), 1, 1, q3.cap(), "Y1 + X1^(1/2)")) <
          1e-14);
    CHECK(max_coeff_delta(r3, parse_series(f2.basis(), 1, 1, r3.cap(), "X1^(1)")) < 1e-14);

    // residual identity
    auto resid = g3.with_cap(q3.cap()) - q3 * f2 - r3;
    CHECK(resid.max_abs_coeff() < 1e-14);

    CHECK_THROWS_AS(weierstrass_divide(g3, f2, 2, DivisionSchedule::chunked),
                    NotRegularError);
}

TEST_CASE("weierstrass division properties on random regular divisors") {
    std::mt19937 rng(41);
    auto b = basis_1_sqrt2();
    for (int t = 0; t < 40; ++t) {
        int m = 1 + (t % 2), n = 1 + (t % 2), d = 1 + (t % 3);
        Value cap = Value::integer(6);
        auto f = random_regular(rng, b, m, n, cap, d);
        auto g = random_series(rng, b, m, n, cap, 5);
        auto [q, r] = weierstrass_divide(g, f, d);
        // remainder degree < d
        for (const auto& [key, c] : r.terms()) CHECK(key.y[n - 1] < d);
        // residual vanishes up to cap
        auto resid = g.with_cap(q.cap()) - q * f - r;
        CHECK(resid.max_abs_coeff() < 1e-9);
        // both schedules agree (uniqueness)
        auto [q2, r2] = weierstrass_divide(g, f, d, DivisionSchedule::graded);
        CHECK(max_coeff_delta(q, q2) < 1e-9);
        CHECK(max_coeff_delta(r, r2) < 1e-9);
    }
}

TEST_CASE("weierstrass preparation examples") {
    // f = Y^2 - X -> u = 1, w = f
    auto f = S("Y1^2 - X1^(1)");
    auto [u, w] = weierstrass_prepare(f);
    CHECK(max_coeff_delta(u, parse_series(f.basis(), 1, 1, u.cap(), "1")) < 1e-14);
    CHECK(max_coeff_delta(w, f.with_cap(w.cap())) < 1e-14);

    // f = (1+X)(Y^2 + X^{3/2}) -> u = 1 + X, w = Y^2 + X^{3/2}
    auto wpart = S("Y1^2 + X1^(3/2)");
    auto f2 = parse_series(wpart.basis(), 1, 1, CAP8, "1 + X1^(1)") * wpart;
    auto [u2, w2] = weierstrass_prepare(f2);
    CHECK(max_coeff_delta(u2, parse_series(f2.basis(), 1, 1, u2.cap(), "1 + X1^(1)")) <
          1e-12);
    CHECK(max_coeff_delta(w2, parse_series(f2.basis(), 1, 1, w2.cap(), "Y1^2 + X1^(3/2)")) <
          1e-12);

    // f = 2Y + Y^2 -> u = 2 + Y, w = Y
    auto f3 = S("2*Y1 + Y1^2");
    auto [u3, w3] = weierstrass_prepare(f3);
    CHECK(max_coeff_delta(u3, parse_series(f3.basis(), 1, 1, u3.cap(), "2 + Y1")) < 1e-14);
    CHECK(max_coeff_delta(w3, parse_series(f3.basis(), 1, 1, w3.cap(), "Y1")) < 1e-14);

    CHECK_THROWS_AS(weierstrass_prepare(S("X1^(sqrt(2))")), NotRegularError);
}

TEST_CASE("weierstrass preparation properties") {
    std::mt19937 rng(43);
    auto b = basis_1_sqrt2();
    for (int t = 0; t < 40; ++t) {
        int m = 1 + (t % 2), n = 1 + (t % 2), d = 1 + (t % 3);
        Value cap = Value::integer(6);
        auto f = random_regular(rng, b, m, n, cap, d);
        auto [u, w] = weierstrass_prepare(f);
        CHECK(u.constant_term() != 0.0);
        CHECK(*regular_order(f).order == d);

        // w is monic of degree d with non-leading coefficients vanishing at 0
        std::vector<MonoidExponent> x0(m, MonoidExponent::zero(b));
        std::vector<int> yd(n, 0);
        yd[n - 1] = d;
        CHECK(w.coeff(x0, yd) == doctest::Approx(1.0));
        for (const auto& [key, c] : w.terms()) {
            CHECK(key.y[n - 1] <= d);
            bool at_origin = std::all_of(key.x.begin(), key.x.end(),
                                         [](long v) { return v == 0; });
            for (int j = 0; at_origin && j < n - 1; ++j) at_origin = key.y[j] == 0;
            if (at_origin && key.y[n - 1] < d) CHECK(std::fabs(c) < 1e-9);
        }

        // f - u w vanishes up to cap
        auto resid = f.with_cap(u.cap()) - u * w;
        CHECK(resid.max_abs_coeff() < 1e-8 * std::max(1.0, f.max_abs_coeff()));

        // uniqueness through the other schedule
        auto [u2, w2] = weierstrass_prepare(f, DivisionSchedule::graded);
        CHECK(max_coeff_delta(w, w2) < 1e-8);
        CHECK(max_coeff_delta(u, u2) < 1e-8);
    }
}

TEST_CASE("implicit solve examples") {
    // f = Y - X^{sqrt2} -> h = X^{sqrt2}
    auto f = S("Y1 - X1^(sqrt(2))");
    auto h = solve_implicit(f);
    CHECK(h.num_y() == 0);
    CHECK(max_coeff_delta(h, parse_series(f.basis(), 1, 0, h.cap(), "X1^(sqrt(2))")) <
          1e-14);

    // f = Y - X - Y^2 -> Catalan numbers
    auto f2 = S("Y1 - X1^(1) - Y1^2");
    auto h2 = solve_implicit(f2);
    double expected[] = {1, 1, 2, 5, 14, 42, 132};
    for (int k = 1; k <= 7; ++k) {
        auto e = MonoidExponent::from_value(f2.basis(), Value::integer(k));
        CHECK(h2.coeff({e}, {}) == doctest::Approx(expected[k - 1]).epsilon(1e-10));
    }

    // f = Y + X + XY -> h = -X/(1+X) = -X + X^2 - X^3 + ...
    auto f3 = S("Y1 + X1^(1) + X1^(1)*Y1");
    auto h3 = solve_implicit(f3);
    for (int k = 1; k <= 7; ++k) {
        auto e = MonoidExponent::from_value(f3.basis(), Value::integer(k));
        CHECK(h3.coeff({e}, {}) == doctest::Approx(k % 2 ? -1.0 : 1.0).epsilon(1e-10));
    }

    CHECK_THROWS_AS(solve_implicit(S("Y1^2 - X1^(1)")), DomainError);
    CHECK_THROWS_AS(solve_implicit(S("1 + Y1")), DomainError);
}

TEST_CASE("implicit solve agrees with the Lagrange-formula oracle") {
    std::mt19937 rng(47);
    auto b = basis_1_sqrt2();
    int checked = 0;
    for (int t = 0; t < 50; ++t) {
        // f = c1 Y + (series vanishing at 0 without linear Y term)
        std::uniform_real_distribution<double> cdist(0.5, 2.0);
        double c1 = cdist(rng) * (t % 2 ? 1 : -1);
        auto noise = random_series(rng, b, 1, 1, Value::integer(5), 4, false);
        // remove any pure linear Y term from the noise, then add c1 Y
        std::vector<MonoidExponent> x0{MonoidExponent::zero(b)};
        auto lin = noise.coeff(x0, {1});
        auto f = noise -
                 GeneralizedSeries::monomial(b, 1, 1, noise.cap(), lin, x0, {1}) +
                 GeneralizedSeries::monomial(b, 1, 1, noise.cap(), c1, x0, {1});
        auto newton = solve_implicit(f);
        auto lagrange = solve_implicit_lagrange(f);
        auto capv = newton.cap() < lagrange.cap() ? newton.cap() : lagrange.cap();
        CHECK(max_coeff_delta(newton.with_cap(capv), lagrange.with_cap(capv)) < 1e-8);
        ++checked;
    }
    CHECK(checked == 50);
}

TEST_CASE("implicit system examples") {
    auto b = basis_1_sqrt2();
    // f = (Y1 - X, Y2 - X^2) -> h = (X, X^2)
    auto f1 = parse_series(b, 1, 2, CAP8, "Y1 - X1^(1)");
    auto f2 = parse_series(b, 1, 2, CAP8, "Y2 - X1^(2)");
    auto h = solve_implicit_system({f1, f2}, 2);
    REQUIRE(h.size() == 2);
    CHECK(max_coeff_delta(h[0], parse_series(b, 1, 0, h[0].cap(), "X1^(1)")) < 1e-12);
    CHECK(max_coeff_delta(h[1], parse_series(b, 1, 0, h[1].cap(), "X1^(2)")) < 1e-12);

    // f = (Y1 - X - Y2^2, Y2 - X^2) -> h = (X + X^4, X^2)
    auto g1 = parse_series(b, 1, 2, CAP8, "Y1 - X1^(1) - Y2^2");
    auto g2 = parse_series(b, 1, 2, CAP8, "Y2 - X1^(2)");
    auto hg = solve_implicit_system({g1, g2}, 2);
    CHECK(max_coeff_delta(hg[0], parse_series(b, 1, 0, hg[0].cap(), "X1^(1) + X1^(4)")) <
          1e-12);
    CHECK(max_coeff_delta(hg[1], parse_series(b, 1, 0, hg[1].cap(), "X1^(2)")) < 1e-12);

    // l = 1 degenerates to solve_implicit
    auto single = parse_series(b, 1, 1, CAP8, "Y1 - X1^(1) - Y1^2");
    auto hs = solve_implicit_system({single}, 1);
    CHECK(max_coeff_delta(hs[0], solve_implicit(single)) == 0.0);

    // singular Jacobian
    auto s1 = parse_series(b, 1, 2, CAP8, "Y1^2 - X1^(1)");
    auto s2 = parse_series(b, 1, 2, CAP8, "Y2^2 - X1^(1)");
    CHECK_THROWS_AS(solve_implicit_system({s1, s2}, 2), SingularJacobianError);
}

TEST_CASE("implicit system residuals vanish on random instances") {
    std::mt19937 rng(53);
    auto b = basis_1_sqrt2();
    for (int t = 0; t < 15; ++t) {
        // start from an invertible linear part in (Y1, Y2) plus noise
        auto mk = [&](double a11, double a12, const char* noise_expr) {
            auto lin = GeneralizedSeries::monomial(b, 1, 2, Value::integer(5), a11,
                                                   {MonoidExponent::zero(b)}, {1, 0}) +
                       GeneralizedSeries::monomial(b, 1, 2, Value::integer(5), a12,
                                                   {MonoidExponent::zero(b)}, {0, 1});
            return lin + parse_series(b, 1, 2, Value::integer(5), noise_expr);
        };
        auto f1 = mk(1.0 + t * 0.1, 0.5, "X1^(1) + Y1^2*Y2");
        auto f2 = mk(0.25, -1.0 - t * 0.05, "X1^(sqrt(2)) - Y2^3");
        auto h = solve_implicit_system({f1, f2}, 2);
        for (const auto& fi : {f1, f2}) {
            auto resid = compose(fi, {h[0], h[1]});
            CHECK(resid.max_abs_coeff() < 1e-8);
        }
        for (const auto& hi : h) CHECK(hi.constant_term() == 0.0);
    }
}

TEST_CASE("symmetric reduction examples") {
    auto b = basis_1_sqrt2();
    // f = z1 z2 -> g = sigma_2
    auto f = parse_series(b, 1, 2, CAP8, "Y1*Y2");
    auto g = reduce_symmetric(f, 2);
    CHECK(g.term_count() == 1);
    CHECK(g.coeff({MonoidExponent::zero(b)}, {0, 1}) == 1.0);

    // f = z1^2 + z2^2 -> g = sigma_1^2 - 2 sigma_2
    auto f2 = parse_series(b, 1, 2, CAP8, "Y1^2 + Y2^2");
    auto g2 = reduce_symmetric(f2, 2);
    CHECK(g2.coeff({MonoidExponent::zero(b)}, {2, 0}) == 1.0);
    CHECK(g2.coeff({MonoidExponent::zero(b)}, {0, 1}) == -2.0);
    CHECK(g2.term_count() == 2);

    // f = X^{sqrt2}(z1 + z2) -> g = X^{sqrt2} sigma_1
    auto f3 = parse_series(b, 1, 2, CAP8, "X1^(sqrt(2))*Y1 + X1^(sqrt(2))*Y2");
    auto g3 = reduce_symmetric(f3, 2);
    auto r2 = MonoidExponent::from_value(b, Value::sqrt_rational(Rational(2)));
    CHECK(g3.coeff({r2}, {1, 0}) == 1.0);
    CHECK(g3.term_count() == 1);

    // non-symmetric input names a violating permutation
    CHECK_THROWS_AS(reduce_symmetric(parse_series(b, 1, 2, CAP8, "Y1"), 2),
                    NotSymmetricError);
}

TEST_CASE("symmetric reduction substitutes back to f") {
    std::mt19937 rng(59);
    auto b = basis_1_sqrt2();
    for (int t = 0; t < 25; ++t) {
        int l = 2 + (t % 2);
        // symmetrize a random series over its last l variables
        auto raw = random_series(rng, b, 1, l, Value::integer(5), 4);
        auto f = raw.like_empty(raw.cap());
        std::vector<int> perm(l);
        for (int j = 0; j < l; ++j) perm[j] = j;
        do {
            GeneralizedSeries permuted = raw.like_empty(raw.cap());
            for (const auto& [key, c] : raw.terms()) {
                TermKey nk = key;
                for (int j = 0; j < l; ++j) nk.y[j] = key.y[perm[j]];
                permuted.add_term(std::move(nk), c);
            }
            f = f + permuted;
        } while (std::next_permutation(perm.begin(), perm.end()));

        auto g = reduce_symmetric(f, l);
        std::vector<GeneralizedSeries> sigmas;
        for (int i = 1; i <= l; ++i)
            sigmas.push_back(elementary_symmetric(b, 1, l, f.cap(), l, i));
        auto back = compose(g, sigmas);
        CHECK(max_coeff_delta(back, f.with_cap(back.cap())) < 1e-9);
    }
}
