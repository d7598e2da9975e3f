#pragma once

#include <random>

#include "gps/series.hpp"

namespace gps::testutil {

inline BasisPtr basis_1_sqrt2() {
    static BasisPtr b = GeneratorBasis::create(
        {Value::integer(1), Value::sqrt_rational(Rational(2))});
    return b;
}

/// Random exponent over <1, sqrt(2)> with value in [0, bound].
inline MonoidExponent random_exponent(std::mt19937& rng, const BasisPtr& b, long bound) {
    std::uniform_int_distribution<long> d(0, bound);
    for (;;) {
        long a = d(rng), c = d(rng);
        auto e = MonoidExponent::make(b, {a, c});
        if (e.value() <= Value::integer(bound)) return e;
    }
}

/// Random series over <1, sqrt(2)> with the given shape.
inline GeneralizedSeries random_series(std::mt19937& rng, const BasisPtr& b, int m, int n,
                                       const Value& cap, int max_terms,
                                       bool with_constant = true) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> ydist(0, 3);
    std::uniform_real_distribution<double> cdist(-2.0, 2.0);
    long bound = static_cast<long>(cap.to_double());
    auto out = GeneralizedSeries::zero(b, m, n, cap);
    int count = nterms(rng);
    for (int t = 0; t < count; ++t) {
        std::vector<MonoidExponent> xe;
        for (int i = 0; i < m; ++i) xe.push_back(random_exponent(rng, b, bound));
        std::vector<int> ye;
        for (int j = 0; j < n; ++j) ye.push_back(ydist(rng));
        double c = cdist(rng);
        if (c == 0) c = 1;
        out = out + GeneralizedSeries::monomial(b, m, n, cap, c, xe, ye);
    }
    if (!with_constant) {
        auto cst = GeneralizedSeries::constant(b, m, n, cap, out.constant_term());
        out = out - cst;
    }
    return out;
}

} // namespace gps::testutil
