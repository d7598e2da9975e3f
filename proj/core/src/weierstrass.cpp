#include "gps/weierstrass.hpp"

#include <algorithm>
#include <cmath>

#include "gps/transform.hpp"

namespace gps {

namespace {

/// Splits h into (P, L) with h = P + L, P the part of Y_n-degree >= d and L
/// the part of degree < d.
std::pair<GeneralizedSeries, GeneralizedSeries> split_by_degree(const GeneralizedSeries& h,
                                                                int d) {
    const int n = h.num_y();
    GeneralizedSeries P = h.like_empty(h.cap());
    GeneralizedSeries L = h.like_empty(h.cap());
    for (const auto& [key, c] : h.terms()) {
        if (key.y[n - 1] >= d)
            P.add_term(key, c);
        else
            L.add_term(key, c);
    }
    return {std::move(P), std::move(L)};
}

/// Divides a series whose every term has Y_n-degree >= d by Y_n^d.
GeneralizedSeries shift_down_yn(const GeneralizedSeries& P, int d) {
    const int n = P.num_y();
    GeneralizedSeries out = P.like_empty(P.cap());
    for (const auto& [key, c] : P.terms()) {
        TermKey nk = key;
        nk.y[n - 1] -= d;
        out.add_term(std::move(nk), c);
    }
    return out;
}

/// Terms of minimal total degree.
GeneralizedSeries lowest_slice(const GeneralizedSeries& F) {
    GeneralizedSeries out = F.like_empty(F.cap());
    auto ord = F.order();
    if (!ord) return out;
    for (const auto& [key, c] : F.terms())
        if (F.total_degree(key).compare(*ord) == 0) out.add_term(key, c);
    return out;
}

/// Evaluates the last analytic variable at 0 and drops its slot.
GeneralizedSeries drop_last_y(const GeneralizedSeries& F) {
    const int n = F.num_y();
    GeneralizedSeries out =
        GeneralizedSeries::zero(F.basis(), F.num_x(), n - 1, F.cap());
    for (const auto& [key, c] : F.terms()) {
        if (key.y[n - 1] != 0) continue;
        TermKey nk = key;
        nk.y.pop_back();
        out.add_term(std::move(nk), c);
    }
    return out;
}

/// Identity substitutions for the first n-1 variables plus h for the last.
std::vector<GeneralizedSeries> graft_last(const GeneralizedSeries& f,
                                          const GeneralizedSeries& h) {
    std::vector<GeneralizedSeries> G;
    const int n = f.num_y();
    for (int j = 0; j < n - 1; ++j)
        G.push_back(GeneralizedSeries::y_var(h.basis(), h.num_x(), n - 1, h.cap(), j));
    G.push_back(h);
    return G;
}

double coeff_of_yn(const GeneralizedSeries& f) {
    std::vector<MonoidExponent> x(f.num_x(), MonoidExponent::zero(f.basis()));
    std::vector<int> y(f.num_y(), 0);
    y[f.num_y() - 1] = 1;
    return f.coeff(x, y);
}

} // namespace

RegularityReport regular_order(const GeneralizedSeries& F) {
    if (F.num_y() < 1)
        throw ShapeMismatchError("regularity needs at least one analytic variable");
    const int n = F.num_y();
    RegularityReport rep;
    for (const auto& [key, c] : F.terms()) {
        bool pure = std::all_of(key.x.begin(), key.x.end(), [](long v) { return v == 0; });
        for (int j = 0; pure && j < n - 1; ++j) pure = key.y[j] == 0;
        if (!pure) continue;
        int d = key.y[n - 1];
        if (!rep.order || d < *rep.order) {
            rep.order = d;
            rep.leading = c;
        }
    }
    return rep;
}

DivisionResult weierstrass_divide(const GeneralizedSeries& g, const GeneralizedSeries& f,
                                  int d, DivisionSchedule schedule) {
    GeneralizedSeries::check_compatible(g, f);
    auto rr = regular_order(f);
    if (!rr.order || *rr.order != d)
        throw NotRegularError("divisor is not regular of order " + std::to_string(d));

    Value W = g.cap() < f.cap() ? g.cap() : f.cap();
    auto [fP, fB] = split_by_degree(f.with_cap(W), d);
    GeneralizedSeries A = shift_down_yn(fP, d); // unit: A(0) = leading coefficient
    GeneralizedSeries Ainv = reciprocal(A);
    GeneralizedSeries B = fB; // every coefficient vanishes at (X, Y') = 0

    GeneralizedSeries q = g.like_empty(W);
    GeneralizedSeries r = g.like_empty(W);
    GeneralizedSeries h = g.with_cap(W);

    int guard = 0;
    while (!h.is_zero()) {
        auto [P, L] = split_by_degree(h, d);
        r = r + L;
        if (P.is_zero()) break;
        GeneralizedSeries U = shift_down_yn(P, d);
        GeneralizedSeries processed =
            schedule == DivisionSchedule::chunked ? U : lowest_slice(U);
        GeneralizedSeries q_step = processed * Ainv;
        q = q + q_step;
        // h = U Y^d + L; subtracting q_step * f and the saved L leaves
        // (U - processed) Y^d - q_step * B up to the cap
        GeneralizedSeries rest = U - processed;
        h = rest.mul_monomial(1.0, std::vector<MonoidExponent>(g.num_x(),
                                                               MonoidExponent::zero(g.basis())),
                              [&] {
                                  std::vector<int> dy(g.num_y(), 0);
                                  dy[g.num_y() - 1] = d;
                                  return dy;
                              }())
                .with_cap(W) -
            q_step * B;
        if (++guard > 20000)
            throw DomainError("weierstrass division did not terminate");
    }
    return {std::move(q), std::move(r)};
}

PreparationResult weierstrass_prepare(const GeneralizedSeries& f,
                                      DivisionSchedule schedule) {
    auto rr = regular_order(f);
    if (!rr.order)
        throw NotRegularError("series is not regular in Y_n within its cap");
    const int d = *rr.order;
    std::vector<MonoidExponent> x0(f.num_x(), MonoidExponent::zero(f.basis()));
    std::vector<int> yd(f.num_y(), 0);
    yd[f.num_y() - 1] = d;
    GeneralizedSeries g = GeneralizedSeries::monomial(f.basis(), f.num_x(), f.num_y(),
                                                      f.cap(), 1.0, x0, yd);
    auto [q, r] = weierstrass_divide(g, f, d, schedule);
    GeneralizedSeries w = g.with_cap(q.cap()) - r;
    if (q.constant_term() == 0.0)
        throw NotRegularError("division produced a non-unit quotient");
    GeneralizedSeries u = reciprocal(q);
    return {std::move(u), std::move(w)};
}

GeneralizedSeries solve_implicit(const GeneralizedSeries& f) {
    if (f.num_y() < 1)
        throw ShapeMismatchError("implicit solving needs at least one analytic variable");
    if (f.constant_term() != 0.0) throw DomainError("implicit solving requires f(0) = 0");
    if (coeff_of_yn(f) == 0.0)
        throw DomainError("degenerate linear part: df/dY_n(0) = 0");

    GeneralizedSeries fy = partial_y(f, f.num_y() - 1).with_cap(f.cap());
    GeneralizedSeries h =
        GeneralizedSeries::zero(f.basis(), f.num_x(), f.num_y() - 1, f.cap());

    int rounds = static_cast<int>(std::ceil(std::log2(std::max(2.0, f.cap().to_double())))) + 3;
    for (int it = 0; it < 2 * rounds; ++it) {
        auto G = graft_last(f, h);
        GeneralizedSeries fh = compose(f, G);
        if (fh.is_zero() && it >= rounds) break;
        GeneralizedSeries fyh = compose(fy, G).with_cap(fh.cap());
        h = h.with_cap(fh.cap()) - fh * reciprocal(fyh);
        if (it >= rounds && compose(f, graft_last(f, h)).is_zero()) break;
    }
    return h;
}

GeneralizedSeries solve_implicit_lagrange(const GeneralizedSeries& f) {
    if (f.num_y() < 1)
        throw ShapeMismatchError("implicit solving needs at least one analytic variable");
    if (f.constant_term() != 0.0) throw DomainError("implicit solving requires f(0) = 0");
    if (coeff_of_yn(f) == 0.0)
        throw DomainError("degenerate linear part: df/dY_n(0) = 0");

    const int n = f.num_y();
    GeneralizedSeries a0 = drop_last_y(f); // f(x, y', 0)
    auto sigma0 = a0.order();
    if (!sigma0) return a0.like_empty(f.cap()); // already solved by h = 0

    int p_max =
        static_cast<int>(std::floor(f.cap().to_double() / sigma0->to_double())) + 1;
    Value W = f.cap() + Value::integer(p_max + 1); // room for the repeated derivatives

    // g = f - a0 is divisible by Y_n; mg = Y_n / g = 1 / (g / Y_n).
    // f is padded with zeros up to W so the repeated derivatives below stay
    // complete through f's own cap; the final truncation discards the rest.
    GeneralizedSeries fW = f.with_cap(W);
    GeneralizedSeries gdiv = fW.like_empty(W);
    for (const auto& [key, c] : fW.terms()) {
        if (key.y[n - 1] == 0) continue;
        TermKey nk = key;
        nk.y[n - 1] -= 1;
        gdiv.add_term(std::move(nk), c);
    }
    GeneralizedSeries mg = reciprocal(gdiv);

    GeneralizedSeries h =
        GeneralizedSeries::zero(f.basis(), f.num_x(), n - 1, f.cap());
    GeneralizedSeries ma0 = a0.scaled(-1.0).with_cap(W);
    GeneralizedSeries ma0_pow = ma0;
    GeneralizedSeries mg_pow = mg;
    double factorial = 1;
    for (int p = 1; p <= p_max; ++p) {
        factorial *= p;
        GeneralizedSeries D = mg_pow;
        for (int q = 0; q < p - 1; ++q) D = partial_y(D, n - 1);
        GeneralizedSeries bp = drop_last_y(D).scaled(1.0 / factorial);
        h = (h + (bp * ma0_pow).with_cap(f.cap())).with_cap(f.cap());
        if (p < p_max) {
            ma0_pow = ma0_pow * ma0;
            mg_pow = mg_pow * mg;
        }
    }
    return h;
}

std::vector<GeneralizedSeries> solve_implicit_system(std::vector<GeneralizedSeries> f,
                                                     int l) {
    if (f.empty() || static_cast<int>(f.size()) != l)
        throw ShapeMismatchError("system needs exactly l component functions");
    const int n = f[0].num_y();
    if (l > n) throw ShapeMismatchError("more implicit variables than analytic variables");

    if (l == 1) {
        if (coeff_of_yn(f[0]) == 0.0)
            throw SingularJacobianError("Jacobian in the last variable vanishes at 0");
        return {solve_implicit(f[0])};
    }

    int pivot = -1;
    for (int i = 0; i < l; ++i)
        if (coeff_of_yn(f[i]) != 0.0) {
            pivot = i;
            break;
        }
    if (pivot < 0) throw SingularJacobianError("no component has dY_n-derivative at 0");
    std::swap(f[pivot], f[l - 1]);

    const GeneralizedSeries& fl = f[l - 1];
    double cl = coeff_of_yn(fl);
    GeneralizedSeries w = solve_implicit(fl); // (m, n-1)

    std::vector<GeneralizedSeries> reduced;
    for (int i = 0; i < l - 1; ++i) {
        double ci = coeff_of_yn(f[i]) / cl;
        GeneralizedSeries fi = linear_combination(1.0, f[i], -ci, fl);
        reduced.push_back(compose(fi, graft_last(fi, w)));
    }
    std::vector<GeneralizedSeries> hp = solve_implicit_system(std::move(reduced), l - 1);

    // w(x, y', z') evaluated along the reduced solution gives the last component
    std::vector<GeneralizedSeries> G;
    const int n_out = n - l;
    for (int j = 0; j < n_out; ++j)
        G.push_back(GeneralizedSeries::y_var(hp[0].basis(), hp[0].num_x(), n_out,
                                             hp[0].cap(), j));
    for (const auto& comp : hp) G.push_back(comp);
    GeneralizedSeries hl = compose(w, G);

    std::vector<GeneralizedSeries> out = std::move(hp);
    out.push_back(std::move(hl));
    return out;
}

GeneralizedSeries elementary_symmetric(const BasisPtr& basis, int m, int n, Value cap,
                                       int l, int i) {
    if (i < 1 || i > l || l > n) throw IndexError("bad elementary symmetric index");
    GeneralizedSeries out = GeneralizedSeries::zero(basis, m, n, cap);
    std::vector<int> subset(i);
    // enumerate i-subsets of {0..l-1}
    for (int j = 0; j < i; ++j) subset[j] = j;
    for (;;) {
        std::vector<int> y(n, 0);
        for (int j : subset) y[n - l + j] = 1;
        out = out + GeneralizedSeries::monomial(basis, m, n, cap, 1.0,
                                                std::vector<MonoidExponent>(
                                                    m, MonoidExponent::zero(basis)),
                                                y);
        int pos = i - 1;
        while (pos >= 0 && subset[pos] == l - i + pos) --pos;
        if (pos < 0) break;
        ++subset[pos];
        for (int j = pos + 1; j < i; ++j) subset[j] = subset[j - 1] + 1;
    }
    return out;
}

namespace {

GeneralizedSeries permute_last_y(const GeneralizedSeries& F, int l,
                                 const std::vector<int>& perm) {
    const int n = F.num_y();
    GeneralizedSeries out = F.like_empty(F.cap());
    for (const auto& [key, c] : F.terms()) {
        TermKey nk = key;
        for (int j = 0; j < l; ++j) nk.y[n - l + j] = key.y[n - l + perm[j]];
        out.add_term(std::move(nk), c);
    }
    return out;
}

std::string permutation_name(const std::vector<int>& perm) {
    std::string s = "(";
    for (size_t i = 0; i < perm.size(); ++i) {
        if (i) s += " ";
        s += std::to_string(perm[i] + 1);
    }
    return s + ")";
}

void check_symmetry(const GeneralizedSeries& f, int l) {
    auto check_one = [&](const std::vector<int>& perm) {
        auto permuted = permute_last_y(f, l, perm);
        if (permuted.terms() == f.terms()) return;
        // name one violating term
        for (const auto& [key, c] : f.terms()) {
            auto it = permuted.terms().find(key);
            if (it == permuted.terms().end() || it->second != c) {
                std::vector<MonoidExponent> xe = f.x_exponents(key);
                auto mono = GeneralizedSeries::monomial(
                    f.basis(), f.num_x(), f.num_y(), f.cap(), c, xe,
                    std::vector<int>(key.y.begin(), key.y.end()));
                throw NotSymmetricError("not symmetric under permutation " +
                                        permutation_name(perm) + "; term " +
                                        mono.to_string() + " breaks it");
            }
        }
        throw NotSymmetricError("not symmetric under permutation " +
                                permutation_name(perm));
    };

    if (l <= 6) {
        std::vector<int> perm(l);
        for (int j = 0; j < l; ++j) perm[j] = j;
        do {
            check_one(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        for (int a = 0; a < l; ++a)
            for (int b = a + 1; b < l; ++b) {
                std::vector<int> perm(l);
                for (int j = 0; j < l; ++j) perm[j] = j;
                std::swap(perm[a], perm[b]);
                check_one(perm);
            }
    }
}

} // namespace

GeneralizedSeries reduce_symmetric(const GeneralizedSeries& f, int l) {
    const int n = f.num_y();
    if (l < 1 || l > n) throw IndexError("bad symmetric variable count");
    check_symmetry(f, l);

    GeneralizedSeries g = f.like_empty(f.cap());

    // group terms by homogeneous z-degree
    std::map<int, GeneralizedSeries> slices;
    for (const auto& [key, c] : f.terms()) {
        int D = 0;
        for (int j = 0; j < l; ++j) D += key.y[n - l + j];
        auto it = slices.find(D);
        if (it == slices.end()) it = slices.emplace(D, f.like_empty(f.cap())).first;
        it->second.add_term(key, c);
    }

    for (auto& [D, slice] : slices) {
        int guard = 0;
        while (!slice.is_zero()) {
            // lexicographically greatest z-exponent in the slice
            const TermKey* best = nullptr;
            for (const auto& [key, c] : slice.terms()) {
                if (!best) {
                    best = &key;
                    continue;
                }
                for (int j = 0; j < l; ++j) {
                    if (key.y[n - l + j] != best->y[n - l + j]) {
                        if (key.y[n - l + j] > best->y[n - l + j]) best = &key;
                        break;
                    }
                }
            }
            std::vector<int> p(l);
            for (int j = 0; j < l; ++j) p[j] = best->y[n - l + j];
            for (int j = 0; j + 1 < l; ++j)
                if (p[j] < p[j + 1])
                    throw NotSymmetricError("leading z-exponent is not a partition");

            // coefficient sub-series of the exact z-monomial p
            GeneralizedSeries cp = slice.like_empty(slice.cap());
            for (const auto& [key, c] : slice.terms()) {
                bool match = true;
                for (int j = 0; j < l; ++j) match = match && key.y[n - l + j] == p[j];
                if (!match) continue;
                TermKey nk = key;
                for (int j = 0; j < l; ++j) nk.y[n - l + j] = 0;
                cp.add_term(std::move(nk), c);
            }

            // sigma-monomial with exponents p_i - p_{i+1}
            std::vector<int> s(l);
            for (int j = 0; j < l; ++j) s[j] = p[j] - (j + 1 < l ? p[j + 1] : 0);
            GeneralizedSeries expansion =
                GeneralizedSeries::constant(f.basis(), f.num_x(), n, f.cap(), 1.0);
            for (int j = 0; j < l; ++j)
                for (int e = 0; e < s[j]; ++e)
                    expansion = expansion *
                                elementary_symmetric(f.basis(), f.num_x(), n, f.cap(), l,
                                                     j + 1);
            slice = slice - cp * expansion;

            std::vector<int> dy(n, 0);
            for (int j = 0; j < l; ++j) dy[n - l + j] = s[j];
            g = g + cp.mul_monomial(1.0, std::vector<MonoidExponent>(
                                             f.num_x(), MonoidExponent::zero(f.basis())),
                                    dy)
                        .with_cap(f.cap());
            if (++guard > 100000)
                throw DomainError("symmetric reduction did not terminate");
        }
    }
    return g;
}

} // namespace gps
