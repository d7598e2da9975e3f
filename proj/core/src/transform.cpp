#include "gps/transform.hpp"

#include <cmath>

#include "gps/weierstrass.hpp"

namespace gps {

namespace {

BasisPtr union_basis(const BasisPtr& a, const BasisPtr& b) {
    if (a == b || a->equivalent(*b)) return a;
    std::vector<Value> gens;
    for (size_t i = 0; i < b->size(); ++i) gens.push_back(b->generator(i));
    return GeneratorBasis::extended(a, gens);
}

GeneralizedSeries permute_x(const GeneralizedSeries& F, const std::vector<int>& perm) {
    GeneralizedSeries out = GeneralizedSeries::zero(F.basis(), F.num_x(), F.num_y(), F.cap());
    const size_t k = F.basis()->size();
    for (const auto& [key, c] : F.terms()) {
        TermKey nk;
        nk.y = key.y;
        nk.x.resize(key.x.size());
        for (int i = 0; i < F.num_x(); ++i)
            std::copy(key.x.begin() + perm[i] * k, key.x.begin() + (perm[i] + 1) * k,
                      nk.x.begin() + i * k);
        out.add_term(std::move(nk), c);
    }
    return out;
}

GeneralizedSeries insert_x_slot(const GeneralizedSeries& F, int pos) {
    GeneralizedSeries out =
        GeneralizedSeries::zero(F.basis(), F.num_x() + 1, F.num_y(), F.cap());
    const size_t k = F.basis()->size();
    for (const auto& [key, c] : F.terms()) {
        TermKey nk;
        nk.y = key.y;
        nk.x.assign(key.x.begin(), key.x.begin() + pos * k);
        nk.x.insert(nk.x.end(), k, 0L);
        nk.x.insert(nk.x.end(), key.x.begin() + pos * k, key.x.end());
        out.add_term(std::move(nk), c);
    }
    return out;
}

/// One-variable series re-embedded with its variable at X-slot `slot` of an
/// (m, n) ring over `basis`.
GeneralizedSeries embed_1var(const GeneralizedSeries& h, const BasisPtr& basis, int m,
                             int n, int slot, const Value& cap) {
    GeneralizedSeries out = GeneralizedSeries::zero(basis, m, n, cap);
    const size_t k = basis->size();
    for (const auto& [key, c] : h.terms()) {
        auto e = h.x_exponent(key, 0).rebase(basis);
        TermKey nk;
        nk.x.assign(m * k, 0L);
        std::copy(e.coeffs().begin(), e.coeffs().end(), nk.x.begin() + slot * k);
        nk.y.assign(n, 0);
        out.add_term(std::move(nk), c);
    }
    return out;
}

double binomial_next(double acc, double beta, int p) { return acc * (beta - p) / (p + 1); }

GeneralizedSeries substitute_y_value(const GeneralizedSeries& F, int var, double value) {
    GeneralizedSeries out = F.like_empty(F.cap());
    for (const auto& [key, c] : F.terms()) {
        TermKey nk = key;
        double factor = 1;
        for (int e = 0; e < key.y[var]; ++e) factor *= value;
        nk.y[var] = 0;
        out.add_term(std::move(nk), c * factor);
    }
    return out;
}

} // namespace

ExponentScaler::ExponentScaler(BasisPtr basis, const Value& rho) : source_(std::move(basis)) {
    if (rho.sign() <= 0) throw DomainError("exponent scaling factor must be positive");
    std::vector<Value> scaled;
    scaled.reserve(source_->size());
    for (size_t i = 0; i < source_->size(); ++i) scaled.push_back(rho * source_->generator(i));
    target_ = GeneratorBasis::extended(source_, scaled);
    for (const auto& v : scaled) {
        auto rep = target_->express(v);
        if (!rep)
            throw DomainError("scaled generator " + v.to_string() +
                              " is not representable after extension");
        scaled_gen_.push_back(std::move(*rep));
    }
}

MonoidExponent ExponentScaler::apply(const MonoidExponent& e) const {
    auto src = e.rebase(source_);
    std::vector<long> out(target_->size(), 0);
    for (size_t i = 0; i < scaled_gen_.size(); ++i) {
        long c = src.coeffs()[i];
        if (c == 0) continue;
        for (size_t j = 0; j < out.size(); ++j) out[j] += c * scaled_gen_[i][j];
    }
    return MonoidExponent::group_element(target_, std::move(out));
}

GeneralizedSeries blowup_singular(const GeneralizedSeries& F, const Value& rho, int i,
                                  int j) {
    const int m = F.num_x();
    if (i == j || i < 0 || j < 0 || i >= m || j >= m)
        throw IndexError("blow-up needs two distinct X indices");
    ExponentScaler sc(F.basis(), rho);
    GeneralizedSeries out = GeneralizedSeries::zero(sc.target(), m, F.num_y(), F.cap());
    for (const auto& [key, c] : F.terms()) {
        auto xe = F.x_exponents(key);
        auto scaled = sc.apply(xe[i]);
        TermKey nk;
        nk.y = key.y;
        for (int s = 0; s < m; ++s) {
            auto e = xe[s].rebase(sc.target());
            if (s == j) e = e + scaled;
            nk.x.insert(nk.x.end(), e.coeffs().begin(), e.coeffs().end());
        }
        out.add_term(std::move(nk), c);
    }
    return out;
}

GeneralizedSeries blowup_regular(const GeneralizedSeries& F, const Value& rho,
                                 double lambda, int i, int j) {
    const int m = F.num_x();
    const int n = F.num_y();
    if (m < 2) throw ShapeMismatchError("regular blow-up needs at least two X variables");
    if (i < 0) i = m - 1;
    if (j < 0) j = m - 2;
    if (i == j || i >= m || j >= m) throw IndexError("blow-up needs two distinct X indices");
    if (!(lambda > 0)) throw DomainError("regular blow-up requires lambda > 0");

    ExponentScaler sc(F.basis(), rho);
    // a term putting all its degree into X_i lands at rho times that degree,
    // so knowledge only extends to cap * min(1, rho)
    Value cap = F.cap();
    if (rho < Value::integer(1)) cap = cap * rho;
    GeneralizedSeries out = GeneralizedSeries::zero(sc.target(), m - 1, n + 1, cap);

    for (const auto& [key, c] : F.terms()) {
        auto xe = F.x_exponents(key);
        double beta = xe[i].value().to_double();
        auto scaled = sc.apply(xe[i]);

        std::vector<MonoidExponent> nx;
        nx.reserve(m - 1);
        for (int s = 0; s < m; ++s) {
            if (s == i) continue;
            auto e = xe[s].rebase(sc.target());
            if (s == j) e = e + scaled;
            nx.push_back(std::move(e));
        }
        Value deg0 = Value::rational(0);
        for (const auto& e : nx) deg0 += e.value();
        long ysum = 0;
        for (int e : key.y) ysum += e;
        deg0 += Value::integer(ysum);

        double room = (cap - deg0).to_double();
        if (room < -1e-9) continue;
        int p_max = static_cast<int>(std::floor(room + 1e-9)) + 1;

        TermKey base;
        for (const auto& e : nx) base.x.insert(base.x.end(), e.coeffs().begin(), e.coeffs().end());
        base.y.assign(key.y.begin(), key.y.end());
        base.y.push_back(0);

        double binom = 1.0;
        for (int p = 0; p <= p_max; ++p) {
            if (binom == 0.0) break;
            TermKey nk = base;
            nk.y.back() = p;
            out.add_term(std::move(nk), c * binom * std::pow(lambda, beta - p));
            binom = binomial_next(binom, beta, p);
        }
    }
    return out;
}

GeneralizedSeries blowup(const GeneralizedSeries& F, const BlowupSpec& spec) {
    if (spec.kind == BlowupSpec::Kind::singular) {
        if (spec.lambda != 0) throw DomainError("singular blow-up requires lambda = 0");
        return blowup_singular(F, spec.rho, spec.i, spec.j);
    }
    return blowup_regular(F, spec.rho, spec.lambda, spec.i, spec.j);
}

GeneralizedSeries compose(const GeneralizedSeries& F,
                          const std::vector<GeneralizedSeries>& G) {
    const int n = F.num_y();
    if (static_cast<int>(G.size()) != n)
        throw ShapeMismatchError("composition needs one series per analytic variable");
    if (n == 0) return F;

    for (size_t j = 1; j < G.size(); ++j) GeneralizedSeries::check_compatible(G[0], G[j]);
    if (G[0].num_x() != F.num_x())
        throw ShapeMismatchError("composition target must keep the X variables of F");
    BasisPtr basis = union_basis(G[0].basis(), F.basis());

    std::optional<Value> ord_min;
    for (const auto& g : G) {
        if (g.constant_term() != 0.0)
            throw DomainError("composition substitutes series with zero constant term only");
        if (auto o = g.order(); o && (!ord_min || *o < *ord_min)) ord_min = *o;
    }
    Value shrink = ord_min && *ord_min < Value::integer(1) ? *ord_min : Value::integer(1);
    Value cap = F.cap() * shrink;
    for (const auto& g : G)
        if (g.cap() < cap) cap = g.cap();

    const int mT = G[0].num_x();
    const int nT = G[0].num_y();
    GeneralizedSeries out = GeneralizedSeries::zero(basis, mT, nT, cap);

    std::vector<GeneralizedSeries> Gb;
    Gb.reserve(n);
    for (const auto& g : G) Gb.push_back(g.rebase(basis).with_cap(cap));

    std::vector<std::vector<GeneralizedSeries>> powers(n);
    auto power = [&](int j, int e) -> const GeneralizedSeries& {
        auto& col = powers[j];
        if (col.empty()) col.push_back(GeneralizedSeries::constant(basis, mT, nT, cap, 1.0));
        while (static_cast<int>(col.size()) <= e) col.push_back(col.back() * Gb[j]);
        return col[e];
    };

    for (const auto& [key, c] : F.terms()) {
        std::vector<MonoidExponent> xe;
        xe.reserve(F.num_x());
        for (int i = 0; i < F.num_x(); ++i) xe.push_back(F.x_exponent(key, i).rebase(basis));
        GeneralizedSeries term = GeneralizedSeries::monomial(basis, mT, nT, cap, c, xe,
                                                             std::vector<int>(nT, 0));
        for (int j = 0; j < n; ++j)
            if (key.y[j] > 0) term = term * power(j, key.y[j]);
        out = out + term;
    }
    return out;
}

GeneralizedSeries reciprocal(const GeneralizedSeries& F) {
    double c = F.constant_term();
    if (c == 0.0) throw DomainError("reciprocal requires a nonzero constant term");
    GeneralizedSeries one =
        GeneralizedSeries::constant(F.basis(), F.num_x(), F.num_y(), F.cap(), 1.0);
    GeneralizedSeries F1 = one - F.scaled(1.0 / c);
    GeneralizedSeries sum = one;
    GeneralizedSeries power = F1;
    int guard = 0;
    while (!power.is_zero()) {
        sum = sum + power;
        power = power * F1;
        if (++guard > 10000)
            throw DomainError("reciprocal did not terminate; inner part has order 0");
    }
    return sum.scaled(1.0 / c);
}

GeneralizedSeries pow_real(const GeneralizedSeries& F, double r) {
    double c = F.constant_term();
    if (!(c > 0)) throw DomainError("pow_real requires a positive constant term");
    GeneralizedSeries one =
        GeneralizedSeries::constant(F.basis(), F.num_x(), F.num_y(), F.cap(), 1.0);
    GeneralizedSeries N = F.scaled(1.0 / c) - one;
    GeneralizedSeries sum = one;
    GeneralizedSeries power = N;
    double binom = r;
    int p = 1;
    int guard = 0;
    while (!power.is_zero() && binom != 0.0) {
        sum = sum + power.scaled(binom);
        power = power * N;
        binom = binomial_next(binom, r, p);
        ++p;
        if (++guard > 10000)
            throw DomainError("pow_real did not terminate; inner part has order 0");
    }
    return sum.scaled(std::pow(c, r));
}

GeneralizedSeries translate_y(const GeneralizedSeries& F, const std::vector<double>& lambda) {
    const int l = static_cast<int>(lambda.size());
    if (l > F.num_y()) throw ShapeMismatchError("more shifts than analytic variables");
    std::vector<MonoidExponent> no_x_shift(F.num_x(), MonoidExponent::zero(F.basis()));
    GeneralizedSeries cur = F;
    for (int s = 0; s < l; ++s) {
        int var = F.num_y() - l + s;
        GeneralizedSeries out = cur.like_empty(F.cap());
        GeneralizedSeries D = cur;
        double factorial = 1;
        int p = 0;
        while (!D.is_zero()) {
            auto at_lambda = substitute_y_value(D, var, lambda[s]);
            std::vector<int> dy(F.num_y(), 0);
            dy[var] = p;
            out = out + at_lambda.mul_monomial(1.0 / factorial, no_x_shift, dy).with_cap(F.cap());
            D = partial_y(D, var).with_cap(F.cap());
            ++p;
            factorial *= p;
        }
        cur = out;
    }
    return cur;
}

LeadingFactor leading_factorization(const GeneralizedSeries& F) {
    if (F.num_x() != 1 || F.num_y() != 0)
        throw ShapeMismatchError("leading factorization needs a one-variable series");
    if (F.is_zero()) throw DomainError("leading factorization of the zero series");
    const TermKey* lead_key = nullptr;
    std::optional<Value> lead_val;
    for (const auto& [key, c] : F.terms()) {
        Value v = F.total_degree(key);
        if (!lead_val || v < *lead_val) {
            lead_val = v;
            lead_key = &key;
        }
    }
    LeadingFactor lf;
    lf.exponent = F.x_exponent(*lead_key, 0);
    lf.coeff = F.terms().at(*lead_key);

    lf.tail = GeneralizedSeries::zero(F.basis(), 1, 0, F.cap() - lf.exponent.value());
    for (const auto& [key, c] : F.terms()) {
        if (&key == lead_key) continue;
        auto shifted = F.x_exponent(key, 0) - lf.exponent;
        TermKey nk;
        nk.x.assign(shifted.coeffs().begin(), shifted.coeffs().end());
        lf.tail.add_term(std::move(nk), c);
    }
    return lf;
}

GeneralizedSeries substitute_puiseux(const GeneralizedSeries& F, const GeneralizedSeries& g,
                                     int slot) {
    const int m = F.num_x();
    const int n = F.num_y();
    if (slot < 0 || slot >= m) throw IndexError("substitution slot out of range");
    if (g.num_x() != 1 || g.num_y() != 0)
        throw DomainError("puiseux substitution needs a one-variable series");

    LeadingFactor lf = leading_factorization(g);
    if (!(lf.coeff > 0))
        throw DomainError("puiseux substitution needs a positive leading coefficient");
    Value rho = lf.exponent.value();
    if (rho.sign() <= 0) throw DomainError("puiseux substitution needs g(0) = 0");

    BasisPtr common = union_basis(F.basis(), g.basis());
    GeneralizedSeries Fc = F.rebase(common);

    // move the substituted variable last and insert the t slot before it
    std::vector<int> perm;
    for (int i = 0; i < m; ++i)
        if (i != slot) perm.push_back(i);
    perm.push_back(slot);
    GeneralizedSeries lifted = insert_x_slot(permute_x(Fc, perm), m - 1);

    // X_slot -> T^rho (c + Z), then Z := h(T)
    GeneralizedSeries blown = blowup_regular(lifted, rho, lf.coeff, m, m - 1);

    std::vector<GeneralizedSeries> subs;
    Value sub_cap = blown.cap();
    for (int j = 0; j < n; ++j)
        subs.push_back(GeneralizedSeries::y_var(blown.basis(), m, n, sub_cap, j));
    subs.push_back(embed_1var(lf.tail.rebase(blown.basis()), blown.basis(), m, n, m - 1,
                              sub_cap));
    GeneralizedSeries composed = compose(blown, subs);

    // move t back into the original slot position
    std::vector<int> back(m);
    int pos = 0;
    for (int i = 0; i < m; ++i)
        if (i != slot) back[i] = pos++;
    back[slot] = m - 1;
    return permute_x(composed, back);
}

GeneralizedSeries composition_inverse(const GeneralizedSeries& f) {
    if (f.num_x() != 1 || f.num_y() != 0)
        throw ShapeMismatchError("composition inverse needs a one-variable series");
    LeadingFactor lf = leading_factorization(f);
    if (!(lf.coeff > 0)) throw DomainError("leading coefficient must be positive");
    Value alpha = lf.exponent.value();
    if (alpha.sign() <= 0) throw DomainError("composition inverse needs f(0) = 0");
    Value rho = alpha.inverse();
    double av = alpha.to_double();
    double lam_g = std::pow(lf.coeff, -rho.to_double());

    // g is a function of T with exponents scaled by rho
    Value work_cap = f.cap() * rho;

    // The transformed equation phi(t, y) = 0 is known on the whole box
    // {t-order <= work_cap} x {y-degree <= P}: the y-dependence is exact
    // (binomials), only the t-direction is limited by f's cap. Substituted
    // solutions carry t-order >= sigma per y-power, so y-degrees beyond
    // work_cap / sigma never reach the certified region.
    ExponentScaler sc(f.basis(), rho);
    BasisPtr basis = sc.target();
    int P = 2;
    if (auto tail_ord = lf.tail.order()) {
        double sigma = (rho * *tail_ord).to_double();
        P = static_cast<int>(std::ceil(work_cap.to_double() / std::max(sigma, 1e-6))) + 2;
    }
    Value big_cap = work_cap + Value::integer(P);

    // A(t, y) = h(t^rho (lam_g + y)) expanded termwise over the box
    GeneralizedSeries A = GeneralizedSeries::zero(basis, 1, 1, big_cap);
    for (const auto& [key, c] : lf.tail.terms()) {
        auto e = lf.tail.x_exponent(key, 0);
        auto te = sc.apply(e);
        if (te.value() > work_cap) continue;
        double ev = e.value().to_double();
        double binom = 1.0;
        for (int p = 0; p <= P && binom != 0.0; ++p) {
            A = A + GeneralizedSeries::monomial(basis, 1, 1, big_cap,
                                                c * binom * std::pow(lam_g, ev - p), {te},
                                                {p});
            binom = binomial_next(binom, ev, p);
        }
    }

    // B(y) = (lam_g + y)^alpha
    GeneralizedSeries B = GeneralizedSeries::zero(basis, 1, 1, big_cap);
    {
        double binom = 1.0;
        for (int p = 0; p <= P && binom != 0.0; ++p) {
            B = B + GeneralizedSeries::monomial(basis, 1, 1, big_cap,
                                                binom * std::pow(lam_g, av - p),
                                                {MonoidExponent::zero(basis)}, {p});
            binom = binomial_next(binom, av, p);
        }
    }

    GeneralizedSeries lam_f = GeneralizedSeries::constant(basis, 1, 1, big_cap, lf.coeff);
    GeneralizedSeries phi =
        B * (lam_f + A) - GeneralizedSeries::constant(basis, 1, 1, big_cap, 1.0);
    // kill the rounding residue of lam_g^alpha * lam_f - 1
    phi = phi - GeneralizedSeries::constant(basis, 1, 1, big_cap, phi.constant_term());

    GeneralizedSeries psi = solve_implicit(phi);

    auto rho_exp = MonoidExponent::from_value(basis, rho);
    GeneralizedSeries g =
        (GeneralizedSeries::constant(basis, 1, 0, psi.cap(), lam_g) + psi)
            .mul_monomial(1.0, {rho_exp}, {});
    if (work_cap < g.cap()) g = g.with_cap(work_cap);
    return g;
}

} // namespace gps
