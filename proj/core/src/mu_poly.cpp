#include "gps/mu_poly.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace gps {

MuPoly::MuPoly(int p, double c) : p_(p) {
    if (c != 0.0) terms_.emplace(std::vector<int>(p, 0), c);
}

MuPoly MuPoly::variable(int p, int i) {
    if (i < 0 || i >= p) throw IndexError("parameter index out of range");
    MuPoly m(p);
    std::vector<int> e(p, 0);
    e[i] = 1;
    m.terms_.emplace(std::move(e), 1.0);
    return m;
}

bool MuPoly::is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 &&
            std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                        [](int e) { return e == 0; }));
}

double MuPoly::constant() const {
    auto it = terms_.find(std::vector<int>(p_, 0));
    return it == terms_.end() ? 0.0 : it->second;
}

int MuPoly::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (int v : e) s += v;
        d = std::max(d, s);
    }
    return d;
}

void MuPoly::add_term(std::vector<int> expo, double c) {
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(expo), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

MuPoly MuPoly::operator+(const MuPoly& o) const {
    MuPoly out(std::max(p_, o.p_));
    for (const auto& [e, c] : terms_) out.add_term(e, c);
    for (const auto& [e, c] : o.terms_) out.add_term(e, c);
    return out;
}

MuPoly MuPoly::operator-(const MuPoly& o) const { return *this + o.scaled(-1.0); }

MuPoly MuPoly::operator*(const MuPoly& o) const {
    MuPoly out(std::max(p_, o.p_));
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            std::vector<int> e = ea;
            for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
            out.add_term(std::move(e), ca * cb);
        }
    return out;
}

MuPoly MuPoly::scaled(double a) const {
    MuPoly out(p_);
    if (a == 0.0) return out;
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, c * a);
    return out;
}

double MuPoly::eval(std::span<const double> mu) const {
    if (static_cast<int>(mu.size()) < p_)
        throw ShapeMismatchError("parameter vector too short");
    double sum = 0;
    for (const auto& [e, c] : terms_) {
        double t = c;
        for (size_t i = 0; i < e.size(); ++i)
            for (int q = 0; q < e[i]; ++q) t *= mu[i];
        sum += t;
    }
    return sum;
}

std::string MuPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        double mag = first ? c : std::fabs(c);
        if (!first) os << (c < 0 ? " - " : " + ");
        os << mag;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            os << "*mu" << i + 1;
            if (e[i] > 1) os << "^" << e[i];
        }
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------------------

ParamSeries2 ParamSeries2::constant(int p, int cap, MuPoly c) {
    ParamSeries2 s(p, cap);
    s.add_term(0, 0, c);
    return s;
}

ParamSeries2 ParamSeries2::variable(int p, int cap, int which) {
    ParamSeries2 s(p, cap);
    s.add_term(which == 0 ? 1 : 0, which == 0 ? 0 : 1, MuPoly(p, 1.0));
    return s;
}

const MuPoly* ParamSeries2::coeff(int i, int j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? nullptr : &it->second;
}

void ParamSeries2::add_term(int i, int j, const MuPoly& c) {
    if (c.is_zero() || i + j > cap_) return;
    auto [it, inserted] = terms_.try_emplace({i, j}, c);
    if (!inserted) {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

ParamSeries2 ParamSeries2::operator+(const ParamSeries2& o) const {
    ParamSeries2 out(std::max(p_, o.p_), std::min(cap_, o.cap_));
    for (const auto& [k, c] : terms_) out.add_term(k.first, k.second, c);
    for (const auto& [k, c] : o.terms_) out.add_term(k.first, k.second, c);
    return out;
}

ParamSeries2 ParamSeries2::operator-(const ParamSeries2& o) const {
    return *this + o.scaled(-1.0);
}

ParamSeries2 ParamSeries2::operator*(const ParamSeries2& o) const {
    ParamSeries2 out(std::max(p_, o.p_), std::min(cap_, o.cap_));
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : o.terms_)
            out.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return out;
}

ParamSeries2 ParamSeries2::scaled(const MuPoly& a) const {
    ParamSeries2 out(std::max(p_, a.params()), cap_);
    for (const auto& [k, c] : terms_) out.add_term(k.first, k.second, c * a);
    return out;
}

ParamSeries2 ParamSeries2::scaled(double a) const {
    ParamSeries2 out(p_, cap_);
    if (a == 0.0) return out;
    for (const auto& [k, c] : terms_) out.add_term(k.first, k.second, c.scaled(a));
    return out;
}

ParamSeries2 ParamSeries2::truncated(int cap) const {
    ParamSeries2 out(p_, cap);
    for (const auto& [k, c] : terms_) out.add_term(k.first, k.second, c);
    return out;
}

ParamSeries2 ParamSeries2::dx() const {
    ParamSeries2 out(p_, cap_ - 1);
    for (const auto& [k, c] : terms_)
        if (k.first > 0) out.add_term(k.first - 1, k.second, c.scaled(k.first));
    return out;
}

ParamSeries2 ParamSeries2::dy() const {
    ParamSeries2 out(p_, cap_ - 1);
    for (const auto& [k, c] : terms_)
        if (k.second > 0) out.add_term(k.first, k.second - 1, c.scaled(k.second));
    return out;
}

ParamSeries2 ParamSeries2::substitute(const ParamSeries2& sx, const ParamSeries2& sy) const {
    if (sx.coeff(0, 0) || sy.coeff(0, 0))
        throw DomainError("substituted series must have zero constant term");
    int cap = std::min({cap_, sx.cap_, sy.cap_});
    int p = std::max({p_, sx.p_, sy.p_});
    ParamSeries2 out(p, cap);

    std::vector<ParamSeries2> xpow{ParamSeries2::constant(p, cap, MuPoly(p, 1.0))};
    std::vector<ParamSeries2> ypow{ParamSeries2::constant(p, cap, MuPoly(p, 1.0))};
    auto power = [&](std::vector<ParamSeries2>& pows, const ParamSeries2& base, int e)
        -> const ParamSeries2& {
        while (static_cast<int>(pows.size()) <= e) pows.push_back(pows.back() * base);
        return pows[e];
    };
    for (const auto& [k, c] : terms_) {
        if (k.first + k.second > cap) continue;
        auto term = power(xpow, sx, k.first) * power(ypow, sy, k.second);
        out = out + term.scaled(c);
    }
    return out;
}

ParamSeries2 ParamSeries2::reciprocal_unit() const {
    const MuPoly* c0 = coeff(0, 0);
    if (!c0 || !c0->is_constant() || c0->constant() == 0.0)
        throw DomainError("reciprocal needs a nonzero scalar constant term");
    double c = c0->constant();
    ParamSeries2 one = constant(p_, cap_, MuPoly(p_, 1.0));
    ParamSeries2 N = one - scaled(1.0 / c);
    ParamSeries2 sum = one;
    ParamSeries2 pw = N;
    for (int k = 0; k < cap_ && !pw.is_zero(); ++k) {
        sum = sum + pw;
        pw = pw * N;
    }
    return sum.scaled(1.0 / c);
}

ParamSeries2 ParamSeries2::slice(int d) const {
    ParamSeries2 out(p_, cap_);
    for (const auto& [k, c] : terms_)
        if (k.first + k.second == d) out.add_term(k.first, k.second, c);
    return out;
}

int ParamSeries2::order() const {
    int best = cap_ + 1;
    for (const auto& [k, c] : terms_) best = std::min(best, k.first + k.second);
    return best;
}

double ParamSeries2::eval(double x, double y, std::span<const double> mu) const {
    double sum = 0;
    for (const auto& [k, c] : terms_) {
        double t = c.eval(mu);
        for (int q = 0; q < k.first; ++q) t *= x;
        for (int q = 0; q < k.second; ++q) t *= y;
        sum += t;
    }
    return sum;
}

ParamSeries2 ParamSeries2::at_mu(std::span<const double> mu) const {
    ParamSeries2 out(0, cap_);
    for (const auto& [k, c] : terms_) out.add_term(k.first, k.second, MuPoly(0, c.eval(mu)));
    return out;
}

std::string ParamSeries2::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        os << "(" << c.to_string() << ")";
        if (k.first) os << "*x^" << k.first;
        if (k.second) os << "*y^" << k.second;
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------------------

ParamMap2 ParamMap2::identity(int p, int cap) {
    return {ParamSeries2::variable(p, cap, 0), ParamSeries2::variable(p, cap, 1)};
}

bool ParamMap2::near_identity() const {
    const MuPoly* xx = x.coeff(1, 0);
    const MuPoly* xy = x.coeff(0, 1);
    const MuPoly* yx = y.coeff(1, 0);
    const MuPoly* yy = y.coeff(0, 1);
    auto is_one = [](const MuPoly* m) {
        return m && m->is_constant() && m->constant() == 1.0;
    };
    return is_one(xx) && is_one(yy) && !xy && !yx && !x.coeff(0, 0) && !y.coeff(0, 0) &&
           x.order() >= 1 && y.order() >= 1;
}

ParamMap2 ParamMap2::after(const ParamMap2& o) const {
    return {x.substitute(o.x, o.y), y.substitute(o.x, o.y)};
}

ParamMap2 ParamMap2::inverse() const {
    if (!near_identity())
        throw DomainError("inverse is implemented for near-identity maps only");
    int cap = std::min(x.cap(), y.cap());
    int p = std::max(x.params(), y.params());
    ParamMap2 id = identity(p, cap);
    ParamMap2 nonlin{x - id.x, y - id.y};
    ParamMap2 inv = id;
    for (int k = 0; k <= cap; ++k) {
        ParamMap2 corr = nonlin.after(inv);
        ParamMap2 next{id.x - corr.x, id.y - corr.y};
        bool settled = next.x.terms() == inv.x.terms() && next.y.terms() == inv.y.terms();
        inv = std::move(next);
        if (settled) break;
    }
    return inv;
}

std::array<double, 2> ParamMap2::eval(double u, double v,
                                      std::span<const double> mu) const {
    return {x.eval(u, v, mu), y.eval(u, v, mu)};
}

ParamMap2 push_forward(const ParamMap2& field, const ParamMap2& change) {
    // G(u) = (DC(u))^{-1} F(C(u)) for C = change (old from new, near-identity)
    if (!change.near_identity())
        throw DomainError("push_forward expects a near-identity change");
    ParamSeries2 a = change.x.dx(), b = change.x.dy();
    ParamSeries2 c = change.y.dx(), d = change.y.dy();
    ParamSeries2 det = a * d - b * c;
    ParamSeries2 det_inv = det.reciprocal_unit();

    ParamSeries2 Fx = field.x.substitute(change.x, change.y);
    ParamSeries2 Fy = field.y.substitute(change.x, change.y);

    ParamMap2 out;
    out.x = (d * Fx - b * Fy) * det_inv;
    out.y = (a * Fy - c * Fx) * det_inv;
    return out;
}

} // namespace gps
