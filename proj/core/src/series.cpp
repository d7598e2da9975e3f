#include "gps/series.hpp"

#include <algorithm>
#include <cmath>

namespace gps {

namespace {

Value key_degree(const BasisPtr& basis, int m, const TermKey& key) {
    const size_t k = basis->size();
    Value deg = Value::rational(0);
    std::vector<long> slice(k);
    for (int i = 0; i < m; ++i) {
        std::copy(key.x.begin() + i * k, key.x.begin() + (i + 1) * k, slice.begin());
        deg += basis->value_of(slice);
    }
    long ysum = 0;
    for (int e : key.y) ysum += e;
    return deg + Value::integer(ysum);
}

} // namespace

GeneralizedSeries GeneralizedSeries::zero(BasisPtr basis, int m, int n, Value cap) {
    GeneralizedSeries s;
    if (m < 0 || n < 0) throw ShapeMismatchError("negative variable count");
    s.basis_ = std::move(basis);
    s.m_ = m;
    s.n_ = n;
    s.cap_ = std::move(cap);
    return s;
}

GeneralizedSeries GeneralizedSeries::constant(BasisPtr basis, int m, int n, Value cap,
                                              double c) {
    GeneralizedSeries s = zero(std::move(basis), m, n, std::move(cap));
    TermKey key{std::vector<long>(m * s.basis_->size(), 0), std::vector<int>(n, 0)};
    s.add_term(std::move(key), c);
    return s;
}

GeneralizedSeries GeneralizedSeries::monomial(BasisPtr basis, int m, int n, Value cap,
                                              double c,
                                              const std::vector<MonoidExponent>& x,
                                              const std::vector<int>& y) {
    if (static_cast<int>(x.size()) != m || static_cast<int>(y.size()) != n)
        throw ShapeMismatchError("monomial exponent tuple has wrong shape");
    GeneralizedSeries s = zero(std::move(basis), m, n, std::move(cap));
    TermKey key;
    key.x.reserve(m * s.basis_->size());
    for (const auto& e : x) {
        if (e.value().sign_class() == SignClass::negative)
            throw DomainError("monomial X-exponent is negative");
        auto re = e.rebase(s.basis_);
        key.x.insert(key.x.end(), re.coeffs().begin(), re.coeffs().end());
    }
    for (int e : y) {
        if (e < 0) throw DomainError("monomial Y-exponent is negative");
        key.y.push_back(e);
    }
    s.add_term(std::move(key), c);
    return s;
}

GeneralizedSeries GeneralizedSeries::x_power(BasisPtr basis, int m, int n, Value cap,
                                             int var, const MonoidExponent& e) {
    if (var < 0 || var >= m) throw IndexError("X index out of range");
    std::vector<MonoidExponent> x;
    for (int i = 0; i < m; ++i)
        x.push_back(i == var ? e : MonoidExponent::zero(basis));
    return monomial(basis, m, n, std::move(cap), 1.0, x, std::vector<int>(n, 0));
}

GeneralizedSeries GeneralizedSeries::y_var(BasisPtr basis, int m, int n, Value cap,
                                           int var) {
    if (var < 0 || var >= n) throw IndexError("Y index out of range");
    std::vector<int> y(n, 0);
    y[var] = 1;
    std::vector<MonoidExponent> x(m, MonoidExponent::zero(basis));
    return monomial(std::move(basis), m, n, std::move(cap), 1.0, x, y);
}

MonoidExponent GeneralizedSeries::x_exponent(const TermKey& key, int i) const {
    const size_t k = basis_->size();
    std::vector<long> slice(key.x.begin() + i * k, key.x.begin() + (i + 1) * k);
    return MonoidExponent::make(basis_, std::move(slice));
}

std::vector<MonoidExponent> GeneralizedSeries::x_exponents(const TermKey& key) const {
    std::vector<MonoidExponent> out;
    out.reserve(m_);
    for (int i = 0; i < m_; ++i) out.push_back(x_exponent(key, i));
    return out;
}

Value GeneralizedSeries::total_degree(const TermKey& key) const {
    return key_degree(basis_, m_, key);
}

std::optional<Value> GeneralizedSeries::order() const {
    std::optional<Value> best;
    for (const auto& [key, c] : terms_) {
        Value d = total_degree(key);
        if (!best || d < *best) best = d;
    }
    return best;
}

double GeneralizedSeries::coeff(const std::vector<MonoidExponent>& x,
                                const std::vector<int>& y) const {
    TermKey key;
    for (const auto& e : x) {
        auto re = e.rebase(basis_);
        key.x.insert(key.x.end(), re.coeffs().begin(), re.coeffs().end());
    }
    key.y.assign(y.begin(), y.end());
    auto it = terms_.find(key);
    return it == terms_.end() ? 0.0 : it->second;
}

double GeneralizedSeries::constant_term() const {
    TermKey key{std::vector<long>(m_ * basis_->size(), 0), std::vector<int>(n_, 0)};
    auto it = terms_.find(key);
    return it == terms_.end() ? 0.0 : it->second;
}

double GeneralizedSeries::max_abs_coeff() const {
    double mx = 0;
    for (const auto& [k, c] : terms_) mx = std::max(mx, std::fabs(c));
    return mx;
}

void GeneralizedSeries::add_term(TermKey key, double c) {
    if (c == 0.0) return;
    Value deg = total_degree(key);
    if ((cap_ - deg).sign_class() == SignClass::negative)
        return; // above the cap: not represented (boundary ties are kept)
    auto [it, inserted] = terms_.try_emplace(std::move(key), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

void GeneralizedSeries::check_compatible(const GeneralizedSeries& a,
                                         const GeneralizedSeries& b) {
    if (a.m_ != b.m_ || a.n_ != b.n_)
        throw ShapeMismatchError("series have different variable shapes");
    if (a.basis_ != b.basis_ && !a.basis_->equivalent(*b.basis_))
        throw BasisMismatchError("series live over different bases");
}

GeneralizedSeries GeneralizedSeries::like_empty(Value cap) const {
    return zero(basis_, m_, n_, std::move(cap));
}

GeneralizedSeries GeneralizedSeries::mul_monomial(double c,
                                                  const std::vector<MonoidExponent>& dx,
                                                  const std::vector<int>& dy) const {
    if (static_cast<int>(dx.size()) != m_ || static_cast<int>(dy.size()) != n_)
        throw ShapeMismatchError("monomial shift has wrong shape");
    Value shift = Value::rational(0);
    for (const auto& e : dx) shift += e.value();
    long ysum = 0;
    for (int e : dy) ysum += e;
    shift += Value::integer(ysum);

    GeneralizedSeries out = like_empty(cap_ + shift);
    const size_t k = basis_->size();
    for (const auto& [key, coeff] : terms_) {
        TermKey nk = key;
        for (int i = 0; i < m_; ++i) {
            auto re = dx[i].rebase(basis_);
            for (size_t j = 0; j < k; ++j) nk.x[i * k + j] += re.coeffs()[j];
        }
        for (int j = 0; j < n_; ++j) nk.y[j] += dy[j];
        out.add_term(std::move(nk), coeff * c);
    }
    return out;
}

GeneralizedSeries linear_combination(double a, const GeneralizedSeries& F, double b,
                                     const GeneralizedSeries& G) {
    GeneralizedSeries::check_compatible(F, G);
    Value cap = F.cap() < G.cap() ? F.cap() : G.cap();
    GeneralizedSeries out = F.like_empty(cap);
    for (const auto& [key, c] : F.terms()) out.add_term(key, a * c);
    for (const auto& [key, c] : G.terms()) out.add_term(key, b * c);
    return out;
}

GeneralizedSeries GeneralizedSeries::scaled(double a) const {
    GeneralizedSeries out = like_empty(cap_);
    if (a == 0.0) return out;
    for (const auto& [key, c] : terms_) out.add_term(key, a * c);
    return out;
}

GeneralizedSeries GeneralizedSeries::with_cap(Value cap) const {
    GeneralizedSeries out = like_empty(std::move(cap));
    for (const auto& [key, c] : terms_) out.add_term(key, c);
    return out;
}

GeneralizedSeries GeneralizedSeries::rebase(const BasisPtr& basis) const {
    if (basis == basis_ || basis->equivalent(*basis_)) return *this;
    GeneralizedSeries out = zero(basis, m_, n_, cap_);
    for (const auto& [key, c] : terms_) {
        TermKey nk;
        nk.y = key.y;
        for (int i = 0; i < m_; ++i) {
            auto re = x_exponent(key, i).rebase(basis);
            nk.x.insert(nk.x.end(), re.coeffs().begin(), re.coeffs().end());
        }
        out.add_term(std::move(nk), c);
    }
    return out;
}

GeneralizedSeries GeneralizedSeries::operator+(const GeneralizedSeries& o) const {
    return linear_combination(1.0, *this, 1.0, o);
}

GeneralizedSeries GeneralizedSeries::operator-(const GeneralizedSeries& o) const {
    return linear_combination(1.0, *this, -1.0, o);
}

GeneralizedSeries GeneralizedSeries::operator*(const GeneralizedSeries& o) const {
    check_compatible(*this, o);
    Value cap = cap_ < o.cap_ ? cap_ : o.cap_;
    GeneralizedSeries out = like_empty(cap);
    for (const auto& [ka, ca] : terms_) {
        for (const auto& [kb, cb] : o.terms_) {
            TermKey nk = ka;
            for (size_t i = 0; i < nk.x.size(); ++i) nk.x[i] += kb.x[i];
            for (size_t i = 0; i < nk.y.size(); ++i) nk.y[i] += kb.y[i];
            out.add_term(std::move(nk), ca * cb);
        }
    }
    return out;
}

// --- elementary sets ---

bool XInterval::contains(const MonoidExponent& e) const {
    if (lo) {
        int c = e.value().compare(lo->value());
        if (c < 0 || (c == 0 && lo_strict)) return false;
    }
    if (hi) {
        int c = e.value().compare(hi->value());
        if (c > 0 || (c == 0 && hi_strict)) return false;
    }
    return true;
}

bool XInterval::empty() const {
    if (!hi) return false;
    Value lo_v = lo ? lo->value() : Value::rational(0);
    int c = hi->value().compare(lo_v);
    if (c < 0) return true;
    return c == 0 && (lo_strict || hi_strict);
}

bool ElementaryBox::contains(const std::vector<MonoidExponent>& xe,
                             const std::vector<int>& ye) const {
    for (size_t i = 0; i < x.size(); ++i)
        if (!x[i].contains(xe[i])) return false;
    for (size_t i = 0; i < y.size(); ++i)
        if (!y[i].contains(ye[i])) return false;
    return true;
}

bool ElementaryBox::empty() const {
    for (const auto& ix : x)
        if (ix.empty()) return true;
    for (const auto& iy : y)
        if (iy.empty()) return true;
    return false;
}

bool ElementaryBox::intersects(const ElementaryBox& o) const {
    if (empty() || o.empty()) return false;
    for (size_t i = 0; i < x.size(); ++i) {
        const auto& a = x[i];
        const auto& b = o.x[i];
        Value lo_v = Value::rational(0);
        bool lo_strict = false;
        for (const XInterval* iv : {&a, &b}) {
            if (!iv->lo) continue;
            int c = iv->lo->value().compare(lo_v);
            if (c > 0) {
                lo_v = iv->lo->value();
                lo_strict = iv->lo_strict;
            } else if (c == 0) {
                lo_strict = lo_strict || iv->lo_strict;
            }
        }
        std::optional<Value> hi_v;
        bool hi_strict = false;
        for (const XInterval* iv : {&a, &b}) {
            if (!iv->hi) continue;
            Value v = iv->hi->value();
            if (!hi_v || v.compare(*hi_v) < 0) {
                hi_v = v;
                hi_strict = iv->hi_strict;
            } else if (v.compare(*hi_v) == 0) {
                hi_strict = hi_strict || iv->hi_strict;
            }
        }
        if (hi_v) {
            int c = hi_v->compare(lo_v);
            if (c < 0 || (c == 0 && (lo_strict || hi_strict))) return false;
        }
    }
    for (size_t i = 0; i < y.size(); ++i) {
        long lo = std::max(y[i].lo, o.y[i].lo);
        std::optional<long> hi;
        if (y[i].hi) hi = *y[i].hi;
        if (o.y[i].hi) hi = hi ? std::min(*hi, *o.y[i].hi) : *o.y[i].hi;
        if (hi && *hi < lo) return false;
    }
    return true;
}

ElementarySet::ElementarySet(BasisPtr basis, int m, int n,
                             std::vector<ElementaryBox> boxes)
    : basis_(std::move(basis)), m_(m), n_(n), boxes_(std::move(boxes)) {
    for (const auto& b : boxes_) {
        if (static_cast<int>(b.x.size()) != m_ || static_cast<int>(b.y.size()) != n_)
            throw ShapeMismatchError("box has wrong shape for the set");
    }
    for (size_t i = 0; i < boxes_.size(); ++i)
        for (size_t j = i + 1; j < boxes_.size(); ++j)
            if (boxes_[i].intersects(boxes_[j]))
                throw DomainError("elementary set boxes are not pairwise disjoint");
}

ElementarySet ElementarySet::from_gamma(int n, const std::vector<MonoidExponent>& gamma) {
    if (gamma.empty()) throw ShapeMismatchError("from_gamma needs at least one exponent");
    ElementaryBox box;
    for (const auto& g : gamma) box.x.push_back(XInterval{g, false, std::nullopt, false});
    box.y.assign(n, YInterval{});
    return ElementarySet(gamma[0].basis(), static_cast<int>(gamma.size()), n, {box});
}

bool ElementarySet::contains(const std::vector<MonoidExponent>& xe,
                             const std::vector<int>& ye) const {
    for (const auto& b : boxes_)
        if (b.contains(xe, ye)) return true;
    return false;
}

std::pair<std::vector<MonoidExponent>, std::vector<int>> ElementarySet::inf() const {
    std::vector<MonoidExponent> a(m_, MonoidExponent::zero(basis_));
    std::vector<int> b(n_, 0);
    bool first = true;
    for (const auto& box : boxes_) {
        if (box.empty()) continue;
        for (int i = 0; i < m_; ++i) {
            MonoidExponent lo = box.x[i].lo ? *box.x[i].lo : MonoidExponent::zero(basis_);
            if (first || lo.value() < a[i].value()) a[i] = lo;
        }
        for (int i = 0; i < n_; ++i) {
            long lo = box.y[i].lo;
            if (first || lo < b[i]) b[i] = static_cast<int>(lo);
        }
        first = false;
    }
    if (first) { // every box empty: inf defaults to 0
        a.assign(m_, MonoidExponent::zero(basis_));
        b.assign(n_, 0);
    }
    return {std::move(a), std::move(b)};
}

GeneralizedSeries truncate_set(const GeneralizedSeries& F, const ElementarySet& S) {
    if (F.num_x() != S.num_x() || F.num_y() != S.num_y())
        throw ShapeMismatchError("set shape does not match the series");
    if (F.basis() != S.basis() && !F.basis()->equivalent(*S.basis()))
        throw BasisMismatchError("set bounds live over a different basis");

    auto [a, b] = S.inf();
    Value shift = Value::rational(0);
    for (const auto& e : a) shift += e.value();
    for (int e : b) shift += Value::integer(e);

    GeneralizedSeries out = F.like_empty(F.cap() - shift);
    for (const auto& [key, c] : F.terms()) {
        auto xe = F.x_exponents(key);
        std::vector<int> ye(key.y.begin(), key.y.end());
        if (!S.contains(xe, ye)) continue;
        TermKey nk;
        for (size_t i = 0; i < xe.size(); ++i) {
            auto shifted = xe[i] - a[i];
            nk.x.insert(nk.x.end(), shifted.coeffs().begin(), shifted.coeffs().end());
        }
        for (size_t i = 0; i < ye.size(); ++i) nk.y.push_back(ye[i] - b[i]);
        out.add_term(std::move(nk), c);
    }
    return out;
}

GeneralizedSeries truncate_at(const GeneralizedSeries& F,
                              const std::vector<MonoidExponent>& gamma) {
    if (static_cast<int>(gamma.size()) != F.num_x())
        throw ShapeMismatchError("gamma has wrong length");
    if (F.num_x() == 0) return F;
    return truncate_set(F, ElementarySet::from_gamma(F.num_y(), gamma));
}

const GeneralizedSeries* GammaRepresentation::find(
    unsigned mask, const std::vector<MonoidExponent>& alpha) const {
    for (const auto& comp : components) {
        if (comp.mask != mask || comp.alpha.size() != alpha.size()) continue;
        bool match = true;
        for (size_t i = 0; i < alpha.size(); ++i)
            if (!comp.alpha[i].same_key(alpha[i])) {
                match = false;
                break;
            }
        if (match) return &comp.series;
    }
    return nullptr;
}

GeneralizedSeries GammaRepresentation::reconstruct(const GeneralizedSeries& like) const {
    GeneralizedSeries out = like.like_empty(like.cap());
    const int m = like.num_x();
    for (const auto& comp : components) {
        std::vector<MonoidExponent> dx;
        dx.reserve(m);
        size_t ai = 0;
        for (int i = 0; i < m; ++i) {
            if (comp.mask & (1u << i))
                dx.push_back(comp.alpha[ai++]);
            else
                dx.push_back(gamma[i]);
        }
        auto shifted = comp.series.mul_monomial(1.0, dx, std::vector<int>(like.num_y(), 0));
        for (const auto& [key, c] : shifted.terms()) out.add_term(key, c);
    }
    return out;
}

GammaRepresentation gamma_representation(const GeneralizedSeries& F,
                                         const std::vector<MonoidExponent>& gamma) {
    const int m = F.num_x();
    if (static_cast<int>(gamma.size()) != m)
        throw ShapeMismatchError("gamma has wrong length");
    if (m > 31) throw ShapeMismatchError("gamma representation limited to m <= 31");

    GammaRepresentation rep;
    rep.gamma = gamma;
    const size_t k = F.basis()->size();

    std::map<std::pair<unsigned, std::vector<long>>, size_t> index;
    for (const auto& [key, c] : F.terms()) {
        auto xe = F.x_exponents(key);
        unsigned mask = 0;
        std::vector<long> akey;
        std::vector<MonoidExponent> alpha;
        for (int i = 0; i < m; ++i) {
            if (xe[i].value() < gamma[i].value()) {
                mask |= 1u << i;
                akey.insert(akey.end(), xe[i].coeffs().begin(), xe[i].coeffs().end());
                alpha.push_back(xe[i]);
            }
        }
        auto it = index.find({mask, akey});
        if (it == index.end()) {
            Value cap = F.cap();
            for (int i = 0; i < m; ++i) {
                if (mask & (1u << i))
                    cap -= xe[i].value();
                else
                    cap -= gamma[i].value();
            }
            GammaComponent comp;
            comp.mask = mask;
            comp.alpha = alpha;
            comp.series = F.like_empty(cap);
            rep.components.push_back(std::move(comp));
            it = index.emplace(std::make_pair(mask, akey), rep.components.size() - 1).first;
        }
        TermKey nk;
        nk.y = key.y;
        nk.x.reserve(m * k);
        for (int i = 0; i < m; ++i) {
            if (mask & (1u << i)) {
                nk.x.insert(nk.x.end(), k, 0L); // component independent of X_i
            } else {
                auto shifted = xe[i] - gamma[i];
                nk.x.insert(nk.x.end(), shifted.coeffs().begin(), shifted.coeffs().end());
            }
        }
        rep.components[it->second].series.add_term(std::move(nk), c);
    }
    return rep;
}

GeneralizedSeries partial_x(const GeneralizedSeries& F, int i) {
    if (i < 0 || i >= F.num_x()) throw IndexError("X index out of range");
    GeneralizedSeries out = F.like_empty(F.cap());
    for (const auto& [key, c] : F.terms()) {
        double a = F.x_exponent(key, i).value().to_double();
        if (a != 0.0) out.add_term(key, c * a);
    }
    return out;
}

GeneralizedSeries partial_y(const GeneralizedSeries& F, int j) {
    if (j < 0 || j >= F.num_y()) throw IndexError("Y index out of range");
    GeneralizedSeries out = F.like_empty(F.cap() - Value::integer(1));
    for (const auto& [key, c] : F.terms()) {
        if (key.y[j] == 0) continue;
        TermKey nk = key;
        nk.y[j] -= 1;
        out.add_term(std::move(nk), c * key.y[j]);
    }
    return out;
}

BoxNormalForm box_normalize(const std::vector<std::vector<MonoidExponent>>& support,
                            const ElementaryBox& box) {
    if (!box.y.empty())
        throw ShapeMismatchError("box_normalize applies to X-space boxes");
    const size_t k = box.x.size();
    BoxNormalForm out;
    if (support.empty()) {
        out.empty = true;
        return out;
    }
    const BasisPtr basis = support.front().at(0).basis();

    std::vector<std::vector<MonoidExponent>> proj(k);
    for (const auto& pt : support) {
        if (pt.size() != k) throw ShapeMismatchError("support point has wrong arity");
        for (size_t i = 0; i < k; ++i) proj[i].push_back(pt[i]);
    }
    for (auto& p : proj) {
        std::sort(p.begin(), p.end(),
                  [](const MonoidExponent& a, const MonoidExponent& b) {
                      return a.compare(b) < 0;
                  });
        p.erase(std::unique(p.begin(), p.end(),
                            [](const MonoidExponent& a, const MonoidExponent& b) {
                                return a.same_key(b);
                            }),
                p.end());
    }

    std::vector<MonoidExponent> gamma, delta;
    for (size_t i = 0; i < k; ++i) {
        const auto& iv = box.x[i];
        const MonoidExponent* g = nullptr;
        for (const auto& r : proj[i]) {
            bool ok = true;
            if (iv.lo) {
                int c = r.value().compare(iv.lo->value());
                ok = c > 0 || (c == 0 && !iv.lo_strict);
            }
            if (ok) {
                g = &r;
                break;
            }
        }
        const MonoidExponent* d = nullptr;
        for (auto it = proj[i].rbegin(); it != proj[i].rend(); ++it) {
            bool ok = true;
            if (iv.hi) {
                int c = it->value().compare(iv.hi->value());
                ok = c < 0 || (c == 0 && !iv.hi_strict);
            }
            if (ok) {
                d = &*it;
                break;
            }
        }
        if (!g || !d || g->value() > d->value()) {
            out.empty = true;
            out.gamma.assign(k, MonoidExponent::zero(basis));
            out.deltas.clear();
            return out;
        }
        gamma.push_back(*g);
        delta.push_back(*d);
    }
    out.gamma = gamma;

    for (size_t j = 0; j < k; ++j) {
        if (!box.x[j].hi) continue; // unbounded above: nothing to carve out
        std::vector<std::optional<MonoidExponent>> dj;
        for (size_t i = 0; i < k; ++i) {
            if (i != j) {
                dj.emplace_back(gamma[i]);
                continue;
            }
            const MonoidExponent* next = nullptr;
            for (const auto& r : proj[j]) {
                if (r.value() > delta[j].value()) {
                    next = &r;
                    break;
                }
            }
            if (next)
                dj.emplace_back(*next);
            else
                dj.emplace_back(std::nullopt); // +infinity sentinel
        }
        out.deltas.push_back(std::move(dj));
    }
    return out;
}

double evaluate(const GeneralizedSeries& F, const std::vector<double>& x,
                const std::vector<double>& y) {
    if (static_cast<int>(x.size()) != F.num_x() || static_cast<int>(y.size()) != F.num_y())
        throw ShapeMismatchError("evaluation point has wrong shape");
    double sum = 0;
    for (const auto& [key, c] : F.terms()) {
        double t = c;
        for (int i = 0; i < F.num_x(); ++i) {
            double a = F.x_exponent(key, i).value().to_double();
            if (a != 0.0) t *= std::pow(x[i], a);
        }
        for (int j = 0; j < F.num_y(); ++j)
            for (int e = 0; e < key.y[j]; ++e) t *= y[j];
        sum += t;
    }
    return sum;
}

double max_coeff_delta(const GeneralizedSeries& F, const GeneralizedSeries& G) {
    GeneralizedSeries::check_compatible(F, G);
    double mx = 0;
    for (const auto& [key, c] : F.terms()) {
        auto it = G.terms().find(key);
        double d = it == G.terms().end() ? c : c - it->second;
        mx = std::max(mx, std::fabs(d));
    }
    for (const auto& [key, c] : G.terms()) {
        if (!F.terms().count(key)) mx = std::max(mx, std::fabs(c));
    }
    return mx;
}

} // namespace gps
