#include "gps/monoid.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace gps {

namespace {

// extended gcd: g = a*x + b*y, g >= 0
void xgcd(const BigInt& a, const BigInt& b, BigInt& g, BigInt& x, BigInt& y) {
    if (b == 0) {
        g = abs(a);
        x = a < 0 ? -1 : 1;
        y = 0;
        return;
    }
    BigInt x1, y1;
    xgcd(b, a % b, g, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
}

bool fits_long(const BigInt& v) {
    static const BigInt lo = std::numeric_limits<long>::min();
    static const BigInt hi = std::numeric_limits<long>::max();
    return v >= lo && v <= hi;
}

long to_long_checked(const BigInt& v) {
    if (!fits_long(v)) throw DomainError("exponent coefficient overflow");
    return v.convert_to<long>();
}

} // namespace

BasisPtr GeneratorBasis::create(std::vector<Value> generators, bool independence_assumed) {
    if (generators.empty() || !(generators[0].is_rational() && generators[0].as_rational() == 1))
        throw DomainError("generator 0 must be 1");
    for (const auto& g : generators) {
        if (g.sign_class() != SignClass::positive)
            throw DomainError("generators must be positive");
    }
    for (size_t i = 0; i < generators.size(); ++i)
        for (size_t j = i + 1; j < generators.size(); ++j) {
            bool equal;
            try {
                equal = generators[i].compare(generators[j]) == 0;
            } catch (const AmbiguityError&) {
                equal = true; // indistinguishable within tolerance
            }
            if (equal) throw DomainError("two basis generators are equal");
        }

    auto b = std::shared_ptr<GeneratorBasis>(new GeneratorBasis());
    b->gens_ = std::move(generators);
    b->independence_assumed_ = independence_assumed;
    b->build_lattice();
    return b;
}

BasisPtr GeneratorBasis::trivial() {
    static BasisPtr t = create({Value::integer(1)});
    return t;
}

void GeneratorBasis::build_lattice() {
    exact_ = true;
    disc_ = 1;
    for (const auto& g : gens_) {
        if (!g.is_exact()) {
            exact_ = false;
            break;
        }
        if (g.quad_part() != 0) {
            if (disc_ == 1)
                disc_ = g.discriminant();
            else if (disc_ != g.discriminant()) {
                exact_ = false; // two distinct quadratic fields
                break;
            }
        }
    }
    if (!exact_) return;

    const size_t k = gens_.size();
    scale_ = 1;
    for (const auto& g : gens_) {
        scale_ = lcm(scale_, BigInt(denominator(g.rat_part())));
        scale_ = lcm(scale_, BigInt(denominator(g.quad_part())));
    }
    gen_vec_.resize(k);
    std::vector<std::array<BigInt, 2>> cols(k);
    for (size_t i = 0; i < k; ++i) {
        Rational ar = gens_[i].rat_part() * Rational(scale_);
        Rational br = gens_[i].quad_part() * Rational(scale_);
        gen_vec_[i] = {BigInt(numerator(ar)), BigInt(numerator(br))};
        cols[i] = gen_vec_[i];
    }

    u_.assign(k, std::vector<BigInt>(k, 0));
    for (size_t i = 0; i < k; ++i) u_[i][i] = 1;

    auto combine = [&](size_t ci, size_t cj, int row) {
        // column ops making cols[cj][row] = 0, cols[ci][row] = gcd
        BigInt a = cols[ci][row], bb = cols[cj][row];
        BigInt g, x, y;
        xgcd(a, bb, g, x, y);
        BigInt p = -(bb / g), q = a / g; // det of [[x,p],[y,q]] = 1
        for (int r = 0; r < 2; ++r) {
            BigInt ni = x * cols[ci][r] + y * cols[cj][r];
            BigInt nj = p * cols[ci][r] + q * cols[cj][r];
            cols[ci][r] = ni;
            cols[cj][r] = nj;
        }
        for (size_t r = 0; r < k; ++r) {
            BigInt ni = x * u_[ci][r] + y * u_[cj][r];
            BigInt nj = p * u_[ci][r] + q * u_[cj][r];
            u_[ci][r] = ni;
            u_[cj][r] = nj;
        }
    };
    auto swap_cols = [&](size_t i, size_t j) {
        std::swap(cols[i], cols[j]);
        std::swap(u_[i], u_[j]);
    };
    auto negate_col = [&](size_t i) {
        cols[i][0] = -cols[i][0];
        cols[i][1] = -cols[i][1];
        for (auto& e : u_[i]) e = -e;
    };

    // pivot for row 0
    size_t p0 = k;
    for (size_t i = 0; i < k; ++i)
        if (cols[i][0] != 0) {
            p0 = i;
            break;
        }
    // generator 0 is 1, so p0 exists
    for (size_t j = p0 + 1; j < k; ++j)
        if (cols[j][0] != 0) combine(p0, j, 0);
    if (p0 != 0) swap_cols(p0, 0);
    if (cols[0][0] < 0) negate_col(0);

    // pivot for row 1 among the remaining columns
    rank_ = 1;
    size_t p1 = k;
    for (size_t i = 1; i < k; ++i)
        if (cols[i][1] != 0) {
            p1 = i;
            break;
        }
    if (p1 != k) {
        for (size_t j = p1 + 1; j < k; ++j)
            if (cols[j][1] != 0) combine(p1, j, 1);
        if (p1 != 1) swap_cols(p1, 1);
        if (cols[1][1] < 0) negate_col(1);
        rank_ = 2;
        // reduce the row-1 entry of column 0 modulo the pivot
        BigInt q = cols[0][1] / cols[1][1];
        if (cols[0][1] - q * cols[1][1] < 0) q -= 1;
        if (q != 0) {
            for (int r = 0; r < 2; ++r) cols[0][r] -= q * cols[1][r];
            for (size_t r = 0; r < k; ++r) u_[0][r] -= q * u_[1][r];
        }
    }

    hnf_[0][0] = cols[0][0];
    hnf_[1][0] = cols[0][1];
    hnf_[0][1] = 0;
    hnf_[1][1] = rank_ == 2 ? cols[1][1] : BigInt(0);
}

Value GeneratorBasis::value_of(const std::vector<long>& coeffs) const {
    if (coeffs.size() != gens_.size())
        throw BasisMismatchError("coefficient vector has wrong length");
    Value v = Value::rational(0);
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0) v += gens_[i].scaled(coeffs[i]);
    return v;
}

std::vector<long> GeneratorBasis::canonicalize(std::vector<long> coeffs) const {
    if (coeffs.size() != gens_.size())
        throw BasisMismatchError("coefficient vector has wrong length");
    if (!exact_) return coeffs;
    const size_t k = gens_.size();
    std::array<BigInt, 2> p{BigInt(0), BigInt(0)};
    for (size_t i = 0; i < k; ++i)
        for (int r = 0; r < 2; ++r) p[r] += BigInt(coeffs[i]) * gen_vec_[i][r];

    BigInt y0 = p[0] / hnf_[0][0]; // exact by lattice membership
    BigInt rem1 = p[1] - y0 * hnf_[1][0];
    BigInt y1 = 0;
    if (rank_ == 2) y1 = rem1 / hnf_[1][1];

    std::vector<long> out(k, 0);
    for (size_t r = 0; r < k; ++r)
        out[r] = to_long_checked(y0 * u_[0][r] + (rank_ == 2 ? y1 * u_[1][r] : BigInt(0)));
    return out;
}

std::optional<std::vector<long>> GeneratorBasis::express(const Value& v) const {
    const size_t k = gens_.size();
    if (v.is_zero()) return std::vector<long>(k, 0);
    if (exact_ && v.is_exact()) {
        if (v.quad_part() != 0 && v.discriminant() != disc_) return std::nullopt;
        Rational pr = v.rat_part() * Rational(scale_);
        Rational qr = v.quad_part() * Rational(scale_);
        if (denominator(pr) != 1 || denominator(qr) != 1) return std::nullopt;
        std::array<BigInt, 2> p{BigInt(numerator(pr)), BigInt(numerator(qr))};
        if (p[0] % hnf_[0][0] != 0) return std::nullopt;
        BigInt y0 = p[0] / hnf_[0][0];
        BigInt rem1 = p[1] - y0 * hnf_[1][0];
        BigInt y1 = 0;
        if (rank_ == 2) {
            if (rem1 % hnf_[1][1] != 0) return std::nullopt;
            y1 = rem1 / hnf_[1][1];
        } else if (rem1 != 0) {
            return std::nullopt;
        }
        std::vector<long> out(k, 0);
        for (size_t r = 0; r < k; ++r) {
            BigInt c = y0 * u_[0][r] + (rank_ == 2 ? y1 * u_[1][r] : BigInt(0));
            if (!fits_long(c)) return std::nullopt;
            out[r] = c.convert_to<long>();
        }
        return out;
    }
    // float mode: only direct generator matches are recognized
    for (size_t i = 0; i < k; ++i)
        if (v.identical(gens_[i])) {
            std::vector<long> out(k, 0);
            out[i] = 1;
            return out;
        }
    return std::nullopt;
}

bool GeneratorBasis::equivalent(const GeneratorBasis& o) const {
    if (gens_.size() != o.gens_.size()) return false;
    for (size_t i = 0; i < gens_.size(); ++i)
        if (!gens_[i].identical(o.gens_[i])) return false;
    return true;
}

std::string GeneratorBasis::to_string() const {
    std::string s = "<";
    for (size_t i = 0; i < gens_.size(); ++i) {
        if (i) s += ", ";
        s += gens_[i].to_string();
    }
    return s + ">";
}

BasisPtr GeneratorBasis::extended(const BasisPtr& base, const std::vector<Value>& values) {
    std::vector<Value> missing;
    for (const auto& v : values) {
        if (base->express(v)) continue;
        bool dup = false;
        for (const auto& m : missing) {
            bool equal;
            try {
                equal = m.compare(v) == 0;
            } catch (const AmbiguityError&) {
                equal = true;
            }
            if (equal) {
                dup = true;
                break;
            }
        }
        if (!dup) missing.push_back(v);
    }
    if (missing.empty()) return base;
    std::vector<Value> gens;
    gens.reserve(base->size() + missing.size());
    for (size_t i = 0; i < base->size(); ++i) gens.push_back(base->generator(i));
    for (auto& v : missing) {
        if (v.sign_class() != SignClass::positive)
            throw DomainError("basis extension value must be positive");
        gens.push_back(std::move(v));
    }
    return create(std::move(gens), base->independence_assumed());
}

// ---------------------------------------------------------------------------

MonoidExponent MonoidExponent::make(BasisPtr basis, std::vector<long> coeffs) {
    MonoidExponent e = group_element(std::move(basis), std::move(coeffs));
    switch (e.value_.sign_class()) {
    case SignClass::negative:
        throw DomainError("exponent value is negative: " + e.value_.to_string());
    case SignClass::ambiguous:
        if (!e.is_zero())
            throw AmbiguityError("exponent value within tolerance of zero");
        break;
    default:
        break;
    }
    return e;
}

MonoidExponent MonoidExponent::group_element(BasisPtr basis, std::vector<long> coeffs) {
    MonoidExponent e;
    e.coeffs_ = basis->canonicalize(std::move(coeffs));
    e.value_ = basis->value_of(e.coeffs_);
    e.basis_ = std::move(basis);
    return e;
}

MonoidExponent MonoidExponent::zero(BasisPtr basis) {
    return group_element(std::move(basis), std::vector<long>(basis ? basis->size() : 0, 0));
}

MonoidExponent MonoidExponent::from_value(BasisPtr basis, const Value& v) {
    auto coeffs = basis->express(v);
    if (!coeffs)
        throw DomainError("value " + v.to_string() + " is not representable over basis " +
                          basis->to_string());
    return make(std::move(basis), std::move(*coeffs));
}

bool MonoidExponent::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](long c) { return c == 0; });
}

namespace {
void ensure_same_basis(const MonoidExponent& a, const MonoidExponent& b) {
    if (a.basis() == b.basis()) return;
    if (a.basis() && b.basis() && a.basis()->equivalent(*b.basis())) return;
    throw BasisMismatchError("exponents live over different bases");
}
} // namespace

MonoidExponent MonoidExponent::operator+(const MonoidExponent& o) const {
    ensure_same_basis(*this, o);
    std::vector<long> c(coeffs_);
    for (size_t i = 0; i < c.size(); ++i) c[i] += o.coeffs_[i];
    return group_element(basis_, std::move(c));
}

MonoidExponent MonoidExponent::operator-(const MonoidExponent& o) const {
    ensure_same_basis(*this, o);
    std::vector<long> c(coeffs_);
    for (size_t i = 0; i < c.size(); ++i) c[i] -= o.coeffs_[i];
    return make(basis_, std::move(c));
}

int MonoidExponent::compare(const MonoidExponent& o) const {
    ensure_same_basis(*this, o);
    if (same_key(o)) return 0;
    Value d = value_ - o.value_;
    switch (d.sign_class()) {
    case SignClass::negative: return -1;
    case SignClass::positive: return 1;
    default:
        throw AmbiguityError("exponent collision: " + to_string() + " vs " + o.to_string());
    }
}

bool MonoidExponent::same_key(const MonoidExponent& o) const {
    return coeffs_ == o.coeffs_;
}

MonoidExponent MonoidExponent::rebase(const BasisPtr& basis) const {
    if (basis == basis_ || basis->equivalent(*basis_)) return *this;
    std::vector<long> c(basis->size(), 0);
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        auto rep = basis->express(basis_->generator(i));
        if (!rep)
            throw BasisMismatchError("generator " + basis_->generator(i).to_string() +
                                     " is not representable in " + basis->to_string());
        for (size_t j = 0; j < c.size(); ++j) c[j] += coeffs_[i] * (*rep)[j];
    }
    return group_element(basis, std::move(c));
}

std::string MonoidExponent::to_string() const {
    std::string s;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        std::string name = basis_->generator(i).to_string();
        if (name.find_first_of("+- ") != std::string::npos) name = "(" + name + ")";
        if (i == 0) {
            s = std::to_string(coeffs_[0]) + "*" + name;
        } else if (coeffs_[i] >= 0) {
            s += " + " + std::to_string(coeffs_[i]) + "*" + name;
        } else {
            s += " - " + std::to_string(-coeffs_[i]) + "*" + name;
        }
    }
    return s;
}

MonoidExponent parse_exponent(const BasisPtr& basis, const std::string& text) {
    // positional coefficient form first
    auto strip = [](std::string s) {
        s.erase(std::remove_if(s.begin(), s.end(),
                               [](unsigned char c) { return std::isspace(c); }),
                s.end());
        return s;
    };
    const size_t k = basis->size();
    std::string t = strip(text);
    std::vector<long> coeffs;
    size_t pos = 0;
    bool positional = true;
    for (size_t i = 0; i < k && positional; ++i) {
        long sign = 1;
        if (i > 0) {
            if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) {
                sign = t[pos] == '-' ? -1 : 1;
                ++pos;
            } else {
                positional = false;
                break;
            }
        } else if (pos < t.size() && t[pos] == '-') {
            sign = -1;
            ++pos;
        }
        size_t start = pos;
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
        if (pos == start || pos >= t.size() || t[pos] != '*') {
            positional = false;
            break;
        }
        long mag = std::stol(t.substr(start, pos - start));
        ++pos; // '*'
        // generator name: up to the next top-level +/-
        int depth = 0;
        size_t name_start = pos;
        while (pos < t.size() && (depth > 0 || (t[pos] != '+' && t[pos] != '-'))) {
            if (t[pos] == '(') ++depth;
            if (t[pos] == ')') --depth;
            ++pos;
        }
        std::string name = t.substr(name_start, pos - name_start);
        if (!name.empty() && name.front() == '(' && name.back() == ')')
            name = name.substr(1, name.size() - 2);
        if (name != strip(basis->generator(i).to_string())) {
            positional = false;
            break;
        }
        coeffs.push_back(sign * mag);
    }
    if (positional && coeffs.size() == k && pos == t.size())
        return MonoidExponent::make(basis, std::move(coeffs));

    // fall back to a bare value expression
    return MonoidExponent::from_value(basis, parse_value(text));
}

} // namespace gps
