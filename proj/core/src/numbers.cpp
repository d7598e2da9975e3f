#include "gps/numbers.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <sstream>

namespace gps {

namespace {

unsigned g_precision_bits = 200;

unsigned digits10_for_bits(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.3010299956639812)) + 2;
}

struct PrecisionInit {
    PrecisionInit() { BigFloat::default_precision(digits10_for_bits(200)); }
};
PrecisionInit g_precision_init;

// n = s^2 * d with d squarefree (trial division; large leftovers are treated
// as squarefree, which is adequate for the small radicands in practice).
void squarefree_decompose(BigInt n, BigInt& s, BigInt& d) {
    s = 1;
    d = 1;
    for (BigInt p = 2; p * p <= n && p < 1000000; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) s *= p;
        if (e % 2 == 1) d *= p;
    }
    if (n > 1) {
        BigInt r = sqrt(n);
        if (r * r == n)
            s *= r;
        else
            d *= n;
    }
}

} // namespace

void set_float_precision_bits(unsigned bits) {
    g_precision_bits = bits;
    BigFloat::default_precision(digits10_for_bits(bits));
}

unsigned float_precision_bits() { return g_precision_bits; }

const BigFloat& collision_tolerance() {
    static const BigFloat tol = [] {
        BigFloat t = 1;
        return t / pow(BigFloat(2), 100);
    }();
    return tol;
}

Value Value::rational(Rational a) {
    Value v;
    v.exact_ = true;
    v.disc_ = 1;
    v.a_ = std::move(a);
    v.b_ = 0;
    return v;
}

Value Value::quadratic(Rational a, Rational b, const BigInt& disc) {
    if (disc <= 0) throw DomainError("quadratic discriminant must be positive");
    if (b == 0 || disc == 1) return rational(std::move(a));
    BigInt s, d;
    squarefree_decompose(disc, s, d);
    if (d == 1) return rational(a + b * Rational(s));
    Value v;
    v.exact_ = true;
    v.disc_ = d;
    v.a_ = std::move(a);
    v.b_ = b * Rational(s);
    return v;
}

Value Value::approx(BigFloat f) {
    Value v;
    v.exact_ = false;
    v.disc_ = 1;
    v.f_ = std::move(f);
    return v;
}

Value Value::sqrt_rational(const Rational& r) {
    if (r < 0) throw DomainError("sqrt of a negative rational");
    if (r == 0) return rational(0);
    BigInt n = numerator(r) * denominator(r);
    return quadratic(0, Rational(1, denominator(r)), n);
}

Rational Value::as_rational() const {
    if (!is_rational()) throw DomainError("value is not rational: " + to_string());
    return a_;
}

Value Value::operator+(const Value& o) const {
    if (exact_ && o.exact_) {
        if (b_ == 0) return quadratic(a_ + o.a_, o.b_, o.disc_);
        if (o.b_ == 0) return quadratic(a_ + o.a_, b_, disc_);
        if (disc_ == o.disc_) return quadratic(a_ + o.a_, b_ + o.b_, disc_);
    }
    return approx(to_float() + o.to_float());
}

Value Value::operator-(const Value& o) const { return *this + (-o); }

Value Value::operator-() const {
    if (exact_) return quadratic(-a_, -b_, disc_);
    return approx(-f_);
}

Value Value::operator*(const Value& o) const {
    if (exact_ && o.exact_) {
        if (b_ == 0)
            return quadratic(a_ * o.a_, a_ * o.b_, o.disc_);
        if (o.b_ == 0)
            return quadratic(a_ * o.a_, b_ * o.a_, disc_);
        if (disc_ == o.disc_)
            return quadratic(a_ * o.a_ + b_ * o.b_ * Rational(disc_),
                             a_ * o.b_ + b_ * o.a_, disc_);
    }
    return approx(to_float() * o.to_float());
}

Value Value::div_rational(const Rational& r) const {
    if (r == 0) throw DomainError("division by zero");
    if (exact_) return quadratic(a_ / r, b_ / r, disc_);
    return approx(f_ / BigFloat(r));
}

Value Value::inverse() const {
    if (is_zero()) throw DomainError("inverse of zero");
    if (exact_) {
        if (b_ == 0) return rational(Rational(1) / a_);
        // 1/(a + b sqrt(D)) = (a - b sqrt(D)) / (a^2 - b^2 D)
        Rational norm = a_ * a_ - b_ * b_ * Rational(disc_);
        return quadratic(a_ / norm, -b_ / norm, disc_);
    }
    return approx(1 / f_);
}

Value Value::scaled(long k) const {
    if (exact_) return quadratic(a_ * k, b_ * k, disc_);
    return approx(f_ * k);
}

SignClass Value::sign_class() const {
    if (exact_) {
        if (b_ == 0) {
            int s = a_.sign();
            return s < 0 ? SignClass::negative
                         : (s > 0 ? SignClass::positive : SignClass::zero);
        }
        if (a_ == 0)
            return b_ > 0 ? SignClass::positive : SignClass::negative;
        if (a_ > 0 && b_ > 0) return SignClass::positive;
        if (a_ < 0 && b_ < 0) return SignClass::negative;
        // opposite signs: a + b*sqrt(D) has the sign of the larger square
        Rational lhs = a_ * a_, rhs = b_ * b_ * Rational(disc_);
        // sqrt(D) irrational => lhs != rhs here
        bool rational_side_wins = lhs > rhs;
        if (a_ > 0) return rational_side_wins ? SignClass::positive : SignClass::negative;
        return rational_side_wins ? SignClass::negative : SignClass::positive;
    }
    if (f_ == 0) return SignClass::zero;
    if (abs(f_) < collision_tolerance()) return SignClass::ambiguous;
    return f_ < 0 ? SignClass::negative : SignClass::positive;
}

int Value::sign() const {
    switch (sign_class()) {
    case SignClass::negative: return -1;
    case SignClass::zero: return 0;
    case SignClass::positive: return 1;
    default:
        throw AmbiguityError("value within collision tolerance of zero: " + to_string());
    }
}

bool Value::identical(const Value& o) const {
    if (exact_ != o.exact_) return false;
    if (exact_) return a_ == o.a_ && b_ == o.b_ && (b_ == 0 || disc_ == o.disc_);
    return f_ == o.f_;
}

int Value::compare(const Value& o) const {
    if (identical(o)) return 0;
    return (*this - o).sign();
}

bool Value::is_zero() const {
    if (exact_) return a_ == 0 && b_ == 0;
    return f_ == 0;
}

BigFloat Value::to_float() const {
    if (!exact_) return f_;
    BigFloat r(a_);
    if (b_ != 0) r += BigFloat(b_) * sqrt(BigFloat(disc_));
    return r;
}

double Value::to_double() const { return to_float().convert_to<double>(); }

std::string Value::to_string() const {
    if (!exact_) {
        std::ostringstream os;
        os << "~" << std::setprecision(25) << f_;
        return os.str();
    }
    auto rat_str = [](const Rational& r) {
        std::ostringstream os;
        os << r;
        return os.str();
    };
    if (b_ == 0) return rat_str(a_);
    std::string quad;
    if (b_ == 1)
        quad = "sqrt(" + disc_.str() + ")";
    else if (b_ == -1)
        quad = "-sqrt(" + disc_.str() + ")";
    else
        quad = rat_str(b_) + "*sqrt(" + disc_.str() + ")";
    if (a_ == 0) return quad;
    if (b_ > 0) return rat_str(a_) + " + " + quad;
    if (b_ == -1) return rat_str(a_) + " - sqrt(" + disc_.str() + ")";
    return rat_str(a_) + " - " + rat_str(-b_) + "*sqrt(" + disc_.str() + ")";
}

namespace {

class ValueParser {
public:
    explicit ValueParser(const std::string& s) : s_(s) {}

    Value parse() {
        Value v = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw ParseError("trailing characters in value expression: '" + s_ + "'",
                             0, static_cast<int>(pos_) + 1);
        return v;
    }

private:
    Value expr() {
        Value v = term();
        for (;;) {
            skip_ws();
            if (accept('+'))
                v = v + term();
            else if (accept('-'))
                v = v - term();
            else
                return v;
        }
    }

    Value term() {
        Value v = unary();
        for (;;) {
            skip_ws();
            if (accept('*')) {
                v = v * unary();
            } else if (accept('/')) {
                Value d = unary();
                if (!d.is_rational())
                    throw ParseError("division by a non-rational value", 0,
                                     static_cast<int>(pos_) + 1);
                v = v.div_rational(d.as_rational());
            } else {
                return v;
            }
        }
    }

    Value unary() {
        skip_ws();
        if (accept('-')) return -unary();
        return primary();
    }

    Value primary() {
        skip_ws();
        if (accept('(')) {
            Value v = expr();
            expect(')');
            return v;
        }
        if (accept('~')) {
            size_t start = pos_;
            scan_number();
            return Value::approx(BigFloat(s_.substr(start, pos_ - start)));
        }
        if (match_word("sqrt")) {
            expect('(');
            Value arg = expr();
            expect(')');
            if (!arg.is_rational())
                throw ParseError("sqrt argument must be rational", 0,
                                 static_cast<int>(pos_) + 1);
            return Value::sqrt_rational(arg.as_rational());
        }
        return Value::rational(number());
    }

    Rational number() {
        skip_ws();
        size_t start = pos_;
        scan_number();
        if (pos_ == start)
            throw ParseError("expected a number in value expression: '" + s_ + "'",
                             0, static_cast<int>(pos_) + 1);
        std::string tok = s_.substr(start, pos_ - start);
        // mantissa[.fraction][e exp] as an exact rational
        size_t epos = tok.find_first_of("eE");
        long expo = 0;
        if (epos != std::string::npos) {
            expo = std::stol(tok.substr(epos + 1));
            tok = tok.substr(0, epos);
        }
        size_t dot = tok.find('.');
        std::string digits = tok;
        long frac = 0;
        if (dot != std::string::npos) {
            frac = static_cast<long>(tok.size() - dot - 1);
            digits = tok.substr(0, dot) + tok.substr(dot + 1);
        }
        if (digits.empty()) throw ParseError("malformed number '" + tok + "'");
        // strip leading zeros: the GMP string constructor reads them as octal
        size_t nz = digits.find_first_not_of('0');
        digits = nz == std::string::npos ? "0" : digits.substr(nz);
        Rational r{BigInt(digits)};
        long net = expo - frac;
        BigInt pow10 = 1;
        for (long i = 0; i < std::labs(net); ++i) pow10 *= 10;
        if (net >= 0)
            r *= Rational(pow10);
        else
            r /= Rational(pow10);
        return r;
    }

    void scan_number() {
        bool seen_digit = false;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
            seen_digit = true;
        }
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
                seen_digit = true;
            }
        }
        if (seen_digit && pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    ++pos_;
            } else {
                pos_ = save;
            }
        }
    }

    bool match_word(const char* w) {
        skip_ws();
        size_t len = std::strlen(w);
        if (s_.compare(pos_, len, w) == 0) {
            pos_ += len;
            return true;
        }
        return false;
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c))
            throw ParseError(std::string("expected '") + c + "' in value expression",
                             0, static_cast<int>(pos_) + 1);
    }

    const std::string& s_;
    size_t pos_ = 0;
};

} // namespace

Value parse_value(const std::string& text) { return ValueParser(text).parse(); }

} // namespace gps
