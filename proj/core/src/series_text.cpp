#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "gps/series.hpp"

namespace gps {

namespace {

std::string format_coeff(double c) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    return buf;
}

std::string exponent_text(const BasisPtr& basis, const MonoidExponent& e) {
    // exact bases print the (lossless) value expression, float bases the
    // positional coefficient form
    if (basis->exact()) return e.value().to_string();
    return e.to_string();
}

} // namespace

std::string GeneralizedSeries::to_string() const {
    if (terms_.empty()) return "0";

    std::vector<const TermKey*> keys;
    keys.reserve(terms_.size());
    for (const auto& [key, c] : terms_) keys.push_back(&key);
    std::stable_sort(keys.begin(), keys.end(), [&](const TermKey* a, const TermKey* b) {
        try {
            int c = total_degree(*a).compare(total_degree(*b));
            if (c != 0) return c < 0;
        } catch (const AmbiguityError&) {
        }
        return *a < *b;
    });

    std::string out;
    bool first = true;
    for (const TermKey* key : keys) {
        double c = terms_.at(*key);
        std::string mags;
        for (int i = 0; i < m_; ++i) {
            auto e = x_exponent(*key, i);
            if (e.is_zero()) continue;
            mags += "*X" + std::to_string(i + 1) + "^(" + exponent_text(basis_, e) + ")";
        }
        for (int j = 0; j < n_; ++j) {
            if ((*key).y[j] == 0) continue;
            mags += "*Y" + std::to_string(j + 1) + "^" + std::to_string((*key).y[j]);
        }
        double mag = first ? c : std::fabs(c);
        std::string term = format_coeff(mag) + mags;
        if (first) {
            out = term;
            first = false;
        } else {
            out += (c < 0 ? " - " : " + ") + term;
        }
    }
    return out;
}

namespace {

struct RawFactor {
    enum Kind { number, xvar, yvar } kind;
    double num = 0;
    int index = 0;          // 0-based variable index
    std::string xexp;       // exponent text for X factors
    long yexp = 1;          // exponent for Y factors
};

struct RawTerm {
    double sign = 1;
    std::vector<RawFactor> factors;
};

class SeriesLexer {
public:
    SeriesLexer(const std::string& s, int m, int n) : s_(s), m_(m), n_(n) {}

    std::vector<RawTerm> run() {
        std::vector<RawTerm> terms;
        skip_ws();
        if (pos_ == s_.size()) return terms;
        for (;;) {
            RawTerm t;
            skip_ws();
            if (accept('-')) t.sign = -1;
            else accept('+');
            t.factors.push_back(factor());
            for (;;) {
                skip_ws();
                if (!accept('*')) break;
                t.factors.push_back(factor());
            }
            terms.push_back(std::move(t));
            skip_ws();
            if (pos_ == s_.size()) break;
            if (s_[pos_] != '+' && s_[pos_] != '-')
                throw ParseError("expected '+', '-' or end of series", 0,
                                 static_cast<int>(pos_) + 1);
        }
        return terms;
    }

private:
    RawFactor factor() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of series text");
        char c = s_[pos_];
        if (c == 'X' || c == 'T' || c == 'x' || c == 't') {
            ++pos_;
            int idx = var_index();
            if (idx >= m_) throw ParseError("X index out of range", 0,
                                            static_cast<int>(pos_) + 1);
            RawFactor f;
            f.kind = RawFactor::xvar;
            f.index = idx;
            skip_ws();
            if (accept('^')) {
                skip_ws();
                if (accept('(')) {
                    int depth = 1;
                    size_t start = pos_;
                    while (pos_ < s_.size() && depth > 0) {
                        if (s_[pos_] == '(') ++depth;
                        if (s_[pos_] == ')') --depth;
                        ++pos_;
                    }
                    if (depth != 0) throw ParseError("unbalanced parenthesis in exponent");
                    f.xexp = s_.substr(start, pos_ - start - 1);
                } else {
                    size_t start = pos_;
                    scan_number();
                    if (pos_ == start) throw ParseError("expected exponent after '^'");
                    f.xexp = s_.substr(start, pos_ - start);
                }
            } else {
                f.xexp = "1";
            }
            return f;
        }
        if (c == 'Y' || c == 'y') {
            ++pos_;
            int idx = var_index();
            if (idx >= n_) throw ParseError("Y index out of range", 0,
                                            static_cast<int>(pos_) + 1);
            RawFactor f;
            f.kind = RawFactor::yvar;
            f.index = idx;
            skip_ws();
            if (accept('^')) {
                skip_ws();
                size_t start = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    ++pos_;
                if (pos_ == start) throw ParseError("expected integer exponent after '^'");
                f.yexp = std::stol(s_.substr(start, pos_ - start));
            }
            return f;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t start = pos_;
            scan_number();
            RawFactor f;
            f.kind = RawFactor::number;
            f.num = std::stod(s_.substr(start, pos_ - start));
            return f;
        }
        throw ParseError(std::string("unexpected character '") + c + "' in series text",
                         0, static_cast<int>(pos_) + 1);
    }

    int var_index() {
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) return 0;
        return std::stoi(s_.substr(start, pos_ - start)) - 1;
    }

    void scan_number() {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
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

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    const std::string& s_;
    int m_, n_;
    size_t pos_ = 0;
};

} // namespace

GeneralizedSeries parse_series(BasisPtr basis, int m, int n, Value cap,
                               const std::string& text, bool extend_basis) {
    auto raw = SeriesLexer(text, m, n).run();

    if (extend_basis) {
        std::vector<Value> candidates;
        for (const auto& t : raw)
            for (const auto& f : t.factors) {
                if (f.kind != RawFactor::xvar) continue;
                try {
                    candidates.push_back(parse_value(f.xexp));
                } catch (const ParseError&) {
                    // positional coefficient form; no extension needed
                }
            }
        basis = GeneratorBasis::extended(basis, candidates);
    }

    GeneralizedSeries out = GeneralizedSeries::zero(basis, m, n, std::move(cap));
    for (const auto& t : raw) {
        double c = t.sign;
        std::vector<MonoidExponent> xe(m, MonoidExponent::zero(basis));
        std::vector<int> ye(n, 0);
        for (const auto& f : t.factors) {
            switch (f.kind) {
            case RawFactor::number:
                c *= f.num;
                break;
            case RawFactor::xvar:
                xe[f.index] = xe[f.index] + parse_exponent(basis, f.xexp);
                break;
            case RawFactor::yvar:
                ye[f.index] += static_cast<int>(f.yexp);
                break;
            }
        }
        auto mono = GeneralizedSeries::monomial(basis, m, n, out.cap(), c, xe, ye);
        out = out + mono;
    }
    return out;
}

std::string to_json_string(const GeneralizedSeries& F) {
    nlohmann::json j;
    const auto& basis = F.basis();
    j["basis"]["independence"] = basis->independence_assumed();
    for (size_t i = 0; i < basis->size(); ++i)
        j["basis"]["generators"].push_back(basis->generator(i).to_string());
    j["m"] = F.num_x();
    j["n"] = F.num_y();
    j["cap"] = F.cap().to_string();
    j["terms"] = nlohmann::json::array();
    for (const auto& [key, c] : F.terms()) {
        nlohmann::json t;
        t["x"] = key.x;
        t["y"] = key.y;
        t["c"] = format_coeff(c);
        j["terms"].push_back(std::move(t));
    }
    return j.dump(2);
}

GeneralizedSeries series_from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<Value> gens;
    for (const auto& g : j.at("basis").at("generators"))
        gens.push_back(parse_value(g.get<std::string>()));
    auto basis = GeneratorBasis::create(std::move(gens),
                                        j.at("basis").at("independence").get<bool>());
    auto out = GeneralizedSeries::zero(basis, j.at("m").get<int>(), j.at("n").get<int>(),
                                       parse_value(j.at("cap").get<std::string>()));
    for (const auto& t : j.at("terms")) {
        TermKey key;
        key.x = t.at("x").get<std::vector<long>>();
        key.y = t.at("y").get<std::vector<int>>();
        out.add_term(std::move(key), std::stod(t.at("c").get<std::string>()));
    }
    return out;
}

} // namespace gps
