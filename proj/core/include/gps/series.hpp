#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gps/monoid.hpp"

namespace gps {

/// Exponent tuple of one term: the m X-exponents as flattened coefficient
/// vectors (m * basis-size entries) plus the n natural Y-exponents. Keys of
/// canonicalized exponents compare by plain lexicographic order.
struct TermKey {
    std::vector<long> x;
    std::vector<int> y;
    friend auto operator<=>(const TermKey&, const TermKey&) = default;
};

/// Truncated generalized power series in m "generalized" variables X (monoid
/// exponents) and n "analytic" variables Y (natural exponents), with real
/// coefficients and a total-degree cap: terms of total degree > cap are not
/// represented and are semantically unknown. Immutable value type; all
/// operations are pure.
class GeneralizedSeries {
public:
    GeneralizedSeries() = default;

    static GeneralizedSeries zero(BasisPtr basis, int m, int n, Value cap);
    static GeneralizedSeries constant(BasisPtr basis, int m, int n, Value cap, double c);
    /// c * X1^x[0] * ... * Y1^y[0] * ...
    static GeneralizedSeries monomial(BasisPtr basis, int m, int n, Value cap, double c,
                                      const std::vector<MonoidExponent>& x,
                                      const std::vector<int>& y);
    /// The variable X_{var+1} (0-based index) to the given exponent.
    static GeneralizedSeries x_power(BasisPtr basis, int m, int n, Value cap, int var,
                                     const MonoidExponent& e);
    static GeneralizedSeries y_var(BasisPtr basis, int m, int n, Value cap, int var);

    const BasisPtr& basis() const { return basis_; }
    int num_x() const { return m_; }
    int num_y() const { return n_; }
    const Value& cap() const { return cap_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<TermKey, double>& terms() const { return terms_; }

    MonoidExponent x_exponent(const TermKey& key, int i) const;
    std::vector<MonoidExponent> x_exponents(const TermKey& key) const;
    Value total_degree(const TermKey& key) const;
    /// Minimal total degree over the support; nullopt for the zero series.
    std::optional<Value> order() const;

    double coeff(const std::vector<MonoidExponent>& x, const std::vector<int>& y) const;
    double constant_term() const;
    /// Largest |coefficient| (0 for the zero series).
    double max_abs_coeff() const;

    /// Same shape, basis widened to `basis` (every old generator must be
    /// representable in it).
    GeneralizedSeries rebase(const BasisPtr& basis) const;
    GeneralizedSeries with_cap(Value cap) const; // re-truncate
    GeneralizedSeries scaled(double a) const;
    GeneralizedSeries operator+(const GeneralizedSeries& o) const;
    GeneralizedSeries operator-(const GeneralizedSeries& o) const;
    GeneralizedSeries operator*(const GeneralizedSeries& o) const;

    std::string to_string() const;

    // --- internal-ish helpers shared by the operation layer ---
    void add_term(TermKey key, double c); // accumulates; drops zeros/over-cap
    static void check_compatible(const GeneralizedSeries& a, const GeneralizedSeries& b);
    GeneralizedSeries like_empty(Value cap) const; // same shape, no terms
    /// Multiply by the monomial c * X^dx * Y^dy (dx as group shifts).
    GeneralizedSeries mul_monomial(double c, const std::vector<MonoidExponent>& dx,
                                   const std::vector<int>& dy) const;

private:
    BasisPtr basis_;
    int m_ = 0, n_ = 0;
    Value cap_;
    std::map<TermKey, double> terms_;
};

/// aF + bG (Def. 1.3 remark: truncation-compatible linear combination).
GeneralizedSeries linear_combination(double a, const GeneralizedSeries& F, double b,
                                     const GeneralizedSeries& G);

// --- elementary sets (Def. 1.9 / Remark 1.10) ---

/// One-sided-bounded interval of X-exponent values. A missing lower bound
/// means 0 (non-strict); a missing upper bound means +infinity.
struct XInterval {
    std::optional<MonoidExponent> lo;
    bool lo_strict = false;
    std::optional<MonoidExponent> hi;
    bool hi_strict = false;

    bool contains(const MonoidExponent& e) const;
    bool empty() const;
};

/// Interval of natural Y-exponents, normalized to non-strict bounds.
struct YInterval {
    long lo = 0;
    std::optional<long> hi;

    bool contains(long v) const { return v >= lo && (!hi || v <= *hi); }
    bool empty() const { return hi && *hi < lo; }
};

struct ElementaryBox {
    std::vector<XInterval> x;
    std::vector<YInterval> y;

    bool contains(const std::vector<MonoidExponent>& xe, const std::vector<int>& ye) const;
    bool empty() const;
    bool intersects(const ElementaryBox& o) const;
};

/// Finite union of pairwise disjoint boxes; disjointness checked on
/// construction.
class ElementarySet {
public:
    ElementarySet(BasisPtr basis, int m, int n, std::vector<ElementaryBox> boxes);
    /// The set {(alpha, beta): alpha >= gamma} for gamma in the X-space.
    static ElementarySet from_gamma(int n, const std::vector<MonoidExponent>& gamma);

    const BasisPtr& basis() const { return basis_; }
    int num_x() const { return m_; }
    int num_y() const { return n_; }
    const std::vector<ElementaryBox>& boxes() const { return boxes_; }

    bool contains(const std::vector<MonoidExponent>& xe, const std::vector<int>& ye) const;
    /// inf S per Def. 1.3: per-coordinate infimum over the whole set (strict
    /// lower bounds contribute the bound itself); the Y part uses minima.
    std::pair<std::vector<MonoidExponent>, std::vector<int>> inf() const;

private:
    BasisPtr basis_;
    int m_ = 0, n_ = 0;
    std::vector<ElementaryBox> boxes_;
};

/// F_S: terms of F inside S, shifted down by inf S (Def. 1.3).
GeneralizedSeries truncate_set(const GeneralizedSeries& F, const ElementarySet& S);
/// F_gamma = F_{alpha >= gamma} (Y part unrestricted).
GeneralizedSeries truncate_at(const GeneralizedSeries& F,
                              const std::vector<MonoidExponent>& gamma);

/// gamma-representation of F (Lemma 1.6 / Eq. (1.1)).
struct GammaComponent {
    unsigned mask;                       // bit i set <=> i in I
    std::vector<MonoidExponent> alpha;   // exponents for i in I, ascending index
    GeneralizedSeries series;            // independent of X_I
};
struct GammaRepresentation {
    std::vector<MonoidExponent> gamma;
    std::vector<GammaComponent> components;

    const GeneralizedSeries* find(unsigned mask,
                                  const std::vector<MonoidExponent>& alpha) const;
    /// Reassembles F via Eq. (1.1).
    GeneralizedSeries reconstruct(const GeneralizedSeries& like) const;
};
GammaRepresentation gamma_representation(const GeneralizedSeries& F,
                                         const std::vector<MonoidExponent>& gamma);

/// Euler derivative sum alpha_i a X^alpha Y^beta (index 0-based).
GeneralizedSeries partial_x(const GeneralizedSeries& F, int i);
/// Ordinary partial derivative in Y_j (0-based); cap drops by 1.
GeneralizedSeries partial_y(const GeneralizedSeries& F, int j);

/// Lemma 1.12 normal form of a support/box intersection:
/// S cap B = S cap {a >= gamma} minus the union of S cap {a >= delta^j}.
struct BoxNormalForm {
    bool empty = false;
    std::vector<MonoidExponent> gamma;
    /// Each delta^j as a full tuple; a missing coordinate means +infinity
    /// (the corresponding set is empty and may be dropped by consumers).
    std::vector<std::vector<std::optional<MonoidExponent>>> deltas;
};
BoxNormalForm box_normalize(const std::vector<std::vector<MonoidExponent>>& support,
                            const ElementaryBox& box);

// --- text and JSON round-trip (series_text.cpp) ---

/// Parses the round-trip text form, e.g. "1 + 2.5*X1^(sqrt(2))*Y1^2".
/// With extend_basis, exponent values outside the lattice extend the basis.
GeneralizedSeries parse_series(BasisPtr basis, int m, int n, Value cap,
                               const std::string& text, bool extend_basis = false);
std::string to_json_string(const GeneralizedSeries& F);
GeneralizedSeries series_from_json_string(const std::string& text);

/// Max |coefficient difference| over the union of supports (shape-checked).
double max_coeff_delta(const GeneralizedSeries& F, const GeneralizedSeries& G);

/// Numeric evaluation at x > 0 (componentwise) and arbitrary y.
double evaluate(const GeneralizedSeries& F, const std::vector<double>& x,
                const std::vector<double>& y);

} // namespace gps
