#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "gps/errors.hpp"

namespace gps {

/// Sparse polynomial in the parameters mu_1..mu_p with double coefficients.
class MuPoly {
public:
    MuPoly() = default;
    explicit MuPoly(int p, double c = 0.0);
    static MuPoly variable(int p, int i);

    int params() const { return p_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    double constant() const;
    int degree() const;

    MuPoly operator+(const MuPoly& o) const;
    MuPoly operator-(const MuPoly& o) const;
    MuPoly operator*(const MuPoly& o) const;
    MuPoly scaled(double a) const;
    MuPoly operator-() const { return scaled(-1.0); }

    double eval(std::span<const double> mu) const;
    bool operator==(const MuPoly& o) const { return terms_ == o.terms_; }
    std::string to_string() const; // "c0 + c1*mu1*mu2^2 + ..."

    const std::map<std::vector<int>, double>& terms() const { return terms_; }
    void add_term(std::vector<int> expo, double c);

private:
    int p_ = 0;
    std::map<std::vector<int>, double> terms_;
};

/// Truncated power series in two variables (x, y) with MuPoly coefficients,
/// capped by total (x, y)-degree. Parameters pass through all operations
/// exactly (their degree is not capped).
class ParamSeries2 {
public:
    ParamSeries2() = default;
    ParamSeries2(int p, int cap) : p_(p), cap_(cap) {}
    static ParamSeries2 constant(int p, int cap, MuPoly c);
    static ParamSeries2 variable(int p, int cap, int which); // 0 -> x, 1 -> y

    int params() const { return p_; }
    int cap() const { return cap_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<std::pair<int, int>, MuPoly>& terms() const { return terms_; }
    const MuPoly* coeff(int i, int j) const;

    void add_term(int i, int j, const MuPoly& c);

    ParamSeries2 operator+(const ParamSeries2& o) const;
    ParamSeries2 operator-(const ParamSeries2& o) const;
    ParamSeries2 operator*(const ParamSeries2& o) const;
    ParamSeries2 scaled(const MuPoly& a) const;
    ParamSeries2 scaled(double a) const;
    ParamSeries2 truncated(int cap) const;
    ParamSeries2 dx() const; // d/dx
    ParamSeries2 dy() const; // d/dy
    /// Substitutes sx for x and sy for y (both with zero constant term).
    ParamSeries2 substitute(const ParamSeries2& sx, const ParamSeries2& sy) const;
    /// Reciprocal; the constant term must be a nonzero scalar.
    ParamSeries2 reciprocal_unit() const;
    /// The part of total degree exactly d.
    ParamSeries2 slice(int d) const;
    int order() const; // minimal total degree; cap + 1 when zero

    double eval(double x, double y, std::span<const double> mu) const;
    /// Coefficients specialized at mu (an exact parameter-free copy).
    ParamSeries2 at_mu(std::span<const double> mu) const;
    std::string to_string() const;

private:
    int p_ = 0;
    int cap_ = 0;
    std::map<std::pair<int, int>, MuPoly> terms_;
};

/// A pair of series used both as a planar map and as a planar vector field.
struct ParamMap2 {
    ParamSeries2 x, y;

    static ParamMap2 identity(int p, int cap);
    bool near_identity() const;
    /// Composition this(o(u, v)) for near-identity maps.
    ParamMap2 after(const ParamMap2& o) const;
    /// Compositional inverse of a near-identity map.
    ParamMap2 inverse() const;
    std::array<double, 2> eval(double u, double v, std::span<const double> mu) const;
};

/// Push-forward of a vector field through the change new = C^{-1}(old):
/// G(u) = (DC(u))^{-1} F(C(u)), where C maps new coordinates to old.
ParamMap2 push_forward(const ParamMap2& field, const ParamMap2& change_old_from_new);

} // namespace gps
