#pragma once

#include <map>
#include <string>
#include <vector>

#include "bvtrace/rational.hpp"

namespace bvtrace {

/// Truncated Laurent series in h.
///
/// Holds the coefficients of h^valuation .. h^order (order inclusive). The
/// leading coefficient is nonzero unless the series is zero, in which case the
/// coefficient list is empty and valuation() reports order() + 1.
class HbarSeries {
 public:
  HbarSeries() = default;
  explicit HbarSeries(int order) : order_(order) {}
  HbarSeries(const Rational& c, int order);
  static HbarSeries monomial(const Rational& c, int exponent, int order);
  /// Builds from exponent -> coefficient pairs; terms above order are dropped.
  static HbarSeries from_terms(const std::map<int, Rational>& terms, int order);

  bool is_zero() const { return coeffs_.empty(); }
  int valuation() const { return is_zero() ? order_ + 1 : val_; }
  int order() const { return order_; }
  Rational coefficient(int exponent) const;
  /// (exponent, coefficient) for every nonzero term, ascending.
  std::vector<std::pair<int, Rational>> terms() const;

  HbarSeries truncated(int order) const;
  HbarSeries operator-() const;
  HbarSeries& operator+=(const HbarSeries& rhs);
  HbarSeries& operator-=(const HbarSeries& rhs);
  HbarSeries& operator*=(const HbarSeries& rhs);
  HbarSeries& operator*=(const Rational& c);
  friend HbarSeries operator+(HbarSeries a, const HbarSeries& b) { return a += b; }
  friend HbarSeries operator-(HbarSeries a, const HbarSeries& b) { return a -= b; }
  friend HbarSeries operator*(HbarSeries a, const HbarSeries& b) { return a *= b; }
  friend HbarSeries operator*(HbarSeries a, const Rational& c) { return a *= c; }
  /// Multiplies by h^k exactly (shifts valuation and order).
  HbarSeries shifted(int k) const;
  HbarSeries inverse() const;

  /// Equality of the represented classes: coefficients agree up to the
  /// tighter of the two truncation orders.
  friend bool operator==(const HbarSeries& a, const HbarSeries& b);
  bool identical(const HbarSeries& other) const { return order_ == other.order_ && *this == other; }

  std::string to_string() const;

 private:
  void normalize();

  int val_ = 0;
  std::vector<Rational> coeffs_;
  int order_ = 8;
};

/// Laurent polynomial in u with HbarSeries coefficients; u has degree 2.
class UPolynomial {
 public:
  UPolynomial() = default;
  UPolynomial(int u_exponent, const HbarSeries& c);

  bool is_zero() const { return terms_.empty(); }
  const std::map<int, HbarSeries>& terms() const { return terms_; }
  HbarSeries coefficient(int u_exponent, int order) const;

  UPolynomial& operator+=(const UPolynomial& rhs);
  UPolynomial& operator-=(const UPolynomial& rhs);
  UPolynomial& operator*=(const UPolynomial& rhs);
  UPolynomial& operator*=(const HbarSeries& c);
  friend UPolynomial operator+(UPolynomial a, const UPolynomial& b) { return a += b; }
  friend UPolynomial operator-(UPolynomial a, const UPolynomial& b) { return a -= b; }
  friend UPolynomial operator*(UPolynomial a, const UPolynomial& b) { return a *= b; }
  UPolynomial operator-() const;
  void add_term(int u_exponent, const HbarSeries& c);

  friend bool operator==(const UPolynomial& a, const UPolynomial& b);
  /// Sorted by (u asc, h asc): "h*u^-1 + u".
  std::string to_string() const;

 private:
  std::map<int, HbarSeries> terms_;
};

namespace text {

/// Joins signed terms "c*rest" into "a + b - c" form. Each entry is a
/// coefficient and a (possibly empty) product of symbols.
std::string join_terms(const std::vector<std::pair<Rational, std::string>>& terms);

/// "h", "h^3", "h^-1", or "" for exponent 0.
std::string power(const std::string& symbol, int exponent);

/// Joins nonempty factors with '*'.
std::string product(std::initializer_list<std::string> factors);

}  // namespace text

}  // namespace bvtrace
