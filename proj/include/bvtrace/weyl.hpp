#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bvtrace/hbar_series.hpp"
#include "bvtrace/monomial.hpp"

namespace bvtrace {

/// Constant antisymmetric bivector over y = (p1..pn, q1..qn).
class PoissonTensor {
 public:
  struct Entry {
    int a;
    int b;
    Rational value;
  };

  /// Pi^{p_i q_i} = 1, Pi^{q_i p_i} = -1.
  static PoissonTensor standard(int n);
  /// Validates antisymmetry and invertibility.
  static PoissonTensor from_matrix(int n, const std::vector<std::vector<Rational>>& m);

  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  const Rational& at(int a, int b) const { return m_[a * dim() + b]; }
  /// Nonzero entries, row-major.
  const std::vector<Entry>& entries() const { return entries_; }
  std::uint64_t id() const { return id_; }
  std::vector<std::string> variable_names() const;

 private:
  PoissonTensor(int n, std::vector<Rational> m);

  int n_ = 0;
  std::vector<Rational> m_;
  std::vector<Entry> entries_;
  std::uint64_t id_ = 0;
};

std::vector<std::string> weyl_variable_names(int n);

struct WeylTerm {
  int h;
  Monomial m;
  Rational c;
  friend bool operator==(const WeylTerm&, const WeylTerm&) = default;
};

/// Canonical term order: h ascending, then monomials by descending grlex.
inline bool weyl_term_less(const WeylTerm& a, const WeylTerm& b) {
  if (a.h != b.h) return a.h < b.h;
  return grlex_less(b.m, a.m);
}

/// Polynomial in y^1..y^{2n} with coefficients in h-Laurent series truncated
/// at order() (inclusive).
class WeylElement {
 public:
  WeylElement() = default;
  WeylElement(int n, int order) : n_(n), order_(order) {}
  static WeylElement constant(int n, int order, const Rational& c);
  static WeylElement variable(int n, int order, int a);
  static WeylElement monomial(int n, int order, const Monomial& m, const Rational& c = Rational(1), int h = 0);
  static WeylElement from_terms(int n, int order, std::vector<WeylTerm> terms);

  int n() const { return n_; }
  int order() const { return order_; }
  const std::vector<WeylTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Lowest h exponent present, or order()+1 when zero.
  int valuation() const;
  int max_y_degree() const;
  HbarSeries coefficient(const Monomial& m) const;
  /// Value at y = 0.
  HbarSeries constant_part() const;

  WeylElement truncated(int order) const;
  WeylElement operator-() const;
  WeylElement& operator+=(const WeylElement& rhs);
  WeylElement& operator-=(const WeylElement& rhs);
  WeylElement& operator*=(const Rational& c);
  friend WeylElement operator+(WeylElement a, const WeylElement& b) { return a += b; }
  friend WeylElement operator-(WeylElement a, const WeylElement& b) { return a -= b; }
  friend WeylElement operator*(WeylElement a, const Rational& c) { return a *= c; }
  friend WeylElement operator*(const Rational& c, WeylElement a) { return a *= c; }
  WeylElement scaled(const HbarSeries& s) const;
  /// Multiplies by h^k, shifting the truncation order with it.
  WeylElement shifted(int k) const;

  /// Commutative (pointwise) product.
  WeylElement pointwise(const WeylElement& rhs) const;
  WeylElement derivative(int a) const;
  /// Terms with y-degree d only.
  WeylElement y_homogeneous(int d) const;
  WeylElement at_hbar_zero() const;

  /// Equality up to the tighter truncation order.
  friend bool operator==(const WeylElement& a, const WeylElement& b);

  std::string to_string() const;

 private:
  int n_ = 1;
  int order_ = 8;
  std::vector<WeylTerm> terms_;
};

/// exp((h/2) Pi^{ab} d_a (x) d_b) applied to y^alpha (x) y^beta and multiplied out.
/// Cached per thread.
const std::vector<WeylTerm>& monomial_star(const PoissonTensor& pi, const Monomial& a, const Monomial& b);

WeylElement moyal_star(const WeylElement& f, const WeylElement& g, const PoissonTensor& pi);
/// (1/h)(f*g - g*f).
WeylElement star_commutator(const WeylElement& f, const WeylElement& g, const PoissonTensor& pi);
/// Classical bracket Pi^{ab} d_a f d_b g.
WeylElement poisson_bracket(const WeylElement& f, const WeylElement& g, const PoissonTensor& pi);

struct Projections {
  WeylElement quadratic;  // pr1: y-quadratic part at h = 0
  HbarSeries central;     // pr3: value at y = 0
};
Projections pr_projections(const WeylElement& f);

struct Curvature {
  WeylElement r1;
  HbarSeries r3;
};
Curvature curvature_bilinears(const WeylElement& f, const WeylElement& g, const PoissonTensor& pi);

}  // namespace bvtrace
