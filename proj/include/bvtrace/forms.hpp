#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bvtrace/hbar_series.hpp"
#include "bvtrace/weyl.hpp"

namespace bvtrace {

/// h^h y^m dy^S with S an ascending index set stored as a bit mask.
struct FormTerm {
  int h;
  Monomial m;
  std::uint32_t mask;
  Rational c;
};

inline bool form_term_less(const FormTerm& a, const FormTerm& b) {
  if (a.h != b.h) return a.h < b.h;
  int da = __builtin_popcount(a.mask), db = __builtin_popcount(b.mask);
  if (da != db) return da < db;
  if (!(a.m == b.m)) return grlex_less(b.m, a.m);
  return a.mask < b.mask;
}

/// Sign of dy^a moved to the canonical position inside dy^S (a not in S).
inline int wedge_sign(std::uint32_t mask, int a) {
  return (__builtin_popcount(mask & ((1u << a) - 1)) & 1) ? -1 : 1;
}

/// Polynomial differential form on the formal 2n-dimensional space, h-Laurent
/// coefficients truncated at order().
class FormalForm {
 public:
  FormalForm() = default;
  FormalForm(int n, int order) : n_(n), order_(order) {}
  static FormalForm from_terms(int n, int order, std::vector<FormTerm> terms);
  static FormalForm from_function(const WeylElement& f);
  /// dy^a as a 1-form.
  static FormalForm differential(int n, int order, int a);

  int n() const { return n_; }
  int order() const { return order_; }
  const std::vector<FormTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// -1 for the zero form, the common degree if homogeneous, -2 otherwise.
  int homogeneous_degree() const;

  FormalForm operator-() const;
  FormalForm& operator+=(const FormalForm& rhs);
  FormalForm& operator-=(const FormalForm& rhs);
  friend FormalForm operator+(FormalForm a, const FormalForm& b) { return a += b; }
  friend FormalForm operator-(FormalForm a, const FormalForm& b) { return a -= b; }
  FormalForm scaled(const Rational& c) const;
  FormalForm shifted(int k) const;
  FormalForm truncated(int order) const;
  FormalForm wedge(const FormalForm& rhs) const;

  friend bool operator==(const FormalForm& a, const FormalForm& b);
  std::string to_string() const;

 private:
  int n_ = 1;
  int order_ = 8;
  std::vector<FormTerm> terms_;
};

FormalForm de_rham_d(const FormalForm& w);
/// Contraction with Pi: iota(dy^a ^ dy^b) = Pi^{ab}, second order in dy.
FormalForm iota_pi(const FormalForm& w, const PoissonTensor& pi);
/// Lie derivative along Pi: iota d - d iota = Pi^{ab} d_a iota_b.
FormalForm bv_delta(const FormalForm& w, const PoissonTensor& pi);

/// (h^n/n!) iota^n w at y = 0; only the top-degree part contributes.
HbarSeries berezin_integral(const FormalForm& w, const PoissonTensor& pi);
/// u^n exp(-h iota/u) w, at y = 0 and form degree 0.
UPolynomial equivariant_integral(const FormalForm& w, const PoissonTensor& pi);

}  // namespace bvtrace
