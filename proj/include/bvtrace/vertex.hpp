#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "bvtrace/rational.hpp"

namespace bvtrace {

/// Free generators with an even graded-antisymmetric pairing
/// <a,b> = -(-1)^{|a||b|} <b,a>; the OPE kernel carries the factor h.
struct GeneratorSet {
  std::vector<std::string> names;
  std::vector<int> parities;
  std::vector<std::vector<Rational>> pairing;

  int size() const { return static_cast<int>(names.size()); }
  /// Index of a generator, or DomainError listing the known names.
  int index(const std::string& name) const;
  void validate() const;

  static std::shared_ptr<const GeneratorSet> beta_gamma();
  static std::shared_ptr<const GeneratorSet> bc();
  /// beta, gamma, b, c together.
  static std::shared_ptr<const GeneratorSet> beta_gamma_bc();
};

using GeneratorSetPtr = std::shared_ptr<const GeneratorSet>;

/// One factor d^k a_g.
struct Leg {
  std::uint8_t g = 0;
  std::uint8_t k = 0;
  friend auto operator<=>(const Leg&, const Leg&) = default;
};

/// Normal-ordered monomial: legs sorted by (generator, derivative order).
using VertexMonomial = std::vector<Leg>;

struct VertexTerm {
  int h = 0;
  VertexMonomial legs;
  Rational c;
  friend bool operator==(const VertexTerm&, const VertexTerm&) = default;
};

class VertexPolynomial {
 public:
  VertexPolynomial() = default;
  VertexPolynomial(GeneratorSetPtr gens, int order) : gens_(std::move(gens)), order_(order) {}
  static VertexPolynomial from_terms(GeneratorSetPtr gens, int order, std::vector<VertexTerm> terms);
  static VertexPolynomial one(GeneratorSetPtr gens, int order);
  static VertexPolynomial generator(GeneratorSetPtr gens, int order, int g, int k = 0);

  const GeneratorSetPtr& generators() const { return gens_; }
  int order() const { return order_; }
  const std::vector<VertexTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// 0 or 1, or -1 when the parity is mixed (0 for zero).
  int parity() const;
  int term_parity(const VertexMonomial& legs) const;
  VertexPolynomial parity_part(int parity) const;

  VertexPolynomial operator-() const;
  VertexPolynomial& operator+=(const VertexPolynomial& rhs);
  VertexPolynomial& operator-=(const VertexPolynomial& rhs);
  friend VertexPolynomial operator+(VertexPolynomial a, const VertexPolynomial& b) { return a += b; }
  friend VertexPolynomial operator-(VertexPolynomial a, const VertexPolynomial& b) { return a -= b; }
  /// Normal-ordered product :AB:.
  friend VertexPolynomial operator*(const VertexPolynomial& a, const VertexPolynomial& b);
  VertexPolynomial scaled(const Rational& c) const;
  VertexPolynomial shifted(int k) const;

  friend bool operator==(const VertexPolynomial& a, const VertexPolynomial& b);
  /// Monomials print as ":beta D^2 gamma:", single legs without colons.
  std::string to_string() const;

 private:
  GeneratorSetPtr gens_;
  int order_ = 8;
  std::vector<VertexTerm> terms_;
};

std::string vertex_monomial_string(const GeneratorSet& gens, const VertexMonomial& legs);

/// Singular part: pole order n+1 -> A_{(n)}B.
struct OPEExpansion {
  std::map<int, VertexPolynomial> poles;
  bool empty() const { return poles.empty(); }
  std::string to_string() const;
};

OPEExpansion ope_singular(const VertexPolynomial& a, const VertexPolynomial& b);
VertexPolynomial nth_product(const VertexPolynomial& a, const VertexPolynomial& b, int n);
VertexPolynomial translate(const VertexPolynomial& a);

/// Contour integral of z^k A(z); scalars survive only at k = -1.
struct ModeTerm {
  int h = 0;
  VertexMonomial legs;
  int k = -1;
  Rational c;
  friend bool operator==(const ModeTerm&, const ModeTerm&) = default;
};

/// Linear combination of modes, kept in a canonical form modulo the
/// integration-by-parts relations oint z^k (TA) = -k oint z^{k-1} A.
class ModeSum {
 public:
  ModeSum() = default;
  ModeSum(GeneratorSetPtr gens, int order) : gens_(std::move(gens)), order_(order) {}
  static ModeSum mode(const VertexPolynomial& a, int k);
  static ModeSum from_terms(GeneratorSetPtr gens, int order, std::vector<ModeTerm> terms);

  const GeneratorSetPtr& generators() const { return gens_; }
  int order() const { return order_; }
  const std::vector<ModeTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  ModeSum operator-() const;
  ModeSum& operator+=(const ModeSum& rhs);
  ModeSum& operator-=(const ModeSum& rhs);
  friend ModeSum operator+(ModeSum a, const ModeSum& b) { return a += b; }
  friend ModeSum operator-(ModeSum a, const ModeSum& b) { return a -= b; }
  ModeSum scaled(const Rational& c) const;
  /// Part of the given parity; central terms are even.
  ModeSum parity_part(int parity) const;

  friend bool operator==(const ModeSum& a, const ModeSum& b) { return a.terms_ == b.terms_; }
  /// "oint(z^k :A:)" per mode, central terms as bare coefficients.
  std::string to_string() const;

 private:
  GeneratorSetPtr gens_;
  int order_ = 8;
  std::vector<ModeTerm> terms_;
};

/// [oint z^m A, oint w^n B] = sum_j C(m,j) oint w^{m+n-j} (A_{(j)}B), extended
/// bilinearly; graded commutator for odd arguments.
ModeSum mode_bracket(const ModeSum& x, const ModeSum& y);

struct QmeReport {
  ModeSum bracket;
  bool zero = false;
  /// gamma even: the bracket vanishes by antisymmetry, the check says nothing.
  bool vacuous = false;
};

/// Zero-mode check [oint gamma, oint gamma] = 0.
QmeReport qme_check(const VertexPolynomial& gamma);

/// Random polynomial: up to `terms` monomials of 1..max_legs legs with
/// derivative order <= max_k, h^0 coefficients.
VertexPolynomial random_vertex_polynomial(GeneratorSetPtr gens, int order, int max_legs, int max_k, int terms,
                                          std::mt19937_64& rng);

}  // namespace bvtrace
