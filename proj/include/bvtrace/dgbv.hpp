#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bvtrace/hbar_series.hpp"
#include "bvtrace/weyl.hpp"

namespace bvtrace {

/// Finite-dimensional (-1)-shifted dg symplectic space.
///
/// Basis e_a with integer degrees; q(a, b) is the coefficient of e_a in Q e_b;
/// omega(a, b) = omega(e_a, e_b). The coordinate dual to e_a has degree
/// -deg(e_a) and the same parity, and is printed under the basis name.
struct DgSymplecticSpace {
  std::vector<std::string> names;
  std::vector<int> degrees;
  std::vector<std::vector<Rational>> q;
  std::vector<std::vector<Rational>> omega;

  int dim() const { return static_cast<int>(degrees.size()); }
  int parity(int a) const { return ((degrees[a] % 2) + 2) % 2; }
  std::uint32_t odd_mask() const;
  /// Throws DomainError naming the first violated axiom.
  void validate() const;
};

/// Graded-symmetric element of V (x) V as a coefficient table t[a][b].
struct Kernel2 {
  std::vector<std::vector<Rational>> t;
  int degree = 0;
};

/// Polynomial in the graded coordinates with h-Laurent coefficients;
/// odd coordinates square to zero, factors are kept in ascending index order.
class Functional {
 public:
  Functional() = default;
  Functional(int nvars, std::uint32_t odd_mask, int order) : nvars_(nvars), odd_(odd_mask), order_(order) {}
  static Functional from_terms(int nvars, std::uint32_t odd_mask, int order, std::vector<WeylTerm> terms);
  static Functional constant(int nvars, std::uint32_t odd_mask, int order, const Rational& c);
  static Functional coordinate(int nvars, std::uint32_t odd_mask, int order, int a);

  int nvars() const { return nvars_; }
  std::uint32_t odd_mask() const { return odd_; }
  int order() const { return order_; }
  const std::vector<WeylTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int valuation() const { return terms_.empty() ? order_ + 1 : terms_.front().h; }
  /// Parity of a monomial (number of odd factors mod 2).
  int monomial_parity(const Monomial& m) const;
  /// Total polynomial degree of the highest term.
  int max_degree() const;
  /// Part of the given parity.
  Functional parity_part(int parity) const;
  Functional degree_at_most(int d) const;

  Functional operator-() const;
  Functional& operator+=(const Functional& rhs);
  Functional& operator-=(const Functional& rhs);
  friend Functional operator+(Functional a, const Functional& b) { return a += b; }
  friend Functional operator-(Functional a, const Functional& b) { return a -= b; }
  friend Functional operator*(const Functional& a, const Functional& b);
  Functional scaled(const Rational& c) const;
  Functional shifted(int k) const;
  Functional truncated(int order) const;
  /// Left derivative along coordinate a.
  Functional derivative(int a) const;

  friend bool operator==(const Functional& a, const Functional& b);
  std::string to_string(const std::vector<std::string>& names) const;

 private:
  int nvars_ = 0;
  std::uint32_t odd_ = 0;
  int order_ = 8;
  std::vector<WeylTerm> terms_;
};

/// K = omega^{-1} with the Koszul twist K^{ab} = (-1)^{|e_b|} (omega^{-1})^{ab};
/// checks deg K = 1 and Q(K) = 0.
Kernel2 poisson_kernel(const DgSymplecticSpace& space);
/// (Q (x) 1 + 1 (x) Q) T with (1 (x) Q)(a (x) b) = (-1)^{|a|} a (x) Qb.
Kernel2 apply_q_to_kernel(const DgSymplecticSpace& space, const Kernel2& t);
Kernel2 add_kernels(const Kernel2& a, const Kernel2& b);

/// (1/2) T^{ab} d_a d_b F.
Functional contract(const Kernel2& t, const Functional& f);
Functional bv_laplacian(const Kernel2& k, const Functional& f);
/// Delta(ab) - Delta(a) b - (-1)^{|a|} a Delta(b), bilinear in parity parts of a.
Functional bv_bracket(const Kernel2& k, const Functional& a, const Functional& b);
/// The differential Q acting on functions as the derivation dual to Q.
Functional apply_q(const DgSymplecticSpace& space, const Functional& f);
/// exp(h d_P) F; the series terminates on polynomials.
Functional hrg_flow(const Kernel2& p, const Functional& f);

struct MasterEquationResult {
  bool passed = false;
  Functional residual;
};

enum class MasterMode { classical, quantum };

MasterEquationResult master_equation_check(const DgSymplecticSpace& space, const Kernel2& k, const Functional& i,
                                           MasterMode mode);

struct HrgReport {
  long long checked = 0;
  long long failures = 0;
};

/// (Q + h Delta_{K+Q(P)}) exp(h d_P) F == exp(h d_P) (Q + h Delta_K) F on the
/// given functionals.
HrgReport verify_hrg(const DgSymplecticSpace& space, const Kernel2& p, const std::vector<Functional>& fs);

/// Random space V = W (+) W* with |w*_i| = 1 - |w_i|, omega(w_i, w*_j) = delta_ij,
/// Q = q on W (q^2 = 0) and the compatible dual action on W*. dim = 2 * half.
DgSymplecticSpace random_space(int half, std::mt19937_64& rng);
/// Random degree-0 graded-symmetric kernel.
Kernel2 random_degree0_kernel(const DgSymplecticSpace& space, std::mt19937_64& rng);
/// All monomials of total degree <= d (odd exponents <= 1), coefficient 1.
std::vector<Functional> monomial_basis(const DgSymplecticSpace& space, int d, int order);
Functional random_functional(const DgSymplecticSpace& space, int d, int order, int terms, std::mt19937_64& rng);

}  // namespace bvtrace
