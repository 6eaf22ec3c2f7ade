#pragma once

#include <array>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bvtrace/rational.hpp"

namespace bvtrace {

/// Power series in q known exactly through q^N.
class QSeries {
 public:
  QSeries() = default;
  explicit QSeries(int n) : c_(static_cast<std::size_t>(n) + 1) {}
  QSeries(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {}  // NOLINT(google-explicit-constructor)
  static QSeries constant(int n, const Rational& c);

  int truncation() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& operator[](int k) const { return c_[k]; }
  Rational& operator[](int k) { return c_[k]; }
  bool is_zero() const;
  QSeries truncated(int n) const;

  QSeries operator-() const;
  QSeries& operator+=(const QSeries& rhs);
  QSeries& operator-=(const QSeries& rhs);
  friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
  friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
  friend QSeries operator*(const QSeries& a, const QSeries& b);
  QSeries scaled(const Rational& c) const;
  /// q d/dq.
  QSeries q_derivative() const;

  friend bool operator==(const QSeries& a, const QSeries& b);
  /// "1 - 24*q - 72*q^2"; "0" when zero.
  std::string to_string() const;

 private:
  std::vector<Rational> c_;
};

Rational bernoulli(int k);
/// E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n for even k >= 2.
QSeries eisenstein(int k, int n);

/// Polynomial in E2, E4, E6 of homogeneous weight.
class QuasiModularForm {
 public:
  using Exponents = std::array<int, 3>;

  QuasiModularForm() = default;
  QuasiModularForm(int weight, std::map<Exponents, Rational> coeffs);

  int weight() const { return weight_; }
  const std::map<Exponents, Rational>& coeffs() const { return coeffs_; }
  QSeries expansion(int n) const;
  /// "1/12*E2^2 - 1/12*E4"
  std::string to_string() const;
  friend bool operator==(const QuasiModularForm&, const QuasiModularForm&) = default;

 private:
  int weight_ = 0;
  std::map<Exponents, Rational> coeffs_;
};

/// Monomials E2^a E4^b E6^c of the given weight, a descending.
std::vector<QuasiModularForm::Exponents> quasi_modular_basis(int weight);

struct Recognition {
  bool success = false;
  QuasiModularForm form;  // best fit on the pivot coefficients
  QSeries residual;       // s minus the expansion of form
};

/// Exact solve against the weight basis; UndecidableError when the basis is
/// not independent on q^0..q^N.
Recognition recognize(const QSeries& s, int weight);

/// Sum_{k,n} c_{k,n} e^{2 pi i k z} q^n with |k| <= K.
class FourierKernel {
 public:
  FourierKernel() = default;
  FourierKernel(int k_max, int n);
  int k_max() const { return k_max_; }
  int truncation() const { return n_; }
  Rational& at(int k, int n) { return c_[k + k_max_][n]; }
  const Rational& at(int k, int n) const { return c_[k + k_max_][n]; }
  QSeries row(int k) const;

 private:
  int k_max_ = 0;
  int n_ = 0;
  std::vector<std::vector<Rational>> c_;
};

/// (i, j) with i != j: a kernel in z_i - z_j; (i, i): a kernel in z_i alone.
using KernelMap = std::map<std::pair<int, int>, FourierKernel>;

/// (1/n!) sum over orderings of the iterated constant-Fourier-mode extraction
/// of the product of kernels; an ordering listed in per_ordering uses its own
/// expansions, every other ordering uses `kernels`.
QSeries a_cycle_average(const KernelMap& kernels, int n, const std::map<std::vector<int>, KernelMap>& per_ordering = {});
/// Constant Fourier mode of the product for a single ordering's expansions.
QSeries a_cycle_single(const KernelMap& kernels, int n, int truncation);

enum class FockSystem { bc, beta_gamma };

/// Two species of positive modes; fermionic occupations for bc.
struct FockSpace {
  FockSystem system = FockSystem::bc;
  int level = 0;
};

/// constant + sum_{species s, mode k} w_s(k) N_{s,k}, with
/// w_s(k) = poly_s(k) + extra[(s, k)].
struct DiagonalOperator {
  Rational constant;
  std::array<std::vector<Rational>, 2> poly;
  std::map<std::pair<int, int>, Rational> extra;

  static DiagonalOperator identity();
  static DiagonalOperator energy();
  static DiagonalOperator number(int species, int mode);
  Rational weight(int species, int mode) const;
};

/// Occupation lists of one species with total level <= L: each state is the
/// list of occupied modes with multiplicity, ascending.
std::vector<std::vector<int>> species_states(FockSystem system, int level);

QSeries fock_character(const FockSpace& space);
QSeries fock_trace(const FockSpace& space, const DiagonalOperator& op);

}  // namespace bvtrace
