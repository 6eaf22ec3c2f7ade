#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bvtrace/forms.hpp"
#include "bvtrace/hochschild.hpp"

namespace bvtrace {

/// Sawtooth propagator on the circle: s - 1/2 on (0,1), 1-periodic, 0 at integers.
Rational sawtooth(const Rational& s);

/// Product of P(theta_j - theta_i) over an edge multiset, integrated over
/// 0 < theta_1 < ... < theta_m < 1 with theta_0 = 0 fixed.
struct EdgeIntegrand {
  int m = 0;
  std::vector<std::pair<int, int>> edges;  // i < j, 0 <= i < j <= m

  /// Canonical text key, e.g. "m2:0-1,1-2,1-2" (edges sorted).
  std::string key() const;
  static EdgeIntegrand parse_key(const std::string& key);
};

/// Exact value; memoized process-wide.
Rational simplex_integral(const EdgeIntegrand& e);
/// Same computation, bypassing the memo.
Rational simplex_integral_uncached(const EdgeIntegrand& e);

/// Snapshot of the memo table as (key, value), sorted by key.
std::vector<std::pair<std::string, Rational>> simplex_memo_snapshot();
/// Seeds the memo (used by the persistent cache).
void simplex_memo_insert(const EdgeIntegrand& e, const Rational& value);
void simplex_memo_clear();

/// Appends the terms of <m0 (x) ... (x) mp>_free, scaled by c h^h0, dropping
/// terms above the given h order.
void correlate_monomials(const PoissonTensor& pi, const Monomial* slots, int count, const Rational& c, int h0,
                         int order, std::vector<FormTerm>& out);

FormalForm correlation_free(const ChainSum& c, const PoissonTensor& pi);
/// Equivariant BV integral of the correlation, summed over u-degrees; exact
/// through h^order of the chain.
UPolynomial trace(const PeriodicChain& c, const PoissonTensor& pi);

struct ChainMapReport {
  long long chains = 0;
  long long b_failures = 0;
  long long B_failures = 0;
  long long degree_failures = 0;
  std::string first_failure;
  bool passed() const { return b_failures == 0 && B_failures == 0 && degree_failures == 0; }
};

/// Checks <b c> = h Delta <c>, <B c> = d <c> and form-degree homogeneity on
/// every chain whose entries are monomials of degree <= max_degree, for
/// 0 <= p <= max_p. Work is split across `jobs` threads; the report does not
/// depend on the split.
ChainMapReport verify_chain_map(const PoissonTensor& pi, int max_degree, int max_p, int jobs = 1);

/// One-loop wheel with k sawtooth propagators: (1/k) times the integral of
/// prod P(theta_{i+1} - theta_i) (indices mod k) over the configuration torus
/// (S^1)^k. wheel(1) = 0; odd wheels vanish; exp(sum_k wheel(k) x^k) is the
/// (x/2)/sinh(x/2) series.
Rational wheel_integral(int k);
/// The same cyclic product integrated over the single ordered simplex
/// 0 < theta_1 < ... < theta_k < 1 (agrees with wheel_integral at k = 2 only).
Rational wheel_ordered_integral(int k);

/// Coefficients of (x/2)/sinh(x/2) in powers of x, through x^order.
std::vector<Rational> a_hat_factor(int order);

/// Differential form on a formal base with coordinates x^1..x^d and Weyl
/// algebra valued coefficients; polynomial in x truncated at x_order.
class BaseForm {
 public:
  struct Key {
    Monomial x;
    std::uint32_t mask;
    bool operator<(const Key& o) const {
      if (mask != o.mask) return mask < o.mask;
      return grlex_less(o.x, x);
    }
  };

  BaseForm() = default;
  BaseForm(int d, int n, int x_order, int order) : d_(d), n_(n), x_order_(x_order), order_(order) {}

  int d() const { return d_; }
  int n() const { return n_; }
  int x_order() const { return x_order_; }
  int order() const { return order_; }
  const std::map<Key, WeylElement>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds w * x^x dx^mask (mask given in canonical ascending order).
  void add(const Monomial& x, std::uint32_t mask, const WeylElement& w);
  BaseForm operator-() const;
  BaseForm& operator+=(const BaseForm& rhs);
  BaseForm& operator-=(const BaseForm& rhs);
  friend BaseForm operator+(BaseForm a, const BaseForm& b) { return a += b; }
  friend BaseForm operator-(BaseForm a, const BaseForm& b) { return a -= b; }
  BaseForm shifted(int k) const;
  BaseForm scaled(const Rational& c) const;

  /// True when every coefficient is independent of y.
  bool is_central() const;
  std::string to_string() const;

 private:
  int d_ = 1;
  int n_ = 1;
  int x_order_ = 4;
  int order_ = 8;
  std::map<Key, WeylElement> terms_;
};

BaseForm base_d(const BaseForm& a);
/// Wedge in dx combined with the star product on coefficients.
BaseForm wedge_star(const BaseForm& a, const BaseForm& b, const PoissonTensor& pi);

struct FedosovData {
  BaseForm connection;  // Gamma, 1-form, quadratic in y
  BaseForm gamma;       // 1-form
  BaseForm curvature;   // R, 2-form, quadratic in y
  BaseForm omega;       // 2-form, central
};

struct FedosovReport {
  BaseForm lhs;
  BaseForm residual;
  bool residual_zero = false;
  bool residual_central = false;
  bool lhs_central = false;
  bool omega_central = false;
  bool passed = false;
};

/// Evaluates d gamma + (1/h)[Gamma, gamma] + (1/2h)[gamma, gamma] + R and
/// compares it with omega.
FedosovReport fedosov_verify(const FedosovData& data, const PoissonTensor& pi);

/// Random self-consistent instance: Gamma quadratic in y, gamma = -Gamma +
/// d_x(linear) + central, R and omega defined so the equation holds. With
/// `perturb`, gamma additionally receives a non-central term c x^j y^a dx^i.
FedosovData synthesize_fedosov(int d, int n, int x_order, int order, std::uint64_t seed, bool perturb);

/// Numerical propagator from the heat kernel at separation s in (0,1).
double heat_propagator(double s, double t_min, int images);
/// Max |heat_propagator - sawtooth| over `samples` interior points.
double heat_propagator_check(double t_min, int images, int samples);

}  // namespace bvtrace
