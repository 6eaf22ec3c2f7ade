#pragma once

#include <map>
#include <string>
#include <vector>

#include "bvtrace/weyl.hpp"

namespace bvtrace {

/// One basis tensor h^h * m0 (x) m1 (x) ... (x) mp with a rational coefficient.
struct ChainTerm {
  int h;
  std::vector<Monomial> slots;
  Rational c;
};

bool chain_term_less(const ChainTerm& a, const ChainTerm& b);

/// Finite K-linear combination of normalized cyclic chains over W_{2n},
/// expanded into monomial tensors. Slots 1..p never hold a y-constant
/// monomial (the normalized quotient by scalars); such tensors are dropped.
class ChainSum {
 public:
  ChainSum() = default;
  ChainSum(int n, int order) : n_(n), order_(order) {}
  /// Multilinear expansion of a0 (x) ... (x) ap, normalizing a1..ap.
  static ChainSum from_entries(const std::vector<WeylElement>& entries);
  static ChainSum from_terms(int n, int order, std::vector<ChainTerm> terms);

  int n() const { return n_; }
  int order() const { return order_; }
  const std::vector<ChainTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  ChainSum operator-() const;
  ChainSum& operator+=(const ChainSum& rhs);
  ChainSum& operator-=(const ChainSum& rhs);
  friend ChainSum operator+(ChainSum a, const ChainSum& b) { return a += b; }
  friend ChainSum operator-(ChainSum a, const ChainSum& b) { return a -= b; }
  ChainSum scaled(const HbarSeries& s) const;
  friend bool operator==(const ChainSum& a, const ChainSum& b);

  std::string to_string() const;

 private:
  int n_ = 1;
  int order_ = 8;
  std::vector<ChainTerm> terms_;
};

/// Appends the terms of b(m0 (x) ... (x) mp) scaled by c h^h.
void hochschild_b_terms(const PoissonTensor& pi, const ChainTerm& t, int order, std::vector<ChainTerm>& out);
/// Appends the terms of B(m0 (x) ... (x) mp) scaled by c h^h.
void connes_B_terms(const ChainTerm& t, std::vector<ChainTerm>& out);

ChainSum hochschild_b(const ChainSum& c, const PoissonTensor& pi);
ChainSum connes_B(const ChainSum& c);

/// Sum_k u^k c_k of chain sums.
class PeriodicChain {
 public:
  PeriodicChain() = default;
  PeriodicChain(int n, int order) : n_(n), order_(order) {}
  PeriodicChain(int u_exponent, const ChainSum& c);

  int n() const { return n_; }
  int order() const { return order_; }
  const std::map<int, ChainSum>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add(int u_exponent, const ChainSum& c);

  PeriodicChain& operator+=(const PeriodicChain& rhs);
  friend PeriodicChain operator+(PeriodicChain a, const PeriodicChain& b) { return a += b; }
  friend bool operator==(const PeriodicChain& a, const PeriodicChain& b);
  std::string to_string() const;

 private:
  int n_ = 1;
  int order_ = 8;
  std::map<int, ChainSum> terms_;
};

/// b + uB applied degreewise.
PeriodicChain periodic_diff(const PeriodicChain& c, const PoissonTensor& pi);

}  // namespace bvtrace
