#pragma once

#include <cstdint>
#include <string>

namespace bvtrace {

/// Outcome of one property suite. Only counts and the first failing case are
/// kept, so reports are identical however the work was scheduled.
struct CheckResult {
  std::string name;
  long long checked = 0;
  long long failures = 0;
  std::string first_failure;

  bool passed() const { return failures == 0 && checked > 0; }

  template <class Describe>
  void expect(bool ok, Describe&& describe) {
    ++checked;
    if (ok) return;
    if (failures++ == 0) first_failure = describe();
  }
  void merge(const CheckResult& other);
};

/// Associativity, unit, classical limit, first-order commutator, linear
/// generator commutators and central constants of the Moyal product.
CheckResult check_moyal(int samples, int max_n, int max_degree, int order, std::uint64_t seed);
/// b^2 = 0, B^2 = 0, bB + Bb = 0 and (b + uB)^2 = 0.
CheckResult check_cyclic_identities(int samples, int max_n, int max_p, int max_degree, int order, std::uint64_t seed);
/// <b c> = h Delta <c> and <B c> = d <c> over every monomial chain.
CheckResult check_chain_map(int n, int max_degree, int max_p, int jobs);
/// Tr((b + uB) c) = 0 on random periodic chains, and Tr(1) = u^n.
CheckResult check_trace_cocycle(int samples, int max_n, int max_p, int max_degree, int order, std::uint64_t seed);
/// d^2 = 0, Delta^2 = 0, d Delta + Delta d = 0 on random forms.
CheckResult check_forms(int samples, int max_n, int max_degree, int order, std::uint64_t seed);
/// Odd wheels vanish and wheel(2) = -1/24 equals the x^2 coefficient of the A-hat factor.
CheckResult check_wheels(int max_k);
/// HRG conjugation on monomial bases, plus Delta^2 = 0, Q^2 = 0 and QDelta + DeltaQ = 0.
CheckResult check_dgbv(int spaces, int max_half, int max_degree, int order, std::uint64_t seed);
/// Skew-symmetry and translation covariance of n-th products, Jacobi for mode brackets.
CheckResult check_vertex(int samples, std::uint64_t seed);
/// Ramanujan identities, recognize round trips and weight additivity.
CheckResult check_quasi_modular(int q_order, int max_weight, std::uint64_t seed);
/// Fock characters against the product formulas and the L0 trace against q d/dq.
CheckResult check_fock(int level);
/// Synthesized consistent instances pass, perturbed ones are rejected.
CheckResult check_fedosov(int cases, int n, int x_order, int order, std::uint64_t seed);

}  // namespace bvtrace
