#include "bvtrace/checks.hpp"

#include <random>

#include "bvtrace/correlation.hpp"
#include "bvtrace/dgbv.hpp"
#include "bvtrace/qmod.hpp"
#include "bvtrace/random.hpp"
#include "bvtrace/vertex.hpp"

namespace bvtrace {

void CheckResult::merge(const CheckResult& other) {
  if (failures == 0 && other.failures > 0) first_failure = other.first_failure;
  checked += other.checked;
  failures += other.failures;
}

namespace {

int draw(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

CheckResult check_moyal(int samples, int max_n, int max_degree, int order, std::uint64_t seed) {
  CheckResult r;
  r.name = "moyal";
  std::mt19937_64 rng(seed);
  for (int n = 1; n <= max_n; ++n) {
    auto pi = PoissonTensor::standard(n);
    for (int a = 0; a < 2 * n; ++a)
      for (int b = 0; b < 2 * n; ++b) {
        auto ya = WeylElement::variable(n, order, a), yb = WeylElement::variable(n, order, b);
        auto lhs = moyal_star(ya, yb, pi) - moyal_star(yb, ya, pi);
        auto rhs = WeylElement::monomial(n, order, Monomial{}, pi.at(a, b), 1);
        r.expect(lhs == rhs, [&] { return "[y" + std::to_string(a) + ", y" + std::to_string(b) + "] = " + lhs.to_string(); });
      }
  }
  for (int s = 0; s < samples; ++s) {
    int n = draw(rng, 1, max_n);
    auto pi = PoissonTensor::standard(n);
    int terms = draw(rng, 1, 3);
    auto f = random_weyl(n, order, max_degree, terms, rng);
    auto g = random_weyl(n, order, max_degree, terms, rng);
    auto h = random_weyl(n, order, max_degree, terms, rng);
    auto one = WeylElement::constant(n, order, Rational(1));
    auto triple = [&] { return "f = " + f.to_string() + ", g = " + g.to_string() + ", h = " + h.to_string(); };
    r.expect(moyal_star(moyal_star(f, g, pi), h, pi) == moyal_star(f, moyal_star(g, h, pi), pi),
             [&] { return "associativity: " + triple(); });
    r.expect(moyal_star(f, one, pi) == f && moyal_star(one, f, pi) == f, [&] { return "unit: " + f.to_string(); });

    auto f0 = f.at_hbar_zero(), g0 = g.at_hbar_zero();
    auto fg = moyal_star(f0, g0, pi);
    r.expect((fg - f0.pointwise(g0)).valuation() >= 1, [&] { return "classical limit: " + triple(); });
    auto comm = fg - moyal_star(g0, f0, pi) - poisson_bracket(f0, g0, pi).shifted(1).truncated(order);
    r.expect(comm.valuation() >= 2, [&] { return "first-order commutator: " + triple(); });

    auto c = WeylElement::monomial(n, order, Monomial{}, Rational(draw(rng, 1, 5)), draw(rng, 0, 2));
    r.expect(moyal_star(c, f, pi) == moyal_star(f, c, pi), [&] { return "central constant: " + f.to_string(); });
  }
  return r;
}

CheckResult check_cyclic_identities(int samples, int max_n, int max_p, int max_degree, int order, std::uint64_t seed) {
  CheckResult r;
  r.name = "cyclic_identities";
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    int n = draw(rng, 1, max_n);
    auto pi = PoissonTensor::standard(n);
    auto c = random_chain(n, order, draw(rng, 0, max_p), max_degree, draw(rng, 1, 2), rng);
    auto bc = hochschild_b(c, pi), Bc = connes_B(c);
    r.expect(hochschild_b(bc, pi).is_zero(), [&] { return "b^2 on " + c.to_string(); });
    r.expect(connes_B(Bc).is_zero(), [&] { return "B^2 on " + c.to_string(); });
    r.expect((hochschild_b(Bc, pi) + connes_B(bc)).is_zero(), [&] { return "bB + Bb on " + c.to_string(); });
    auto pc = random_periodic(n, order, max_p, max_degree, rng);
    r.expect(periodic_diff(periodic_diff(pc, pi), pi).is_zero(), [&] { return "(b + uB)^2 on " + pc.to_string(); });
  }
  return r;
}

CheckResult check_chain_map(int n, int max_degree, int max_p, int jobs) {
  CheckResult r;
  r.name = "chain_map";
  auto rep = verify_chain_map(PoissonTensor::standard(n), max_degree, max_p, jobs);
  r.checked = rep.chains;
  r.failures = rep.b_failures + rep.B_failures + rep.degree_failures;
  r.first_failure = rep.first_failure;
  return r;
}

CheckResult check_trace_cocycle(int samples, int max_n, int max_p, int max_degree, int order, std::uint64_t seed) {
  CheckResult r;
  r.name = "trace_cocycle";
  std::mt19937_64 rng(seed);
  for (int n = 1; n <= std::min(max_n, 2); ++n) {
    auto pi = PoissonTensor::standard(n);
    auto one = PeriodicChain(0, ChainSum::from_entries({WeylElement::constant(n, order, Rational(1))}));
    auto t = trace(one, pi);
    r.expect(t == UPolynomial(n, HbarSeries(Rational(1), order)), [&] { return "Tr(1) = " + t.to_string(); });
  }
  for (int s = 0; s < samples; ++s) {
    int n = draw(rng, 1, max_n);
    auto pi = PoissonTensor::standard(n);
    auto c = random_periodic(n, order, max_p, max_degree, rng);
    auto t = trace(periodic_diff(c, pi), pi);
    r.expect(t.is_zero(), [&] { return "Tr((b + uB) c) = " + t.to_string() + " for c = " + c.to_string(); });
  }
  return r;
}

CheckResult check_forms(int samples, int max_n, int max_degree, int order, std::uint64_t seed) {
  CheckResult r;
  r.name = "forms";
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    int n = draw(rng, 1, max_n);
    auto pi = PoissonTensor::standard(n);
    auto w = random_form(n, order, max_degree, draw(rng, 1, 4), rng);
    r.expect(de_rham_d(de_rham_d(w)).is_zero(), [&] { return "d^2 on " + w.to_string(); });
    r.expect(bv_delta(bv_delta(w, pi), pi).is_zero(), [&] { return "Delta^2 on " + w.to_string(); });
    r.expect((de_rham_d(bv_delta(w, pi)) + bv_delta(de_rham_d(w), pi)).is_zero(),
             [&] { return "d Delta + Delta d on " + w.to_string(); });
  }
  return r;
}

CheckResult check_wheels(int max_k) {
  CheckResult r;
  r.name = "wheels";
  for (int k = 1; k <= max_k; k += 2) {
    auto w = wheel_integral(k);
    r.expect(w.is_zero(), [&] { return "wheel(" + std::to_string(k) + ") = " + w.to_string(); });
  }
  auto w2 = wheel_integral(2);
  auto ahat = a_hat_factor(2);
  r.expect(w2 == Rational(-1, 24), [&] { return "wheel(2) = " + w2.to_string(); });
  r.expect(ahat.size() > 2 && ahat[2] == w2, [&] { return "A-hat x^2 coefficient differs from wheel(2)"; });
  return r;
}

CheckResult check_dgbv(int spaces, int max_half, int max_degree, int order, std::uint64_t seed) {
  CheckResult r;
  r.name = "dgbv";
  std::mt19937_64 rng(seed);
  for (int s = 0; s < spaces; ++s) {
    auto space = random_space(1 + s % max_half, rng);
    auto p = random_degree0_kernel(space, rng);
    auto basis = monomial_basis(space, max_degree, order);
    auto k0 = poisson_kernel(space);
    auto kp = add_kernels(k0, apply_q_to_kernel(space, p));
    for (const auto& f : basis) {
      Functional flowed = hrg_flow(p, f);
      Functional lhs = apply_q(space, flowed) + bv_laplacian(kp, flowed).shifted(1);
      Functional rhs = hrg_flow(p, apply_q(space, f) + bv_laplacian(k0, f).shifted(1));
      r.expect(lhs == rhs, [&] { return "HRG conjugation on " + f.to_string(space.names); });
    }
    for (int i = 0; i < 10; ++i) {
      auto f = random_functional(space, max_degree, order, 5, rng);
      auto text = [&] { return f.to_string(space.names); };
      r.expect(bv_laplacian(k0, bv_laplacian(k0, f)).is_zero(), [&] { return "Delta^2 on " + text(); });
      r.expect(apply_q(space, apply_q(space, f)).is_zero(), [&] { return "Q^2 on " + text(); });
      r.expect((apply_q(space, bv_laplacian(k0, f)) + bv_laplacian(k0, apply_q(space, f))).is_zero(),
               [&] { return "Q Delta + Delta Q on " + text(); });
    }
  }
  return r;
}

CheckResult check_vertex(int samples, std::uint64_t seed) {
  CheckResult r;
  r.name = "vertex";
  constexpr int order = 8;
  auto gens = GeneratorSet::beta_gamma_bc();
  std::mt19937_64 rng(seed);
  for (int it = 0; it < samples; ++it) {
    auto A = random_vertex_polynomial(gens, order, 3, 2, 2, rng);
    auto B = random_vertex_polynomial(gens, order, 3, 2, 2, rng);
    for (int pa = 0; pa < 2; ++pa)
      for (int pb = 0; pb < 2; ++pb) {
        auto a = A.parity_part(pa), b = B.parity_part(pb);
        auto pair = [&] { return "A = " + a.to_string() + ", B = " + b.to_string(); };
        int top = 0;
        for (const auto& [k, _] : ope_singular(a, b).poles) top = std::max(top, k);
        for (const auto& [k, _] : ope_singular(b, a).poles) top = std::max(top, k);
        for (int n = 0; n <= top; ++n) {
          // A_(n)B = -(-1)^{|A||B|} sum_j (-1)^{n+j} T^j/j! (B_(n+j)A)
          VertexPolynomial rhs(gens, order);
          for (int j = 0; n + j <= top; ++j) {
            auto x = nth_product(b, a, n + j);
            for (int t = 0; t < j; ++t) x = translate(x);
            x = x.scaled(Rational::factorial(j).inverse());
            rhs += (n + j) % 2 ? -x : x;
          }
          if (!(pa && pb)) rhs = -rhs;
          r.expect(nth_product(a, b, n) == rhs, [&] { return "skew-symmetry n=" + std::to_string(n) + ": " + pair(); });
          auto shifted = n == 0 ? VertexPolynomial(gens, order) : nth_product(a, b, n - 1).scaled(Rational(-n));
          r.expect(nth_product(translate(a), b, n) == shifted,
                   [&] { return "translation n=" + std::to_string(n) + ": " + pair(); });
        }
      }
  }
  for (int it = 0; it < samples; ++it) {
    auto X = ModeSum::mode(random_vertex_polynomial(gens, order, 2, 1, 1, rng), draw(rng, -2, 2));
    auto Y = ModeSum::mode(random_vertex_polynomial(gens, order, 2, 1, 1, rng), draw(rng, -2, 2));
    auto Z = ModeSum::mode(random_vertex_polynomial(gens, order, 2, 1, 1, rng), draw(rng, -2, 2));
    for (int px = 0; px < 2; ++px)
      for (int py = 0; py < 2; ++py) {
        auto x = X.parity_part(px), y = Y.parity_part(py);
        auto lhs = mode_bracket(x, mode_bracket(y, Z));
        auto rhs = mode_bracket(mode_bracket(x, y), Z) + mode_bracket(y, mode_bracket(x, Z)).scaled(Rational(px && py ? -1 : 1));
        r.expect(lhs == rhs, [&] { return "Jacobi: " + x.to_string() + ", " + y.to_string() + ", " + Z.to_string(); });
      }
  }
  return r;
}

CheckResult check_quasi_modular(int q_order, int max_weight, std::uint64_t seed) {
  CheckResult r;
  r.name = "quasi_modular";
  auto e2 = eisenstein(2, q_order), e4 = eisenstein(4, q_order), e6 = eisenstein(6, q_order);
  r.expect(e2.q_derivative().scaled(Rational(12)) == e2 * e2 - e4, [] { return "12 q dE2/dq = E2^2 - E4"; });
  r.expect(e4.q_derivative().scaled(Rational(3)) == e2 * e4 - e6, [] { return "3 q dE4/dq = E2 E4 - E6"; });
  r.expect(e6.q_derivative().scaled(Rational(2)) == e2 * e6 - e4 * e4, [] { return "2 q dE6/dq = E2 E6 - E4^2"; });

  std::mt19937_64 rng(seed);
  auto random_form = [&](int w) {
    std::map<QuasiModularForm::Exponents, Rational> coeffs;
    for (const auto& e : quasi_modular_basis(w))
      if (int c = draw(rng, -4, 4); c != 0) coeffs[e] = Rational(c, draw(rng, 1, 3));
    return QuasiModularForm(w, coeffs);
  };
  for (int w = 0; w <= max_weight; w += 2) {
    auto form = random_form(w);
    auto rec = recognize(form.expansion(q_order), w);
    r.expect(rec.success && rec.form == form, [&] { return "recognize round trip at weight " + std::to_string(w) + ": " + form.to_string(); });
    for (int w1 = 2; w1 < w; w1 += 2) {
      auto f1 = random_form(w1), f2 = random_form(w - w1);
      auto prod = recognize(f1.expansion(q_order) * f2.expansion(q_order), w);
      r.expect(prod.success, [&] { return "weight additivity " + f1.to_string() + " * " + f2.to_string(); });
    }
  }
  return r;
}

CheckResult check_fock(int level) {
  CheckResult r;
  r.name = "fock";
  QSeries bc = QSeries::constant(level, Rational(1)), bg = bc;
  for (int m = 1; m <= level; ++m) {
    QSeries plus = QSeries::constant(level, Rational(1));
    plus[m] = 1;
    bc = bc * plus * plus;
    // 1/(1 - q^m) as a geometric series
    QSeries geo(level);
    for (int k = 0; k <= level; k += m) geo[k] = 1;
    bg = bg * geo * geo;
  }
  auto cbc = fock_character({FockSystem::bc, level});
  auto cbg = fock_character({FockSystem::beta_gamma, level});
  r.expect(cbc == bc, [&] { return "bc character " + cbc.to_string(); });
  r.expect(cbg == bg, [&] { return "beta-gamma character " + cbg.to_string(); });
  for (auto sys : {FockSystem::bc, FockSystem::beta_gamma}) {
    FockSpace space{sys, level};
    r.expect(fock_trace(space, DiagonalOperator::energy()) == fock_character(space).q_derivative(),
             [] { return "L0 trace differs from q d/dq of the character"; });
    r.expect(fock_trace(space, DiagonalOperator::identity()) == fock_character(space),
             [] { return "identity trace differs from the character"; });
  }
  return r;
}

CheckResult check_fedosov(int cases, int n, int x_order, int order, std::uint64_t seed) {
  CheckResult r;
  r.name = "fedosov";
  auto pi = PoissonTensor::standard(n);
  for (int i = 0; i < cases; ++i) {
    for (bool perturb : {false, true}) {
      std::uint64_t s = seed + static_cast<std::uint64_t>(i);
      auto data = synthesize_fedosov(2, n, x_order, order, s, perturb);
      bool passed = fedosov_verify(data, pi).passed;
      r.expect(passed != perturb, [&] {
        return std::string(perturb ? "perturbed instance accepted" : "consistent instance rejected") + " (seed " +
               std::to_string(s) + ")";
      });
    }
  }
  return r;
}

}  // namespace bvtrace
