// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bvtrace/checks.hpp"
#include "bvtrace/correlation.hpp"
#include "bvtrace/parser.hpp"
#include "bvtrace/qmod.hpp"
#include "bvtrace/vertex.hpp"
#include "bvtrace/weyl.hpp"
#include "oracles.hpp"

using namespace bvtrace;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
  void absorb(const CheckResult& r) {
    require(r.passed(), r.name + ": " + std::to_string(r.failures) + "/" + std::to_string(r.checked) + " failed, " +
                            r.first_failure);
    checked += r.checked;
  }
  long long checked = 0;
};

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

oracle::Q to_q(const Rational& r) { return r.to_mpq(); }

oracle::Field to_oracle(const VertexPolynomial& v) {
  oracle::Field f;
  for (const auto& t : v.terms()) {
    std::vector<oracle::Factor> fs;
    for (const auto& leg : t.legs) fs.push_back({leg.g, leg.k});
    oracle::add_term(f, t.h, fs, to_q(t.c));
  }
  return f;
}

Outcome moyal() {
  Outcome o;
  auto pi = PoissonTensor::standard(1);
  auto p = WeylElement::variable(1, 4, 0), q = WeylElement::variable(1, 4, 1);
  o.require(moyal_star(p, q, pi).to_string() == "p1*q1 + 1/2*h", "p1 * q1 != p1*q1 + 1/2*h");
  o.require(moyal_star(q, p, pi).to_string() == "p1*q1 - 1/2*h", "q1 * p1 != p1*q1 - 1/2*h");
  o.absorb(check_moyal(1000, 3, 4, 6, 101));
  return o;
}

Outcome cyclic() {
  Outcome o;
  o.absorb(check_cyclic_identities(500, 2, 4, 3, 6, 202));
  return o;
}

Outcome chain_map() {
  Outcome o;
  for (int n : {1, 2}) o.absorb(check_chain_map(n, 3, 3, jobs()));
  return o;
}

Outcome trace_cocycle() {
  Outcome o;
  o.absorb(check_trace_cocycle(200, 2, 4, 3, 6, 303));
  for (int n : {1, 2}) {
    auto pi = PoissonTensor::standard(n);
    auto one = parse_periodic("1", n, 6);
    o.require(trace(one, pi) == UPolynomial(n, HbarSeries(Rational(1), 6)), "Tr(1) = " + trace(one, pi).to_string());
  }
  return o;
}

Outcome hrg() {
  Outcome o;
  o.absorb(check_dgbv(20, 3, 6, 4, 404));
  return o;
}

Outcome wheels() {
  Outcome o;
  for (int k = 1; k <= 9; k += 2) o.require(wheel_integral(k).is_zero(), "wheel(" + std::to_string(k) + ") != 0");
  o.require(wheel_integral(2) == Rational(-1, 24), "wheel(2) != -1/24");
  o.require(a_hat_factor(2)[2] == wheel_integral(2), "wheel(2) differs from the x^2 coefficient of A-hat");
  o.absorb(check_wheels(9));
  std::mt19937_64 rng(505);
  double worst = 0;
  for (int inst = 0; inst < 50; ++inst) {
    EdgeIntegrand e;
    e.m = std::uniform_int_distribution<int>(1, 4)(rng);
    int count = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int c = 0; c < count; ++c) {
      int j = std::uniform_int_distribution<int>(1, e.m)(rng);
      int i = std::uniform_int_distribution<int>(0, j - 1)(rng);
      e.edges.emplace_back(i, j);
    }
    double exact = simplex_integral(e).to_double();
    double numeric = oracle::simplex_quadrature(e.m, e.edges);
    worst = std::max(worst, std::abs(exact - numeric));
    o.require(std::abs(exact - numeric) <= 1e-9, "simplex " + e.key() + " exact " + std::to_string(exact) +
                                                       " vs quadrature " + std::to_string(numeric));
    ++o.checked;
  }
  std::ostringstream s;
  s << "max |exact - quadrature| = " << worst;
  if (o.ok) o.detail = s.str();
  return o;
}

Outcome ahat() {
  Outcome o;
  auto lib = a_hat_factor(8);
  auto by_series = oracle::ahat_by_series(8);
  auto by_bernoulli = oracle::ahat_by_bernoulli(8);
  for (int k = 0; k <= 8; ++k) {
    o.require(to_q(lib[k]) == by_series[k], "x^" + std::to_string(k) + " differs from the series inversion");
    o.require(to_q(lib[k]) == by_bernoulli[k], "x^" + std::to_string(k) + " differs from the Bernoulli values");
    ++o.checked;
  }
  return o;
}

Outcome ope() {
  Outcome o;
  auto gens = GeneratorSet::beta_gamma_bc();
  auto v = [&](const char* s) { return parse_vertex(s, gens, 8); };
  struct Reference {
    const char* a;
    const char* b;
    const char* singular;
  };
  // Frozen free-field reference OPEs.
  const std::array<Reference, 5> references{{
      {"beta", "gamma", "h/(z-w)"},
      {"gamma", "beta", "-h/(z-w)"},
      {"b", "c", "h/(z-w)"},
      {"c", "b", "h/(z-w)"},
      {":beta gamma:", ":beta gamma:", "-h^2/(z-w)^2"},
  }};
  for (const auto& d : references) {
    auto got = ope_singular(v(d.a), v(d.b)).to_string();
    o.require(got == d.singular, std::string(d.a) + " x " + d.b + ": got " + got + ", expected " + d.singular);
    ++o.checked;
  }
  o.absorb(check_vertex(100, 606));
  // n-th products against explicit Wick contraction on random samples.
  std::mt19937_64 rng(607);
  for (int s = 0; s < 100; ++s) {
    auto a = random_vertex_polynomial(gens, 8, 3, 2, 2, rng);
    auto b = random_vertex_polynomial(gens, 8, 3, 2, 2, rng);
    for (int n = 0; n <= 3; ++n) {
      bool same = to_oracle(nth_product(a, b, n)) == oracle::nth_product(to_oracle(a), to_oracle(b), n);
      o.require(same, "(" + a.to_string() + ")_(" + std::to_string(n) + ")(" + b.to_string() +
                          ") disagrees with the Wick oracle");
      ++o.checked;
    }
  }
  return o;
}

Outcome qme() {
  Outcome o;
  auto gens = GeneratorSet::beta_gamma_bc();
  std::mt19937_64 rng(707);
  int zero = 0, nonzero = 0, sampled = 0;
  // A few structured cases first so both verdicts are exercised.
  std::vector<VertexPolynomial> samples;
  for (const char* s : {"c", ":c D c:", ":beta gamma c:", ":b c D c:", ":gamma b:"})
    samples.push_back(parse_vertex(s, gens, 8));
  while (samples.size() < 20) {
    auto g = random_vertex_polynomial(gens, 8, 3, 2, 3, rng).parity_part(1);
    if (!g.is_zero()) samples.push_back(g);
  }
  for (const auto& g : samples) {
    ++sampled;
    auto report = qme_check(g);
    auto x = oracle::nth_product(to_oracle(g), to_oracle(g), 0);
    bool oracle_zero = oracle::zero_mode_vanishes(x);
    o.require(to_oracle(nth_product(g, g, 0)) == x, "gamma_(0)gamma differs from the oracle for " + g.to_string());
    o.require(report.zero == oracle_zero, "qme verdict " + std::to_string(report.zero) + " vs oracle " +
                                              std::to_string(oracle_zero) + " for " + g.to_string());
    (oracle_zero ? zero : nonzero)++;
    ++o.checked;
  }
  if (o.ok)
    o.detail = std::to_string(sampled) + " samples, " + std::to_string(zero) + " zero, " + std::to_string(nonzero) +
               " nonzero";
  return o;
}

bool same_series(const QSeries& lib, const oracle::Series& ref, int n) {
  if (lib.truncation() < n || static_cast<int>(ref.size()) <= n) return false;
  for (int i = 0; i <= n; ++i)
    if (to_q(lib[i]) != ref[i]) return false;
  return true;
}

Outcome quasi_modular() {
  Outcome o;
  const int N = 30;
  for (int k : {2, 4, 6}) {
    o.require(same_series(eisenstein(k, N), oracle::eisenstein(k, N), N),
              "E" + std::to_string(k) + " differs from divisor sums");
    ++o.checked;
  }
  auto e2 = oracle::eisenstein(2, N), e4 = oracle::eisenstein(4, N), e6 = oracle::eisenstein(6, N);
  auto lin = [](const oracle::Series& a, const oracle::Q& ca, const oracle::Series& b, const oracle::Q& cb) {
    oracle::Series r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = ca * a[i] + cb * b[i];
    return r;
  };
  // Ramanujan identities on the oracle series and on the engine's own.
  o.require(oracle::q_derivative(e2) == lin(oracle::mul(e2, e2), oracle::Q(1, 12), e4, oracle::Q(-1, 12)),
            "q E2' != (E2^2 - E4)/12");
  o.require(oracle::q_derivative(e4) == lin(oracle::mul(e2, e4), oracle::Q(1, 3), e6, oracle::Q(-1, 3)),
            "q E4' != (E2 E4 - E6)/3");
  o.require(oracle::q_derivative(e6) == lin(oracle::mul(e2, e6), oracle::Q(1, 2), oracle::mul(e4, e4), oracle::Q(-1, 2)),
            "q E6' != (E2 E6 - E4^2)/2");
  o.absorb(check_quasi_modular(N, 12, 808));

  const int L = 20;
  auto one = [](const std::vector<std::vector<int>>&) { return oracle::Q(1); };
  auto energy = [L](const std::vector<std::vector<int>>& occ) {
    oracle::Q e = 0;
    for (const auto& sp : occ)
      for (int m = 1; m <= L; ++m) e += sp[m] * m;
    return e;
  };
  auto n12 = [](const std::vector<std::vector<int>>& occ) { return oracle::Q(occ[1][2]); };
  for (auto sys : {FockSystem::bc, FockSystem::beta_gamma}) {
    bool fermi = sys == FockSystem::bc;
    std::string label = fermi ? "bc" : "beta-gamma";
    FockSpace space{sys, L};
    auto states = oracle::enumerate_states(L, fermi, one);
    auto product = fermi ? oracle::fermion_product(L) : oracle::boson_product(L);
    o.require(states == product, label + ": level enumeration differs from the product formula");
    o.require(same_series(fock_character(space), states, L), label + ": character differs from enumeration");
    o.require(same_series(fock_trace(space, DiagonalOperator::energy()), oracle::enumerate_states(L, fermi, energy), L),
              label + ": energy trace differs from enumeration");
    o.require(same_series(fock_trace(space, DiagonalOperator::number(1, 2)), oracle::enumerate_states(L, fermi, n12), L),
              label + ": N(1,2) trace differs from enumeration");
    o.checked += 4;
  }
  return o;
}

Outcome fedosov() {
  Outcome o;
  auto r = check_fedosov(25, 1, 3, 6, 909);
  o.require(r.checked == 50, "suite size " + std::to_string(r.checked));
  o.absorb(r);
  return o;
}

std::string run_binary(const std::string& args) {
  std::string cmd = std::string(BVTRACE_BINARY) + " " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  out += "\n<status " + std::to_string(status) + ">";
  return out;
}

Outcome determinism() {
  Outcome o;
  const std::vector<std::string> corpus{
      "selftest",
      "star --n 1 p1 q1 --hbar-order 4",
      "hoch \"p1 | q1 | p1^2\"",
      "correlate \"p1^2 | q1^2\"",
      "trace \"(p1 | q1)*u + 1\" --n 2",
      "wheel 6",
      "ahat --degree 10",
      "ope \":beta gamma:\" \":beta gamma:\"",
      "qme \":b c D c:\"",
      "recognize \"(E2^2 - E4)/12\" 4 --q-order 30",
      "fock bc --q-order 20",
      "fedosov-check --cases 5",
      "dgbv-check --random --cases 4",
  };
  for (const auto& args : corpus) {
    std::string first = run_binary(args + " --jobs 1");
    o.require(first.find("<status 0>") != std::string::npos, "'" + args + "' failed: " + first.substr(0, 200));
    o.require(first.find("\"schema\"") != std::string::npos, "'" + args + "' did not print JSON");
    for (const char* j : {"--jobs 1", "--jobs 2", "--jobs 4"}) {
      o.require(run_binary(args + " " + j) == first, "'" + args + "' differs under " + j);
      ++o.checked;
    }
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Moyal star-product axioms", 30, moyal},
      {2, "Hochschild/cyclic identities", 30, cyclic},
      {3, "chain map <b c> = h Delta <c>, <B c> = d <c>", 120, chain_map},
      {4, "trace cocycle and Tr(1) = u^n", 60, trace_cocycle},
      {5, "HRG conjugation", 30, hrg},
      {6, "wheel integrals and simplex quadrature", 60, wheels},
      {7, "A-hat coefficients vs Bernoulli/Taylor oracle", 30, ahat},
      {8, "reference OPEs, skew-symmetry, Jacobi", 30, ope},
      {9, "qme_check vs double-residue oracle", 30, qme},
      {10, "Eisenstein, quasi-modular, Fock characters", 30, quasi_modular},
      {11, "Fedosov suite", 30, fedosov},
      {12, "determinism across runs and --jobs", 120, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.ok && secs < c.limit;
    if (o.ok && !pass) o.detail = "time limit exceeded";
    failed += !pass;
    std::printf("[%s] %2d %-46s %8.2fs (limit %3.0fs)  %lld checks%s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                c.limit, o.checked, o.detail.empty() ? "" : "  ", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
