// Exact integration of sawtooth edge products over the ordered simplex.

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include "bvtrace/correlation.hpp"
#include "bvtrace/errors.hpp"

namespace bvtrace {
namespace {

struct Memo {
  std::shared_mutex mu;
  std::map<std::string, Rational> table;
  std::atomic<std::uint64_t> generation{1};
};

Memo& memo() {
  static Memo m;
  return m;
}

struct LocalMemo {
  std::uint64_t generation = 0;
  std::unordered_map<std::string, Rational> table;
};

void check_edges(const EdgeIntegrand& e) {
  if (e.m < 0 || e.m >= kMaxVars) throw DomainError("simplex integral supports at most " + std::to_string(kMaxVars - 1) + " moving vertices");
  for (auto [i, j] : e.edges)
    if (i < 0 || j > e.m || i >= j) throw DomainError("edge {" + std::to_string(i) + "," + std::to_string(j) + "} is not a valid pair i<j<=m");
}

}  // namespace

Rational sawtooth(const Rational& s) {
  mpq_class q = s.to_mpq();
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  mpq_class frac = q - mpq_class(fl);
  if (frac == 0) return Rational(0);
  return Rational(mpq_class(frac - mpq_class(1, 2)));
}

std::string EdgeIntegrand::key() const {
  auto sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  std::string k = "m" + std::to_string(m) + ":";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) k += ',';
    k += std::to_string(sorted[i].first) + "-" + std::to_string(sorted[i].second);
  }
  return k;
}

EdgeIntegrand EdgeIntegrand::parse_key(const std::string& key) {
  EdgeIntegrand e;
  auto colon = key.find(':');
  if (key.empty() || key[0] != 'm' || colon == std::string::npos) throw DomainError("malformed edge key '" + key + "'");
  try {
    e.m = std::stoi(key.substr(1, colon - 1));
    std::stringstream ss(key.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto dash = item.find('-');
      if (dash == std::string::npos) throw DomainError("malformed edge '" + item + "'");
      e.edges.emplace_back(std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1)));
    }
  } catch (const std::logic_error&) {
    throw DomainError("malformed edge key '" + key + "'");
  }
  check_edges(e);
  return e;
}

Rational simplex_integral_uncached(const EdgeIntegrand& e) {
  check_edges(e);
  // variables theta_1..theta_m live in exponent slots 0..m-1
  std::unordered_map<Monomial, Rational, MonomialHash> poly{{Monomial{}, Rational(1)}};
  const Rational half(1, 2);
  for (auto [i, j] : e.edges) {
    std::unordered_map<Monomial, Rational, MonomialHash> next;
    for (const auto& [mono, c] : poly) {
      Monomial up = mono;
      ++up.e[j - 1];
      next[up] += c;
      if (i > 0) {
        Monomial dn = mono;
        ++dn.e[i - 1];
        next[dn] -= c;
      }
      next[mono] -= c * half;
    }
    poly = std::move(next);
  }
  for (int k = 1; k <= e.m; ++k) {
    std::unordered_map<Monomial, Rational, MonomialHash> next;
    for (const auto& [mono, c] : poly) {
      if (c.is_zero()) continue;
      int a = mono.e[k - 1];
      Monomial r = mono;
      r.e[k - 1] = 0;
      if (k < e.m) r.e[k] = static_cast<std::uint8_t>(r.e[k] + a + 1);
      next[r] += c / Rational(a + 1);
    }
    poly = std::move(next);
  }
  Rational total;
  for (const auto& [mono, c] : poly) total += c;
  return total;
}

Rational simplex_integral(const EdgeIntegrand& e) {
  thread_local LocalMemo local;
  Memo& g = memo();
  std::uint64_t gen = g.generation.load(std::memory_order_acquire);
  if (local.generation != gen) {
    local.table.clear();
    local.generation = gen;
  }
  std::string key = e.key();
  if (auto it = local.table.find(key); it != local.table.end()) return it->second;
  {
    std::shared_lock lock(g.mu);
    if (auto it = g.table.find(key); it != g.table.end()) {
      local.table.emplace(key, it->second);
      return it->second;
    }
  }
  Rational v = simplex_integral_uncached(e);
  {
    std::unique_lock lock(g.mu);
    g.table.emplace(key, v);  // insert-if-absent; duplicates are identical
  }
  local.table.emplace(key, v);
  return v;
}

std::vector<std::pair<std::string, Rational>> simplex_memo_snapshot() {
  std::shared_lock lock(memo().mu);
  return {memo().table.begin(), memo().table.end()};
}

void simplex_memo_insert(const EdgeIntegrand& e, const Rational& value) {
  std::unique_lock lock(memo().mu);
  memo().table.emplace(e.key(), value);
}

void simplex_memo_clear() {
  std::unique_lock lock(memo().mu);
  memo().table.clear();
  memo().generation.fetch_add(1, std::memory_order_acq_rel);
}

namespace {

// Univariate polynomial on (0,1), coefficient of s^i at index i.
using UniPoly = std::vector<Rational>;

Rational integral01(const UniPoly& f) {
  Rational acc;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] / Rational(static_cast<long long>(i + 1));
  return acc;
}

// Circular convolution with the sawtooth: g(s) = int_0^1 f(t) P(s - t) dt.
// Splitting at t = s gives s*M0 - M1 - M0/2 + F(1) - F(s), F' = f, F(0) = 0.
UniPoly convolve_sawtooth(const UniPoly& f) {
  Rational m0 = integral01(f);
  UniPoly tf(f.size() + 1);
  for (std::size_t i = 0; i < f.size(); ++i) tf[i + 1] = f[i];
  Rational m1 = integral01(tf);
  UniPoly g(f.size() + 1);
  g[0] = -m1 - m0 / Rational(2) + m0;  // F(1) = m0
  g[1] = m0;
  for (std::size_t i = 0; i < f.size(); ++i) g[i + 1] -= f[i] / Rational(static_cast<long long>(i + 1));
  return g;
}

}  // namespace

Rational wheel_integral(int k) {
  if (k < 1) throw DomainError("wheel integral needs k >= 1");
  if (k == 1) return Rational(0);  // single self-edge, P(0) = 0
  // (1/k) * integral over (S^1)^k of prod P(theta_{i+1} - theta_i). Translation
  // invariance pins theta_1 = 0; the chain theta_2 .. theta_k is reduced by
  // repeated convolution and closed with P(-t) = 1/2 - t.
  UniPoly q{Rational(-1, 2), Rational(1)};
  for (int j = 2; j < k; ++j) q = convolve_sawtooth(q);
  UniPoly closed(q.size() + 1);
  for (std::size_t i = 0; i < q.size(); ++i) {
    closed[i] += q[i] / Rational(2);
    closed[i + 1] -= q[i];
  }
  return integral01(closed) / Rational(k);
}

Rational wheel_ordered_integral(int k) {
  if (k < 1) throw DomainError("wheel integral needs k >= 1");
  if (k == 1) return Rational(0);
  // On the ordered simplex the wrap-around factor P(theta_1 - theta_k) equals
  // -(theta_k - theta_1 - 1/2); the other k-1 factors are ordinary edges.
  EdgeIntegrand e;
  e.m = k;
  for (int i = 1; i < k; ++i) e.edges.emplace_back(i, i + 1);
  e.edges.emplace_back(1, k);
  return -simplex_integral(e);
}

std::vector<Rational> a_hat_factor(int order) {
  if (order < 0) throw DomainError("order must be nonnegative");
  // sinh(x/2)/(x/2) = sum x^{2k} / (4^k (2k+1)!), then invert the series
  std::vector<Rational> s(order + 1), inv(order + 1);
  Rational pow4(1);
  for (int k = 0; 2 * k <= order; ++k) {
    s[2 * k] = Rational(1) / (pow4 * Rational::factorial(2 * k + 1));
    pow4 *= Rational(4);
  }
  inv[0] = Rational(1);
  for (int i = 1; i <= order; ++i) {
    Rational acc;
    for (int j = 1; j <= i; ++j) acc += s[j] * inv[i - j];
    inv[i] = -acc;
  }
  return inv;
}

}  // namespace bvtrace
