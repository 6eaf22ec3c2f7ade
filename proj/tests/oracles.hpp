#pragma once
// Test-only reference implementations. They use GMP rationals and doubles
// directly and share no code with the engine, so agreement is evidence.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Q = mpq_class;

inline Q factorial(int n) {
  mpz_class f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Q(f);
}

inline Q binom(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

/// B_0..B_n from sum_{j=0}^{m} C(m+1, j) B_j = 0 (B_1 = -1/2).
inline std::vector<Q> bernoulli(int n) {
  std::vector<Q> b(n + 1);
  b[0] = 1;
  for (int m = 1; m <= n; ++m) {
    Q s = 0;
    for (int j = 0; j < m; ++j) s += binom(m + 1, j) * b[j];
    b[m] = -s / (m + 1);
  }
  return b;
}

/// (x/2)/sinh(x/2) through x^order, by inverting sinh(x/2)/(x/2) = sum (x/2)^{2k}/(2k+1)!.
inline std::vector<Q> ahat_by_series(int order) {
  std::vector<Q> s(order + 1);
  for (int k = 0; 2 * k <= order; ++k) s[2 * k] = Q(1) / (factorial(2 * k + 1) * Q(mpz_class(1) << (2 * k)));
  std::vector<Q> inv(order + 1);
  inv[0] = 1;
  for (int m = 1; m <= order; ++m) {
    Q acc = 0;
    for (int j = 1; j <= m; ++j) acc += s[j] * inv[m - j];
    inv[m] = -acc;
  }
  return inv;
}

/// Same coefficients from B_{2k}(1/2) = (2^{1-2k} - 1) B_{2k}: x^{2k} coefficient B_{2k}(1/2)/(2k)!.
inline std::vector<Q> ahat_by_bernoulli(int order) {
  auto b = bernoulli(order);
  std::vector<Q> out(order + 1);
  for (int k = 0; 2 * k <= order; ++k) {
    Q two_pow = k == 0 ? Q(2) : Q(1, 1) / Q(mpz_class(1) << (2 * k - 1));
    out[2 * k] = (two_pow - 1) * b[2 * k] / factorial(2 * k);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre quadrature on [0, 1]

inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1 - z);
    w[i] = 1.0 / ((1 - z * z) * dp * dp);
  }
  return {x, w};
}

/// Integral of prod (theta_j - theta_i - 1/2) over 0 < theta_1 < ... < theta_m < 1
/// with theta_0 = 0, by nested Gauss-Legendre (the integrand is polynomial there).
inline double simplex_quadrature(int m, const std::vector<std::pair<int, int>>& edges) {
  int nodes = static_cast<int>(edges.size()) / 2 + m + 2;
  auto [gx, gw] = gauss_legendre(nodes);
  std::vector<double> theta(m + 1, 0.0);
  std::function<double(int, double)> rec = [&](int level, double lo) -> double {
    if (level > m) {
      double v = 1;
      for (auto [i, j] : edges) v *= theta[j] - theta[i] - 0.5;
      return v;
    }
    double width = 1 - lo, s = 0;
    for (int q = 0; q < nodes; ++q) {
      theta[level] = lo + width * gx[q];
      s += gw[q] * width * rec(level + 1, theta[level]);
    }
    return s;
  };
  return rec(1, 0.0);
}

// ---------------------------------------------------------------------------
// q-series

using Series = std::vector<Q>;

inline Series mul(const Series& a, const Series& b) {
  std::size_t n = std::min(a.size(), b.size());
  Series c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline mpz_class sigma(int power, int n) {
  mpz_class s = 0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) {
      mpz_class t;
      mpz_ui_pow_ui(t.get_mpz_t(), d, power);
      s += t;
    }
  return s;
}

/// E2 = 1 - 24 sum sigma_1, E4 = 1 + 240 sum sigma_3, E6 = 1 - 504 sum sigma_5.
inline Series eisenstein(int k, int n) {
  int c = k == 2 ? -24 : k == 4 ? 240 : -504;
  Series s(n + 1);
  s[0] = 1;
  for (int m = 1; m <= n; ++m) s[m] = Q(c * sigma(k - 1, m));
  return s;
}

inline Series q_derivative(const Series& s) {
  Series d(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) d[i] = s[i] * static_cast<long>(i);
  return d;
}

/// prod_{m>=1} (1 + q^m)^2 and prod_{m>=1} (1 - q^m)^{-2} through q^level.
inline Series fermion_product(int level) {
  Series s(level + 1);
  s[0] = 1;
  for (int m = 1; m <= level; ++m) {
    Series f(level + 1);
    f[0] = 1;
    f[m] = 1;
    s = mul(mul(s, f), f);
  }
  return s;
}

inline Series boson_product(int level) {
  Series s(level + 1);
  s[0] = 1;
  for (int m = 1; m <= level; ++m) {
    // multiply by 1/(1 - q^m) twice: s_i += s_{i-m}
    for (int rep = 0; rep < 2; ++rep)
      for (int i = m; i <= level; ++i) s[i] += s[i - m];
  }
  return s;
}

/// Brute-force trace over all two-species states up to the given energy:
/// sum of weight(state) q^{energy}. Occupations are 0/1 when fermionic.
/// weight receives occupations[species][mode] (mode index 1..level).
inline Series enumerate_states(int level, bool fermionic,
                               const std::function<Q(const std::vector<std::vector<int>>&)>& weight) {
  Series out(level + 1);
  std::vector<std::vector<int>> occ(2, std::vector<int>(level + 1, 0));
  std::function<void(int, int, int)> rec = [&](int species, int mode, int energy) {
    if (species == 2) {
      out[energy] += weight(occ);
      return;
    }
    if (mode > level) {
      rec(species + 1, 1, energy);
      return;
    }
    int cap = fermionic ? 1 : level;
    for (int k = 0; k <= cap && energy + k * mode <= level; ++k) {
      occ[species][mode] = k;
      rec(species, mode + 1, energy + k * mode);
    }
    occ[species][mode] = 0;
  };
  rec(0, 1, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Free-field OPEs by explicit Wick contraction and Laurent expansion.
// Fields: 0 = beta, 1 = gamma (even), 2 = b, 3 = c (odd).

struct Factor {
  int field;
  int k;  // derivative order
  bool operator<(const Factor& o) const { return field != o.field ? field < o.field : k < o.k; }
  bool operator==(const Factor& o) const { return field == o.field && k == o.k; }
};

inline bool odd(const Factor& f) { return f.field >= 2; }

/// Coefficient of h/(z-w) in phi_i(z) phi_j(w):
/// beta gamma ~ h/(z-w) ~ -gamma beta,  b c ~ h/(z-w) ~ c b.
inline int contraction(int i, int j) {
  if (i == 0 && j == 1) return 1;
  if (i == 1 && j == 0) return -1;
  if ((i == 2 && j == 3) || (i == 3 && j == 2)) return 1;
  return 0;
}

using Key = std::pair<int, std::vector<Factor>>;  // (h power, sorted factors)
using Field = std::map<Key, Q>;

inline void add_term(Field& f, int h, std::vector<Factor> factors, const Q& c) {
  if (c == 0) return;
  // bubble sort with a Koszul sign; repeated odd factors vanish
  int sign = 1;
  for (std::size_t i = 0; i < factors.size(); ++i)
    for (std::size_t j = 0; j + 1 < factors.size() - i; ++j)
      if (factors[j + 1] < factors[j]) {
        if (odd(factors[j]) && odd(factors[j + 1])) sign = -sign;
        std::swap(factors[j], factors[j + 1]);
      }
  for (std::size_t i = 0; i + 1 < factors.size(); ++i)
    if (factors[i] == factors[i + 1] && odd(factors[i])) return;
  Q& slot = f[{h, factors}];
  slot += sign * c;
  if (slot == 0) f.erase({h, factors});
}

/// d^m of a product of factors (Leibniz), as a field with coefficient c.
inline Field derivative(const std::vector<Factor>& factors, int h, const Q& c, int m) {
  Field cur;
  if (factors.empty()) {
    if (m == 0) cur[{h, {}}] = c;
    return cur;
  }
  std::map<std::vector<Factor>, Q> raw{{factors, c}};
  for (int step = 0; step < m; ++step) {
    std::map<std::vector<Factor>, Q> next;
    for (const auto& [fs, coef] : raw)
      for (std::size_t i = 0; i < fs.size(); ++i) {
        auto g = fs;
        ++g[i].k;
        next[g] += coef;
      }
    raw = std::move(next);
  }
  for (const auto& [fs, coef] : raw) add_term(cur, h, fs, coef);
  return cur;
}

inline Field derivative(const Field& f, int m) {
  Field out;
  for (const auto& [key, c] : f)
    for (const auto& [k2, c2] : derivative(key.second, key.first, c, m)) add_term(out, k2.first, k2.second, c2);
  return out;
}

/// Sign of reordering `seq` (parities) by permutation `perm` (new position -> old index).
inline int koszul_sign(const std::vector<bool>& parity, const std::vector<int>& perm) {
  int sign = 1;
  for (std::size_t a = 0; a < perm.size(); ++a)
    for (std::size_t b = a + 1; b < perm.size(); ++b)
      if (perm[a] > perm[b] && parity[perm[a]] && parity[perm[b]]) sign = -sign;
  return sign;
}

/// A_(n)B: the coefficient of (z-w)^{-n-1} in A(z)B(w).
inline Field nth_product(const Field& A, const Field& B, int n) {
  Field out;
  for (const auto& [ka, ca] : A)
    for (const auto& [kb, cb] : B) {
      const auto& fa = ka.second;
      const auto& fb = kb.second;
      int na = static_cast<int>(fa.size()), nb = static_cast<int>(fb.size());
      std::vector<bool> parity;
      for (const auto& f : fa) parity.push_back(odd(f));
      for (const auto& f : fb) parity.push_back(odd(f));
      std::vector<int> match(na, -1);
      std::vector<bool> used(nb, false);
      std::function<void(int)> rec = [&](int i) {
        if (i < na) {
          rec(i + 1);  // a_i stays uncontracted
          for (int j = 0; j < nb; ++j)
            if (!used[j] && contraction(fa[i].field, fb[j].field) != 0) {
              used[j] = true;
              match[i] = j;
              rec(i + 1);
              match[i] = -1;
              used[j] = false;
            }
          return;
        }
        // Laurent factor of the contractions
        Q coef = ca * cb;
        int power = 0, pairs = 0;
        std::vector<int> perm;
        for (int a = 0; a < na; ++a) {
          if (match[a] < 0) continue;
          const Factor& x = fa[a];
          const Factor& y = fb[match[a]];
          Q c = contraction(x.field, y.field);
          int p = -1;
          for (int t = 0; t < x.k; ++t) c *= p--;   // d/dz (z-w)^p
          for (int t = 0; t < y.k; ++t) c *= -(p--);  // d/dw (z-w)^p
          coef *= c;
          power += p;
          ++pairs;
          perm.push_back(a);
          perm.push_back(na + match[a]);
        }
        std::vector<Factor> rest_a, rest_b;
        for (int a = 0; a < na; ++a)
          if (match[a] < 0) {
            perm.push_back(a);
            rest_a.push_back(fa[a]);
          }
        for (int b = 0; b < nb; ++b)
          if (!used[b]) {
            perm.push_back(na + b);
            rest_b.push_back(fb[b]);
          }
        int m = -n - 1 - power;  // Taylor order of the z-side remainder
        if (m < 0) return;
        coef *= koszul_sign(parity, perm);
        coef /= factorial(m);
        int h = ka.first + kb.first + pairs;
        for (const auto& [kd, cd] : derivative(rest_a, h, coef, m)) {
          auto prod = kd.second;
          prod.insert(prod.end(), rest_b.begin(), rest_b.end());
          add_term(out, kd.first, prod, cd);
        }
      };
      rec(0);
    }
  return out;
}

/// Graded Euler-Lagrange derivative sum_k (-d)^k dX/d(d^k phi), left derivatives.
inline Field variational_derivative(const Field& X, int phi) {
  Field out;
  int max_k = 0;
  for (const auto& [key, c] : X)
    for (const auto& f : key.second) max_k = std::max(max_k, f.k);
  for (int k = 0; k <= max_k; ++k) {
    Field partial;
    for (const auto& [key, c] : X) {
      const auto& fs = key.second;
      int odd_before = 0;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        if (fs[i].field == phi && fs[i].k == k) {
          auto rest = fs;
          rest.erase(rest.begin() + static_cast<long>(i));
          Q s = (phi >= 2 && odd_before % 2) ? Q(-c) : c;
          add_term(partial, key.first, rest, s);
        }
        odd_before += odd(fs[i]);
      }
    }
    for (const auto& [kd, cd] : derivative(partial, k)) add_term(out, kd.first, kd.second, k % 2 ? Q(-cd) : cd);
  }
  return out;
}

/// True when X is a total derivative plus constants, i.e. its zero mode vanishes.
inline bool zero_mode_vanishes(const Field& X) {
  for (int phi = 0; phi < 4; ++phi)
    if (!variational_derivative(X, phi).empty()) return false;
  return true;
}

}  // namespace oracle
