#include "bvtrace/qmod.hpp"

#include <algorithm>
#include <numeric>

#include "bvtrace/errors.hpp"
#include "bvtrace/hbar_series.hpp"

namespace bvtrace {

QSeries QSeries::constant(int n, const Rational& c) {
  QSeries s(n);
  s.c_[0] = c;
  return s;
}

bool QSeries::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return x.is_zero(); });
}

QSeries QSeries::truncated(int n) const {
  QSeries s = *this;
  if (n < truncation()) s.c_.resize(static_cast<std::size_t>(std::max(n, -1) + 1));
  return s;
}

QSeries QSeries::operator-() const {
  QSeries s = *this;
  for (auto& x : s.c_) x = -x;
  return s;
}

QSeries& QSeries::operator+=(const QSeries& rhs) {
  if (rhs.c_.size() < c_.size()) c_.resize(rhs.c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
  return *this;
}

QSeries& QSeries::operator-=(const QSeries& rhs) { return *this += -rhs; }

QSeries operator*(const QSeries& a, const QSeries& b) {
  int n = std::min(a.truncation(), b.truncation());
  QSeries out(n);
  for (int i = 0; i <= n; ++i) {
    if (a.c_[i].is_zero()) continue;
    for (int j = 0; i + j <= n; ++j)
      if (!b.c_[j].is_zero()) out.c_[i + j] += a.c_[i] * b.c_[j];
  }
  return out;
}

QSeries QSeries::scaled(const Rational& c) const {
  QSeries s = *this;
  for (auto& x : s.c_) x *= c;
  return s;
}

QSeries QSeries::q_derivative() const {
  QSeries s = *this;
  for (std::size_t i = 0; i < s.c_.size(); ++i) s.c_[i] *= Rational(static_cast<long long>(i));
  return s;
}

bool operator==(const QSeries& a, const QSeries& b) {
  std::size_t n = std::min(a.c_.size(), b.c_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!(a.c_[i] == b.c_[i])) return false;
  return true;
}

std::string QSeries::to_string() const {
  std::vector<std::pair<Rational, std::string>> parts;
  for (std::size_t i = 0; i < c_.size(); ++i) parts.emplace_back(c_[i], text::power("q", static_cast<int>(i)));
  return text::join_terms(parts);
}

Rational bernoulli(int k) {
  if (k < 0) throw DomainError("Bernoulli index must be >= 0");
  std::vector<Rational> b(static_cast<std::size_t>(k) + 1);
  b[0] = 1;
  for (int m = 1; m <= k; ++m) {
    Rational s;
    for (int j = 0; j < m; ++j) s += Rational::binomial(m + 1, j) * b[j];
    b[m] = -s / Rational(m + 1);
  }
  return b[k];
}

QSeries eisenstein(int k, int n) {
  if (k < 2 || k % 2) throw DomainError("Eisenstein series need even weight >= 2");
  if (n < 0) throw DomainError("negative truncation");
  Rational factor = -Rational(2 * k) / bernoulli(k);
  QSeries s = QSeries::constant(n, Rational(1));
  for (int m = 1; m <= n; ++m) {
    Rational sigma;
    for (int d = 1; d <= m; ++d) {
      if (m % d) continue;
      Rational p(1);
      for (int e = 0; e < k - 1; ++e) p *= Rational(d);
      sigma += p;
    }
    s[m] = factor * sigma;
  }
  return s;
}

QuasiModularForm::QuasiModularForm(int weight, std::map<Exponents, Rational> coeffs) : weight_(weight) {
  for (auto& [e, c] : coeffs) {
    if (c.is_zero()) continue;
    if (e[0] < 0 || e[1] < 0 || e[2] < 0 || 2 * e[0] + 4 * e[1] + 6 * e[2] != weight)
      throw DomainError("monomial does not have weight " + std::to_string(weight));
    coeffs_.emplace(e, c);
  }
}

QSeries QuasiModularForm::expansion(int n) const {
  std::array<QSeries, 3> gens{eisenstein(2, n), eisenstein(4, n), eisenstein(6, n)};
  QSeries out(n);
  for (const auto& [e, c] : coeffs_) {
    QSeries term = QSeries::constant(n, c);
    for (int g = 0; g < 3; ++g)
      for (int i = 0; i < e[g]; ++i) term = term * gens[g];
    out += term;
  }
  return out;
}

std::string QuasiModularForm::to_string() const {
  std::vector<std::pair<Rational, std::string>> parts;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    const auto& e = it->first;
    parts.emplace_back(it->second, text::product({text::power("E2", e[0]), text::power("E4", e[1]), text::power("E6", e[2])}));
  }
  return text::join_terms(parts);
}

std::vector<QuasiModularForm::Exponents> quasi_modular_basis(int weight) {
  if (weight < 0 || weight % 2) throw DomainError("quasi-modular weight must be even and >= 0");
  std::vector<QuasiModularForm::Exponents> out;
  for (int a = weight / 2; a >= 0; --a)
    for (int b = (weight - 2 * a) / 4; b >= 0; --b) {
      int rest = weight - 2 * a - 4 * b;
      if (rest % 6 == 0) out.push_back({a, b, rest / 6});
    }
  return out;
}

Recognition recognize(const QSeries& s, int weight) {
  auto basis = quasi_modular_basis(weight);
  int n = s.truncation();
  if (n < 0) throw UndecidableError("undecidable at this order: empty series");
  int cols = static_cast<int>(basis.size());
  std::vector<std::vector<Rational>> m(n + 1, std::vector<Rational>(cols + 1));
  for (int j = 0; j < cols; ++j) {
    QSeries e = QuasiModularForm(weight, {{basis[j], Rational(1)}}).expansion(n);
    for (int i = 0; i <= n; ++i) m[i][j] = e[i];
  }
  for (int i = 0; i <= n; ++i) m[i][cols] = s[i];
  int r = 0;
  std::vector<int> pivots;
  for (int c = 0; c < cols && r <= n; ++c) {
    int piv = -1;
    for (int i = r; i <= n; ++i)
      if (!m[i][c].is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[piv], m[r]);
    Rational inv = m[r][c].inverse();
    for (auto& x : m[r]) x *= inv;
    for (int i = 0; i <= n; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      Rational f = m[i][c];
      for (int k = 0; k <= cols; ++k) m[i][k] -= f * m[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  if (static_cast<int>(pivots.size()) < cols)
    throw UndecidableError("undecidable at this order: weight " + std::to_string(weight) + " has " +
                           std::to_string(cols) + " basis forms but only " + std::to_string(pivots.size()) +
                           " are independent through q^" + std::to_string(n));
  std::map<QuasiModularForm::Exponents, Rational> coeffs;
  for (int i = 0; i < cols; ++i) coeffs[basis[pivots[i]]] = m[i][cols];
  Recognition out;
  out.form = QuasiModularForm(weight, coeffs);
  out.residual = s - out.form.expansion(n);
  out.success = out.residual.is_zero();
  return out;
}

FourierKernel::FourierKernel(int k_max, int n)
    : k_max_(k_max), n_(n), c_(static_cast<std::size_t>(2 * k_max + 1), std::vector<Rational>(static_cast<std::size_t>(n) + 1)) {
  if (k_max < 0 || n < 0) throw DomainError("Fourier kernel bounds must be >= 0");
}

QSeries FourierKernel::row(int k) const {
  if (k < -k_max_ || k > k_max_) return QSeries(n_);
  return QSeries(c_[k + k_max_]);
}

QSeries a_cycle_single(const KernelMap& kernels, int n, int truncation) {
  // multivariate Fourier polynomial: index vector -> q-series
  std::map<std::vector<int>, QSeries> cur{{std::vector<int>(n, 0), QSeries::constant(truncation, Rational(1))}};
  for (const auto& [ij, ker] : kernels) {
    auto [i, j] = ij;
    if (i < 0 || j < 0 || i >= n || j >= n) throw DomainError("kernel variable index out of range");
    std::map<std::vector<int>, QSeries> next;
    for (const auto& [idx, ser] : cur)
      for (int k = -ker.k_max(); k <= ker.k_max(); ++k) {
        QSeries row = ker.row(k).truncated(truncation);
        if (row.is_zero()) continue;
        std::vector<int> id = idx;
        id[i] += k;
        if (i != j) id[j] -= k;
        QSeries prod = ser * row;
        auto it = next.find(id);
        if (it == next.end())
          next.emplace(std::move(id), std::move(prod));
        else
          it->second += prod;
      }
    cur = std::move(next);
  }
  // iterated constant-mode extraction in each variable in turn
  auto it = cur.find(std::vector<int>(n, 0));
  return it == cur.end() ? QSeries(truncation) : it->second.truncated(truncation);
}

QSeries a_cycle_average(const KernelMap& kernels, int n, const std::map<std::vector<int>, KernelMap>& per_ordering) {
  if (n < 1) throw DomainError("A-cycle average needs n >= 1");
  if (n > 8) throw DomainError("A-cycle average supports n <= 8");
  int trunc = 1 << 20;
  auto bound = [&](const KernelMap& km) {
    for (const auto& [_, k] : km) trunc = std::min(trunc, k.truncation());
  };
  bound(kernels);
  for (const auto& [_, km] : per_ordering) bound(km);
  if (trunc == (1 << 20)) trunc = 0;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  QSeries sum(trunc);
  long long count = 0;
  do {
    auto it = per_ordering.find(perm);
    sum += a_cycle_single(it == per_ordering.end() ? kernels : it->second, n, trunc);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum.scaled(Rational(1, count));
}

DiagonalOperator DiagonalOperator::identity() {
  DiagonalOperator op;
  op.constant = 1;
  return op;
}

DiagonalOperator DiagonalOperator::energy() {
  DiagonalOperator op;
  op.poly[0] = {Rational(0), Rational(1)};
  op.poly[1] = {Rational(0), Rational(1)};
  return op;
}

DiagonalOperator DiagonalOperator::number(int species, int mode) {
  if (species < 0 || species > 1 || mode < 1) throw DomainError("number operator needs species 0/1 and mode >= 1");
  DiagonalOperator op;
  op.extra[{species, mode}] = 1;
  return op;
}

Rational DiagonalOperator::weight(int species, int mode) const {
  Rational w, p(1);
  for (const auto& c : poly[species]) {
    w += c * p;
    p *= Rational(mode);
  }
  auto it = extra.find({species, mode});
  if (it != extra.end()) w += it->second;
  return w;
}

std::vector<std::vector<int>> species_states(FockSystem system, int level) {
  if (level < 0) throw DomainError("negative Fock level");
  bool fermionic = system == FockSystem::bc;
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int min_part, int left) -> void {
    out.push_back(cur);
    for (int part = min_part; part <= left; ++part) {
      cur.push_back(part);
      self(self, fermionic ? part + 1 : part, left - part);
      cur.pop_back();
    }
  };
  rec(rec, 1, level);
  return out;
}

QSeries fock_trace(const FockSpace& space, const DiagonalOperator& op) {
  int l = space.level;
  auto states = species_states(space.system, l);
  // per species: state count and summed operator weight at each level
  std::array<std::vector<Rational>, 2> count, wsum;
  for (int s = 0; s < 2; ++s) {
    count[s].assign(static_cast<std::size_t>(l) + 1, Rational());
    wsum[s].assign(static_cast<std::size_t>(l) + 1, Rational());
    std::vector<Rational> w(static_cast<std::size_t>(l) + 1);
    for (int k = 1; k <= l; ++k) w[k] = op.weight(s, k);
    for (const auto& st : states) {
      int lev = std::accumulate(st.begin(), st.end(), 0);
      count[s][lev] += Rational(1);
      for (int k : st) wsum[s][lev] += w[k];
    }
  }
  QSeries out(l);
  for (int a = 0; a <= l; ++a)
    for (int b = 0; a + b <= l; ++b) {
      Rational both = count[0][a] * count[1][b];
      out[a + b] += op.constant * both + wsum[0][a] * count[1][b] + count[0][a] * wsum[1][b];
    }
  return out;
}

QSeries fock_character(const FockSpace& space) { return fock_trace(space, DiagonalOperator::identity()); }

}  // namespace bvtrace
