#include "bvtrace/weyl.hpp"

#include <map>
#include <mutex>
#include <unordered_map>

#include "bvtrace/errors.hpp"

namespace bvtrace {
namespace {

std::uint64_t intern_tensor(const std::vector<Rational>& m) {
  static std::mutex mu;
  static std::map<std::string, std::uint64_t> ids;
  std::string key;
  for (const auto& x : m) key += x.to_string() + ",";
  std::lock_guard lock(mu);
  auto [it, inserted] = ids.emplace(key, ids.size() + 1);
  return it->second;
}

struct StarKey {
  std::uint64_t id, a, b;
  bool operator==(const StarKey&) const = default;
};

struct StarKeyHash {
  std::size_t operator()(const StarKey& k) const noexcept {
    std::uint64_t h = k.id * 0x9e3779b97f4a7c15ULL;
    h ^= k.a + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
    h ^= k.b + 0x94d049bb133111ebULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

void expand_star(const PoissonTensor& pi, std::size_t idx, Monomial a, Monomial b, const Rational& weight, int k,
                 std::vector<WeylTerm>& out) {
  const auto& entries = pi.entries();
  if (idx == entries.size()) {
    Rational c = weight;
    for (int i = 0; i < k; ++i) c /= Rational(2);
    out.push_back({k, a * b, c});
    return;
  }
  const auto& ent = entries[idx];
  int top = std::min<int>(a.e[ent.a], b.e[ent.b]);
  Rational w = weight;
  for (int c = 0; c <= top; ++c) {
    if (c > 0) {
      // one more contraction on this entry: factor Pi * alpha_a * beta_b / c
      w *= ent.value * Rational(a.e[ent.a]) * Rational(b.e[ent.b]) / Rational(c);
      --a.e[ent.a];
      --b.e[ent.b];
    }
    expand_star(pi, idx + 1, a, b, w, k + c, out);
  }
}

}  // namespace

PoissonTensor::PoissonTensor(int n, std::vector<Rational> m) : n_(n), m_(std::move(m)) {
  for (int a = 0; a < dim(); ++a)
    for (int b = 0; b < dim(); ++b)
      if (!at(a, b).is_zero()) entries_.push_back({a, b, at(a, b)});
  id_ = intern_tensor(m_);
}

PoissonTensor PoissonTensor::standard(int n) {
  if (n < 1 || 2 * n > kMaxVars) throw DomainError("n must be in 1.." + std::to_string(kMaxVars / 2));
  std::vector<Rational> m(4 * n * n);
  for (int i = 0; i < n; ++i) {
    m[i * 2 * n + n + i] = 1;
    m[(n + i) * 2 * n + i] = -1;
  }
  return PoissonTensor(n, std::move(m));
}

PoissonTensor PoissonTensor::from_matrix(int n, const std::vector<std::vector<Rational>>& rows) {
  if (n < 1 || 2 * n > kMaxVars) throw DomainError("n must be in 1.." + std::to_string(kMaxVars / 2));
  int d = 2 * n;
  if (static_cast<int>(rows.size()) != d) throw DomainError("Poisson matrix must be 2n x 2n");
  std::vector<Rational> m;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != d) throw DomainError("Poisson matrix must be 2n x 2n");
    m.insert(m.end(), r.begin(), r.end());
  }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      if (m[a * d + b] != -m[b * d + a]) throw DomainError("Poisson matrix is not antisymmetric");
  // invertibility by exact elimination
  std::vector<Rational> w = m;
  for (int col = 0; col < d; ++col) {
    int piv = -1;
    for (int r = col; r < d; ++r)
      if (!w[r * d + col].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) throw DomainError("Poisson matrix is singular");
    for (int c = 0; c < d; ++c) std::swap(w[piv * d + c], w[col * d + c]);
    for (int r = col + 1; r < d; ++r) {
      Rational f = w[r * d + col] / w[col * d + col];
      if (f.is_zero()) continue;
      for (int c = col; c < d; ++c) w[r * d + c] -= f * w[col * d + c];
    }
  }
  return PoissonTensor(n, std::move(m));
}

std::vector<std::string> weyl_variable_names(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("p" + std::to_string(i));
  for (int i = 1; i <= n; ++i) names.push_back("q" + std::to_string(i));
  return names;
}

std::vector<std::string> PoissonTensor::variable_names() const { return weyl_variable_names(n_); }

WeylElement WeylElement::constant(int n, int order, const Rational& c) {
  return monomial(n, order, Monomial{}, c);
}

WeylElement WeylElement::variable(int n, int order, int a) { return monomial(n, order, Monomial::variable(a)); }

WeylElement WeylElement::monomial(int n, int order, const Monomial& m, const Rational& c, int h) {
  WeylElement w(n, order);
  if (!c.is_zero() && h <= order) w.terms_.push_back({h, m, c});
  return w;
}

WeylElement WeylElement::from_terms(int n, int order, std::vector<WeylTerm> terms) {
  WeylElement w(n, order);
  std::erase_if(terms, [&](const WeylTerm& t) { return t.h > order; });
  canonicalize_terms(terms, [](const auto& a, const auto& b) { return weyl_term_less(a, b); });
  w.terms_ = std::move(terms);
  return w;
}

int WeylElement::valuation() const {
  if (terms_.empty()) return order_ + 1;
  return terms_.front().h;
}

int WeylElement::max_y_degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.m.degree());
  return d;
}

HbarSeries WeylElement::coefficient(const Monomial& m) const {
  std::map<int, Rational> acc;
  for (const auto& t : terms_)
    if (t.m == m) acc[t.h] += t.c;
  return HbarSeries::from_terms(acc, order_);
}

HbarSeries WeylElement::constant_part() const { return coefficient(Monomial{}); }

WeylElement WeylElement::truncated(int order) const {
  WeylElement w = *this;
  w.order_ = std::min(order, order_);
  std::erase_if(w.terms_, [&](const WeylTerm& t) { return t.h > w.order_; });
  return w;
}

WeylElement WeylElement::operator-() const {
  WeylElement w = *this;
  for (auto& t : w.terms_) t.c = -t.c;
  return w;
}

WeylElement& WeylElement::operator+=(const WeylElement& rhs) {
  if (rhs.n_ != n_) throw DomainError("Weyl elements over different n");
  std::vector<WeylTerm> all = terms_;
  all.insert(all.end(), rhs.terms_.begin(), rhs.terms_.end());
  return *this = from_terms(n_, std::min(order_, rhs.order_), std::move(all));
}

WeylElement& WeylElement::operator-=(const WeylElement& rhs) { return *this += -rhs; }

WeylElement& WeylElement::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.c *= c;
  return *this;
}

WeylElement WeylElement::scaled(const HbarSeries& s) const {
  int order = std::min(order_ + s.valuation(), s.order() + valuation());
  std::vector<WeylTerm> out;
  for (auto& [k, c] : s.terms())
    for (const auto& t : terms_) out.push_back({t.h + k, t.m, t.c * c});
  return from_terms(n_, order, std::move(out));
}

WeylElement WeylElement::shifted(int k) const {
  WeylElement w = *this;
  w.order_ += k;
  for (auto& t : w.terms_) t.h += k;
  return w;
}

WeylElement WeylElement::pointwise(const WeylElement& rhs) const {
  if (rhs.n_ != n_) throw DomainError("Weyl elements over different n");
  int order = std::min(order_ + rhs.valuation(), rhs.order_ + valuation());
  std::vector<WeylTerm> out;
  for (const auto& s : terms_)
    for (const auto& t : rhs.terms_)
      if (s.h + t.h <= order) out.push_back({s.h + t.h, s.m * t.m, s.c * t.c});
  return from_terms(n_, order, std::move(out));
}

WeylElement WeylElement::derivative(int a) const {
  std::vector<WeylTerm> out;
  for (const auto& t : terms_) {
    if (t.m.e[a] == 0) continue;
    WeylTerm d = t;
    d.c *= Rational(t.m.e[a]);
    --d.m.e[a];
    out.push_back(d);
  }
  return from_terms(n_, order_, std::move(out));
}

WeylElement WeylElement::y_homogeneous(int d) const {
  WeylElement w(n_, order_);
  for (const auto& t : terms_)
    if (t.m.degree() == d) w.terms_.push_back(t);
  return w;
}

WeylElement WeylElement::at_hbar_zero() const {
  WeylElement w(n_, order_);
  for (const auto& t : terms_)
    if (t.h == 0) w.terms_.push_back(t);
  return w;
}

bool operator==(const WeylElement& a, const WeylElement& b) {
  if (a.n_ != b.n_) return false;
  int order = std::min(a.order_, b.order_);
  auto ta = a.truncated(order).terms_;
  auto tb = b.truncated(order).terms_;
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i)
    if (ta[i].h != tb[i].h || !(ta[i].m == tb[i].m) || ta[i].c != tb[i].c) return false;
  return true;
}

std::string WeylElement::to_string() const {
  auto names = weyl_variable_names(n_);
  std::vector<std::pair<Rational, std::string>> parts;
  for (const auto& t : terms_) parts.emplace_back(t.c, text::product({text::power("h", t.h), monomial_string(t.m, names)}));
  return text::join_terms(parts);
}

const std::vector<WeylTerm>& monomial_star(const PoissonTensor& pi, const Monomial& a, const Monomial& b) {
  thread_local std::unordered_map<StarKey, std::vector<WeylTerm>, StarKeyHash> cache;
  StarKey key{pi.id(), a.bits(), b.bits()};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() > (1u << 20)) cache.clear();
  std::vector<WeylTerm> out;
  expand_star(pi, 0, a, b, Rational(1), 0, out);
  canonicalize_terms(out, [](const auto& a, const auto& b) { return weyl_term_less(a, b); });
  return cache.emplace(key, std::move(out)).first->second;
}

WeylElement moyal_star(const WeylElement& f, const WeylElement& g, const PoissonTensor& pi) {
  if (f.n() != g.n() || f.n() != pi.n()) throw DomainError("mismatched n in star product");
  int order = std::min(f.order() + g.valuation(), g.order() + f.valuation());
  std::vector<WeylTerm> out;
  for (const auto& s : f.terms())
    for (const auto& t : g.terms()) {
      int base = s.h + t.h;
      if (base > order) continue;
      Rational c = s.c * t.c;
      for (const auto& u : monomial_star(pi, s.m, t.m)) {
        if (base + u.h > order) break;
        out.push_back({base + u.h, u.m, c * u.c});
      }
    }
  return WeylElement::from_terms(f.n(), order, std::move(out));
}

WeylElement star_commutator(const WeylElement& f, const WeylElement& g, const PoissonTensor& pi) {
  return (moyal_star(f, g, pi) - moyal_star(g, f, pi)).shifted(-1);
}

WeylElement poisson_bracket(const WeylElement& f, const WeylElement& g, const PoissonTensor& pi) {
  WeylElement out(f.n(), std::min(f.order() + g.valuation(), g.order() + f.valuation()));
  for (const auto& e : pi.entries()) out += f.derivative(e.a).pointwise(g.derivative(e.b)) * e.value;
  return out;
}

Projections pr_projections(const WeylElement& f) {
  return {f.at_hbar_zero().y_homogeneous(2), f.constant_part()};
}

Curvature curvature_bilinears(const WeylElement& f, const WeylElement& g, const PoissonTensor& pi) {
  WeylElement fg = star_commutator(f, g, pi);
  auto pf = pr_projections(f).quadratic;
  auto pg = pr_projections(g).quadratic;
  WeylElement r1 = star_commutator(pf, pg, pi) - pr_projections(fg).quadratic;
  return {r1, -pr_projections(fg).central};
}

}  // namespace bvtrace
