#include "bvtrace/vertex.hpp"

#include <algorithm>
#include <tuple>

#include "bvtrace/errors.hpp"
#include "bvtrace/hbar_series.hpp"

namespace bvtrace {
namespace {

bool vertex_term_less(const VertexTerm& a, const VertexTerm& b) {
  if (a.h != b.h) return a.h < b.h;
  if (a.legs.size() != b.legs.size()) return a.legs.size() < b.legs.size();
  return a.legs < b.legs;
}

bool mode_term_less(const ModeTerm& a, const ModeTerm& b) {
  if (a.h != b.h) return a.h < b.h;
  if (a.legs.size() != b.legs.size()) return a.legs.size() < b.legs.size();
  if (a.legs != b.legs) return a.legs < b.legs;
  return a.k < b.k;
}

// Sorts legs with the Koszul sign of the odd ones; false if an odd leg repeats.
bool canonical_legs(const GeneratorSet& gens, VertexMonomial& legs, int& sign) {
  for (std::size_t i = 1; i < legs.size(); ++i) {
    for (std::size_t j = i; j > 0 && legs[j] < legs[j - 1]; --j) {
      if (gens.parities[legs[j].g] && gens.parities[legs[j - 1].g]) sign = -sign;
      std::swap(legs[j], legs[j - 1]);
    }
  }
  for (std::size_t i = 1; i < legs.size(); ++i)
    if (legs[i] == legs[i - 1] && gens.parities[legs[i].g]) return false;
  return true;
}

void raise(Leg& leg, int by) {
  int k = leg.k + by;
  if (k > 255) throw DomainError("derivative order overflow");
  leg.k = static_cast<std::uint8_t>(k);
}

template <class Term>
void merge_sorted(std::vector<Term>& terms, bool (*less)(const Term&, const Term&)) {
  std::sort(terms.begin(), terms.end(), less);
  std::vector<Term> out;
  for (auto& t : terms) {
    if (!out.empty() && !less(out.back(), t) && !less(t, out.back()))
      out.back().c += t.c;
    else
      out.push_back(std::move(t));
  }
  std::erase_if(out, [](const Term& t) { return t.c.is_zero(); });
  terms = std::move(out);
}

// T^m(legs)/m!: sum over distributions of m derivatives, weight 1/prod m_i!.
void translate_power(const GeneratorSet& gens, const VertexMonomial& legs, int m, int h, const Rational& c,
                     std::vector<VertexTerm>& out) {
  if (m == 0) {
    out.push_back({h, legs, c});
    return;
  }
  if (legs.empty()) return;
  VertexMonomial cur = legs;
  auto rec = [&](auto&& self, std::size_t i, int left, Rational w) -> void {
    if (i + 1 == legs.size()) {
      cur[i] = legs[i];
      raise(cur[i], left);
      w /= Rational::factorial(left);
      VertexMonomial sorted = cur;
      int sign = 1;
      if (canonical_legs(gens, sorted, sign)) out.push_back({h, std::move(sorted), sign < 0 ? -(c * w) : c * w});
      return;
    }
    for (int a = 0; a <= left; ++a) {
      cur[i] = legs[i];
      raise(cur[i], a);
      self(self, i + 1, left - a, w / Rational::factorial(a));
    }
  };
  rec(rec, 0, m, Rational(1));
}

// Normal-ordered product of two canonical monomials.
bool product_legs(const GeneratorSet& gens, const VertexMonomial& a, const VertexMonomial& b, VertexMonomial& out,
                  int& sign) {
  out = a;
  out.insert(out.end(), b.begin(), b.end());
  return canonical_legs(gens, out, sign);
}

// All Wick contractions between the legs of a(z) and b(w); poles[n] collects A_{(n)}B.
void ope_monomials(const GeneratorSet& gens, const VertexTerm& ta, const VertexTerm& tb, int order,
                   std::map<int, std::vector<VertexTerm>>& poles) {
  const auto& a = ta.legs;
  const auto& b = tb.legs;
  int r = static_cast<int>(a.size()), s = static_cast<int>(b.size());
  std::vector<int> match(r, -1);
  std::vector<bool> used(s, false);
  auto leaf = [&]() {
    int pairs = 0, big_n = 0;
    Rational w(1);
    for (int i = 0; i < r; ++i) {
      if (match[i] < 0) continue;
      const Leg& la = a[i];
      const Leg& lb = b[match[i]];
      ++pairs;
      big_n += la.k + lb.k + 1;
      // d_z^k d_w^l 1/(z-w) = (-1)^k (k+l)! / (z-w)^{k+l+1}
      Rational f = gens.pairing[la.g][lb.g] * Rational::factorial(la.k + lb.k);
      w *= (la.k % 2) ? -f : f;
    }
    if (pairs == 0) return;
    int h = ta.h + tb.h + pairs;
    if (h > order) return;
    // Koszul sign of reordering a_1..a_r b_1..b_s into R_A, (a b) pairs, R_B.
    std::vector<int> seq;
    for (int i = 0; i < r; ++i)
      if (match[i] < 0) seq.push_back(i);
    for (int i = 0; i < r; ++i)
      if (match[i] >= 0) {
        seq.push_back(i);
        seq.push_back(r + match[i]);
      }
    for (int j = 0; j < s; ++j)
      if (!used[j]) seq.push_back(r + j);
    auto odd = [&](int idx) { return gens.parities[idx < r ? a[idx].g : b[idx - r].g] != 0; };
    int inv = 0;
    for (std::size_t x = 0; x < seq.size(); ++x)
      for (std::size_t y = x + 1; y < seq.size(); ++y)
        if (seq[x] > seq[y] && odd(seq[x]) && odd(seq[y])) ++inv;
    if (inv % 2) w = -w;
    w *= ta.c * tb.c;
    VertexMonomial ra, rb;
    for (int i = 0; i < r; ++i)
      if (match[i] < 0) ra.push_back(a[i]);
    for (int j = 0; j < s; ++j)
      if (!used[j]) rb.push_back(b[j]);
    for (int n = 0; n < big_n; ++n) {
      std::vector<VertexTerm> shifted;
      translate_power(gens, ra, big_n - n - 1, h, w, shifted);
      for (auto& t : shifted) {
        VertexMonomial prod;
        int sign = 1;
        if (!product_legs(gens, t.legs, rb, prod, sign)) continue;
        poles[n].push_back({t.h, std::move(prod), sign < 0 ? -t.c : t.c});
      }
    }
  };
  auto rec = [&](auto&& self, int i) -> void {
    if (i == r) {
      leaf();
      return;
    }
    match[i] = -1;
    self(self, i + 1);
    for (int j = 0; j < s; ++j) {
      if (used[j] || gens.pairing[a[i].g][b[j].g].is_zero()) continue;
      used[j] = true;
      match[i] = j;
      self(self, i + 1);
      match[i] = -1;
      used[j] = false;
    }
  };
  rec(rec, 0);
}

void require_same(const GeneratorSetPtr& a, const GeneratorSetPtr& b) {
  if (a && b && a != b && (a->names != b->names || a->parities != b->parities || a->pairing != b->pairing))
    throw DomainError("vertex polynomials over different generator sets");
}

std::string leg_string(const GeneratorSet& gens, const Leg& l) {
  if (l.k == 0) return gens.names[l.g];
  return "D^" + std::to_string(l.k) + " " + gens.names[l.g];
}

// Row-echelon form of T from derivative level D-1 to level D for a fixed
// multiset of generators.
struct Echelon {
  std::map<VertexMonomial, int> cols;
  std::vector<VertexMonomial> below;  // level D-1 monomials
  struct Row {
    int pivot;
    std::vector<Rational> v;    // over cols
    std::vector<Rational> aug;  // over below: the row equals T(sum aug_x x)
  };
  std::vector<Row> rows;
};

void enumerate_level(const GeneratorSet& gens, const std::vector<std::uint8_t>& multiset, int d,
                     std::vector<VertexMonomial>& out) {
  VertexMonomial cur(multiset.size());
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i == multiset.size()) {
      if (left == 0) out.push_back(cur);
      return;
    }
    int lo = 0;
    if (i > 0 && multiset[i] == multiset[i - 1]) lo = cur[i - 1].k + (gens.parities[multiset[i]] ? 1 : 0);
    for (int k = lo; k <= left; ++k) {
      cur[i] = {multiset[i], static_cast<std::uint8_t>(k)};
      self(self, i + 1, left - k);
    }
  };
  rec(rec, 0, d);
}

const Echelon& echelon(const GeneratorSet& gens, const std::vector<std::uint8_t>& multiset, int d) {
  thread_local std::map<std::tuple<std::vector<int>, std::vector<std::uint8_t>, int>, Echelon> cache;
  std::vector<int> parities;
  for (auto g : multiset) parities.push_back(gens.parities[g]);
  auto key = std::make_tuple(parities, multiset, d);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Echelon e;
  std::vector<VertexMonomial> top;
  enumerate_level(gens, multiset, d, top);
  for (std::size_t i = 0; i < top.size(); ++i) e.cols.emplace(top[i], static_cast<int>(i));
  enumerate_level(gens, multiset, d - 1, e.below);
  int nc = static_cast<int>(top.size()), nb = static_cast<int>(e.below.size());
  std::vector<Echelon::Row> raw;
  for (int x = 0; x < nb; ++x) {
    Echelon::Row row{-1, std::vector<Rational>(nc), std::vector<Rational>(nb)};
    row.aug[x] = 1;
    const auto& legs = e.below[x];
    for (std::size_t i = 0; i < legs.size(); ++i) {
      VertexMonomial t = legs;
      raise(t[i], 1);
      int sign = 1;
      if (!canonical_legs(gens, t, sign)) continue;
      row.v[e.cols.at(t)] += Rational(sign);
    }
    raw.push_back(std::move(row));
  }
  // reduced row echelon form, pivots in column order
  int r = 0;
  for (int c = 0; c < nc && r < nb; ++c) {
    int piv = -1;
    for (int i = r; i < nb; ++i)
      if (!raw[i].v[c].is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(raw[piv], raw[r]);
    Rational s = raw[r].v[c].inverse();
    for (auto& x : raw[r].v) x *= s;
    for (auto& x : raw[r].aug) x *= s;
    for (int i = 0; i < nb; ++i) {
      if (i == r || raw[i].v[c].is_zero()) continue;
      Rational f = raw[i].v[c];
      for (int k = 0; k < nc; ++k) raw[i].v[k] -= f * raw[r].v[k];
      for (int k = 0; k < nb; ++k) raw[i].aug[k] -= f * raw[r].aug[k];
    }
    raw[r].pivot = c;
    e.rows.push_back(raw[r]);
    ++r;
  }
  return cache.emplace(std::move(key), std::move(e)).first->second;
}

int derivative_level(const VertexMonomial& legs) {
  int d = 0;
  for (const auto& l : legs) d += l.k;
  return d;
}

std::vector<ModeTerm> reduce_modes(const GeneratorSet& gens, std::vector<ModeTerm> terms) {
  // bucket key (h, generator multiset, -level, k): descending level within a
  // multiset, so pushed-down parts are processed later
  using Key = std::tuple<int, std::vector<std::uint8_t>, int, int>;
  std::map<Key, std::map<VertexMonomial, Rational>> buckets;
  std::vector<ModeTerm> out;
  for (auto& t : terms) {
    if (t.c.is_zero()) continue;
    if (t.legs.empty()) {
      if (t.k == -1) out.push_back(std::move(t));
      continue;
    }
    std::vector<std::uint8_t> ms;
    for (const auto& l : t.legs) ms.push_back(l.g);
    buckets[{t.h, ms, -derivative_level(t.legs), t.k}][t.legs] += t.c;
  }
  while (!buckets.empty()) {
    auto node = buckets.extract(buckets.begin());
    auto [h, ms, neg_d, k] = node.key();
    int d = -neg_d;
    auto& vec = node.mapped();
    std::erase_if(vec, [](const auto& kv) { return kv.second.is_zero(); });
    if (vec.empty()) continue;
    if (d == 0) {
      for (auto& [legs, c] : vec) out.push_back({h, legs, k, c});
      continue;
    }
    const Echelon& e = echelon(gens, ms, d);
    std::vector<Rational> v(e.cols.size());
    for (auto& [legs, c] : vec) v[e.cols.at(legs)] = c;
    std::vector<Rational> comb(e.below.size());
    for (const auto& row : e.rows) {
      if (v[row.pivot].is_zero()) continue;
      Rational f = v[row.pivot];
      for (std::size_t i = 0; i < v.size(); ++i)
        if (!row.v[i].is_zero()) v[i] -= f * row.v[i];
      for (std::size_t i = 0; i < comb.size(); ++i)
        if (!row.aug[i].is_zero()) comb[i] += f * row.aug[i];
    }
    for (const auto& [legs, idx] : e.cols)
      if (!v[idx].is_zero()) out.push_back({h, legs, k, v[idx]});
    // oint z^k T(X) = -k oint z^{k-1} X
    if (k == 0) continue;
    for (std::size_t i = 0; i < comb.size(); ++i) {
      if (comb[i].is_zero()) continue;
      buckets[{h, ms, -(d - 1), k - 1}][e.below[i]] += -Rational(k) * comb[i];
    }
  }
  merge_sorted(out, mode_term_less);
  return out;
}

}  // namespace

int GeneratorSet::index(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (names[i] == name) return i;
  std::string known;
  for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
  throw DomainError("unknown generator '" + name + "' (known: " + known + ")");
}

void GeneratorSet::validate() const {
  int n = size();
  if (n == 0) throw DomainError("empty generator set");
  if (n > 255) throw DomainError("too many generators");
  if (static_cast<int>(parities.size()) != n || static_cast<int>(pairing.size()) != n)
    throw DomainError("generator data of inconsistent size");
  for (int i = 0; i < n; ++i) {
    if (parities[i] != 0 && parities[i] != 1) throw DomainError("parity must be 0 or 1");
    if (static_cast<int>(pairing[i].size()) != n) throw DomainError("pairing must be square");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!pairing[i][j].is_zero() && parities[i] != parities[j]) throw DomainError("pairing is not even");
      Rational expect = (parities[i] && parities[j]) ? pairing[j][i] : -pairing[j][i];
      if (!(pairing[i][j] == expect)) throw DomainError("pairing is not graded antisymmetric");
    }
}

std::shared_ptr<const GeneratorSet> GeneratorSet::beta_gamma() {
  static const auto g = std::make_shared<const GeneratorSet>(
      GeneratorSet{{"beta", "gamma"}, {0, 0}, {{Rational(0), Rational(1)}, {Rational(-1), Rational(0)}}});
  return g;
}

std::shared_ptr<const GeneratorSet> GeneratorSet::bc() {
  static const auto g = std::make_shared<const GeneratorSet>(
      GeneratorSet{{"b", "c"}, {1, 1}, {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}}});
  return g;
}

std::shared_ptr<const GeneratorSet> GeneratorSet::beta_gamma_bc() {
  static const auto g = [] {
    GeneratorSet s{{"beta", "gamma", "b", "c"}, {0, 0, 1, 1}, std::vector<std::vector<Rational>>(4, std::vector<Rational>(4))};
    s.pairing[0][1] = 1;
    s.pairing[1][0] = -1;
    s.pairing[2][3] = 1;
    s.pairing[3][2] = 1;
    return std::make_shared<const GeneratorSet>(std::move(s));
  }();
  return g;
}

VertexPolynomial VertexPolynomial::from_terms(GeneratorSetPtr gens, int order, std::vector<VertexTerm> terms) {
  if (!gens) throw DomainError("missing generator set");
  VertexPolynomial p(gens, order);
  std::vector<VertexTerm> kept;
  for (auto& t : terms) {
    if (t.h > order || t.c.is_zero()) continue;
    for (const auto& l : t.legs)
      if (l.g >= gens->size()) throw DomainError("generator index out of range");
    int sign = 1;
    if (!canonical_legs(*gens, t.legs, sign)) continue;
    if (sign < 0) t.c = -t.c;
    kept.push_back(std::move(t));
  }
  merge_sorted(kept, vertex_term_less);
  p.terms_ = std::move(kept);
  return p;
}

VertexPolynomial VertexPolynomial::one(GeneratorSetPtr gens, int order) {
  return from_terms(std::move(gens), order, {{0, {}, Rational(1)}});
}

VertexPolynomial VertexPolynomial::generator(GeneratorSetPtr gens, int order, int g, int k) {
  if (k < 0 || k > 255) throw DomainError("derivative order out of range");
  return from_terms(std::move(gens), order, {{0, {Leg{static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(k)}}, Rational(1)}});
}

int VertexPolynomial::term_parity(const VertexMonomial& legs) const {
  int p = 0;
  for (const auto& l : legs) p ^= gens_->parities[l.g];
  return p;
}

int VertexPolynomial::parity() const {
  int p = -2;
  for (const auto& t : terms_) {
    int q = term_parity(t.legs);
    if (p == -2)
      p = q;
    else if (p != q)
      return -1;
  }
  return p == -2 ? 0 : p;
}

VertexPolynomial VertexPolynomial::parity_part(int parity) const {
  VertexPolynomial out(gens_, order_);
  for (const auto& t : terms_)
    if (term_parity(t.legs) == parity) out.terms_.push_back(t);
  return out;
}

VertexPolynomial VertexPolynomial::operator-() const {
  VertexPolynomial p = *this;
  for (auto& t : p.terms_) t.c = -t.c;
  return p;
}

VertexPolynomial& VertexPolynomial::operator+=(const VertexPolynomial& rhs) {
  if (rhs.is_zero()) return *this;
  if (!gens_) {
    *this = rhs;
    return *this;
  }
  require_same(gens_, rhs.gens_);
  std::vector<VertexTerm> all = terms_;
  all.insert(all.end(), rhs.terms_.begin(), rhs.terms_.end());
  *this = from_terms(gens_, std::min(order_, rhs.order_), std::move(all));
  return *this;
}

VertexPolynomial& VertexPolynomial::operator-=(const VertexPolynomial& rhs) { return *this += -rhs; }

VertexPolynomial operator*(const VertexPolynomial& a, const VertexPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return VertexPolynomial(a.gens_ ? a.gens_ : b.gens_, std::min(a.order_, b.order_));
  require_same(a.gens_, b.gens_);
  std::vector<VertexTerm> out;
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) {
      VertexMonomial legs;
      int sign = 1;
      if (!product_legs(*a.gens_, s.legs, t.legs, legs, sign)) continue;
      Rational c = s.c * t.c;
      out.push_back({s.h + t.h, std::move(legs), sign < 0 ? -c : c});
    }
  return VertexPolynomial::from_terms(a.gens_, std::min(a.order_, b.order_), std::move(out));
}

VertexPolynomial VertexPolynomial::scaled(const Rational& c) const {
  VertexPolynomial p = *this;
  if (c.is_zero()) {
    p.terms_.clear();
    return p;
  }
  for (auto& t : p.terms_) t.c *= c;
  return p;
}

VertexPolynomial VertexPolynomial::shifted(int k) const {
  std::vector<VertexTerm> out = terms_;
  for (auto& t : out) t.h += k;
  return from_terms(gens_, order_, std::move(out));
}

bool operator==(const VertexPolynomial& a, const VertexPolynomial& b) { return a.terms_ == b.terms_; }

std::string vertex_monomial_string(const GeneratorSet& gens, const VertexMonomial& legs) {
  if (legs.empty()) return "";
  if (legs.size() == 1) return leg_string(gens, legs[0]);
  std::string s = ":";
  for (std::size_t i = 0; i < legs.size(); ++i) s += (i ? " " : "") + leg_string(gens, legs[i]);
  return s + ":";
}

std::string VertexPolynomial::to_string() const {
  std::vector<std::pair<Rational, std::string>> parts;
  for (const auto& t : terms_)
    parts.emplace_back(t.c, text::product({text::power("h", t.h), vertex_monomial_string(*gens_, t.legs)}));
  return text::join_terms(parts);
}

std::string OPEExpansion::to_string() const {
  if (poles.empty()) return "0";
  std::string s;
  for (auto it = poles.rbegin(); it != poles.rend(); ++it) {
    std::string c = it->second.terms().size() == 1 ? it->second.to_string() : "(" + it->second.to_string() + ")";
    if (!s.empty()) {
      bool neg = c.front() == '-';
      s += neg ? " - " : " + ";
      if (neg) c.erase(0, 1);
    }
    s += c;
    s += "/(z-w)";
    if (it->first > 0) s += "^" + std::to_string(it->first + 1);
  }
  return s;
}

OPEExpansion ope_singular(const VertexPolynomial& a, const VertexPolynomial& b) {
  OPEExpansion out;
  if (a.is_zero() || b.is_zero()) return out;
  require_same(a.generators(), b.generators());
  const auto& gens = a.generators();
  int order = std::min(a.order(), b.order());
  std::map<int, std::vector<VertexTerm>> poles;
  for (const auto& s : a.terms())
    for (const auto& t : b.terms()) ope_monomials(*gens, s, t, order, poles);
  for (auto& [n, terms] : poles) {
    auto p = VertexPolynomial::from_terms(gens, order, std::move(terms));
    if (!p.is_zero()) out.poles.emplace(n, std::move(p));
  }
  return out;
}

VertexPolynomial nth_product(const VertexPolynomial& a, const VertexPolynomial& b, int n) {
  if (n < 0) throw DomainError("n-th product needs n >= 0");
  auto ope = ope_singular(a, b);
  auto it = ope.poles.find(n);
  if (it != ope.poles.end()) return it->second;
  return VertexPolynomial(a.generators() ? a.generators() : b.generators(), std::min(a.order(), b.order()));
}

VertexPolynomial translate(const VertexPolynomial& a) {
  std::vector<VertexTerm> out;
  for (const auto& t : a.terms()) translate_power(*a.generators(), t.legs, 1, t.h, t.c, out);
  return VertexPolynomial::from_terms(a.generators(), a.order(), std::move(out));
}

ModeSum ModeSum::from_terms(GeneratorSetPtr gens, int order, std::vector<ModeTerm> terms) {
  if (!gens) throw DomainError("missing generator set");
  ModeSum m(gens, order);
  std::vector<ModeTerm> kept;
  for (auto& t : terms) {
    if (t.h > order || t.c.is_zero()) continue;
    int sign = 1;
    if (!canonical_legs(*gens, t.legs, sign)) continue;
    if (sign < 0) t.c = -t.c;
    kept.push_back(std::move(t));
  }
  m.terms_ = reduce_modes(*gens, std::move(kept));
  return m;
}

ModeSum ModeSum::mode(const VertexPolynomial& a, int k) {
  std::vector<ModeTerm> terms;
  for (const auto& t : a.terms()) terms.push_back({t.h, t.legs, k, t.c});
  return from_terms(a.generators(), a.order(), std::move(terms));
}

ModeSum ModeSum::operator-() const {
  ModeSum m = *this;
  for (auto& t : m.terms_) t.c = -t.c;
  return m;
}

ModeSum& ModeSum::operator+=(const ModeSum& rhs) {
  if (rhs.is_zero()) return *this;
  if (!gens_) {
    *this = rhs;
    return *this;
  }
  require_same(gens_, rhs.gens_);
  std::vector<ModeTerm> all = terms_;
  all.insert(all.end(), rhs.terms_.begin(), rhs.terms_.end());
  *this = from_terms(gens_, std::min(order_, rhs.order_), std::move(all));
  return *this;
}

ModeSum& ModeSum::operator-=(const ModeSum& rhs) { return *this += -rhs; }

ModeSum ModeSum::scaled(const Rational& c) const {
  ModeSum m = *this;
  if (c.is_zero()) {
    m.terms_.clear();
    return m;
  }
  for (auto& t : m.terms_) t.c *= c;
  return m;
}

ModeSum ModeSum::parity_part(int parity) const {
  ModeSum m(gens_, order_);
  for (const auto& t : terms_) {
    int p = 0;
    for (const auto& l : t.legs) p ^= gens_->parities[l.g];
    if (p == parity) m.terms_.push_back(t);
  }
  return m;
}

std::string ModeSum::to_string() const {
  std::vector<std::pair<Rational, std::string>> parts;
  for (const auto& t : terms_) {
    std::string body;
    if (!t.legs.empty()) body = "oint(" + text::product({text::power("z", t.k), vertex_monomial_string(*gens_, t.legs)}) + ")";
    if (!t.legs.empty() && t.k == 0) body = "oint(" + vertex_monomial_string(*gens_, t.legs) + ")";
    parts.emplace_back(t.c, text::product({text::power("h", t.h), body}));
  }
  return text::join_terms(parts);
}

ModeSum mode_bracket(const ModeSum& x, const ModeSum& y) {
  if (x.is_zero() || y.is_zero()) return ModeSum(x.generators() ? x.generators() : y.generators(), std::min(x.order(), y.order()));
  require_same(x.generators(), y.generators());
  const auto& gens = x.generators();
  int order = std::min(x.order(), y.order());
  std::vector<ModeTerm> out;
  for (const auto& s : x.terms()) {
    if (s.legs.empty()) continue;  // central
    for (const auto& t : y.terms()) {
      if (t.legs.empty()) continue;
      std::map<int, std::vector<VertexTerm>> poles;
      ope_monomials(*gens, {s.h, s.legs, s.c}, {t.h, t.legs, t.c}, order, poles);
      for (auto& [j, terms] : poles) {
        Rational binom = Rational::binomial(s.k, j);
        if (binom.is_zero()) continue;
        for (auto& vt : terms) out.push_back({vt.h, std::move(vt.legs), s.k + t.k - j, vt.c * binom});
      }
    }
  }
  return ModeSum::from_terms(gens, order, std::move(out));
}

QmeReport qme_check(const VertexPolynomial& gamma) {
  int p = gamma.parity();
  if (p < 0) throw DomainError("the QME check needs gamma of definite parity");
  QmeReport r;
  ModeSum m = ModeSum::mode(gamma, 0);
  r.bracket = mode_bracket(m, m);
  r.zero = r.bracket.is_zero();
  r.vacuous = p == 0;
  return r;
}

VertexPolynomial random_vertex_polynomial(GeneratorSetPtr gens, int order, int max_legs, int max_k, int terms,
                                          std::mt19937_64& rng) {
  std::vector<VertexTerm> out;
  std::uniform_int_distribution<int> nlegs(1, max_legs), gen(0, gens->size() - 1), kd(0, max_k), coef(-3, 3);
  for (int i = 0; i < terms; ++i) {
    VertexTerm t{0, {}, Rational(coef(rng))};
    int n = nlegs(rng);
    for (int j = 0; j < n; ++j) t.legs.push_back({static_cast<std::uint8_t>(gen(rng)), static_cast<std::uint8_t>(kd(rng))});
    out.push_back(std::move(t));
  }
  return VertexPolynomial::from_terms(std::move(gens), order, std::move(out));
}

}  // namespace bvtrace
