#include "bvtrace/forms.hpp"

#include <algorithm>

#include "bvtrace/errors.hpp"

namespace bvtrace {

FormalForm FormalForm::from_terms(int n, int order, std::vector<FormTerm> terms) {
  FormalForm f(n, order);
  std::erase_if(terms, [&](const FormTerm& t) { return t.h > order; });
  canonicalize_terms(terms, [](const auto& a, const auto& b) { return form_term_less(a, b); });
  f.terms_ = std::move(terms);
  return f;
}

FormalForm FormalForm::from_function(const WeylElement& w) {
  std::vector<FormTerm> out;
  for (const auto& t : w.terms()) out.push_back({t.h, t.m, 0u, t.c});
  return from_terms(w.n(), w.order(), std::move(out));
}

FormalForm FormalForm::differential(int n, int order, int a) {
  return from_terms(n, order, {{0, Monomial{}, 1u << a, Rational(1)}});
}

int FormalForm::homogeneous_degree() const {
  if (terms_.empty()) return -1;
  int d = __builtin_popcount(terms_.front().mask);
  for (const auto& t : terms_)
    if (__builtin_popcount(t.mask) != d) return -2;
  return d;
}

FormalForm FormalForm::operator-() const {
  FormalForm f = *this;
  for (auto& t : f.terms_) t.c = -t.c;
  return f;
}

FormalForm& FormalForm::operator+=(const FormalForm& rhs) {
  std::vector<FormTerm> all = terms_;
  all.insert(all.end(), rhs.terms_.begin(), rhs.terms_.end());
  return *this = from_terms(n_, std::min(order_, rhs.order_), std::move(all));
}

FormalForm& FormalForm::operator-=(const FormalForm& rhs) { return *this += -rhs; }

FormalForm FormalForm::scaled(const Rational& c) const {
  FormalForm f = *this;
  if (c.is_zero()) f.terms_.clear();
  for (auto& t : f.terms_) t.c *= c;
  return f;
}

FormalForm FormalForm::shifted(int k) const {
  FormalForm f = *this;
  f.order_ += k;
  for (auto& t : f.terms_) t.h += k;
  return f;
}

FormalForm FormalForm::truncated(int order) const {
  return from_terms(n_, std::min(order, order_), terms_);
}

FormalForm FormalForm::wedge(const FormalForm& rhs) const {
  int va = terms_.empty() ? order_ + 1 : terms_.front().h;
  int vb = rhs.terms_.empty() ? rhs.order_ + 1 : rhs.terms_.front().h;
  int order = std::min(order_ + vb, rhs.order_ + va);
  std::vector<FormTerm> out;
  for (const auto& s : terms_)
    for (const auto& t : rhs.terms_) {
      if (s.mask & t.mask) continue;
      int sign = 1;
      std::uint32_t mask = s.mask;
      for (int b = 0; b < 2 * n_; ++b)
        if (t.mask >> b & 1) {
          // dy^b passes the higher-indexed elements of mask already to its right
          sign *= (__builtin_popcount(mask >> (b + 1)) & 1) ? -1 : 1;
          mask |= 1u << b;
        }
      out.push_back({s.h + t.h, s.m * t.m, mask, s.c * t.c * Rational(sign)});
    }
  return from_terms(n_, order, std::move(out));
}

bool operator==(const FormalForm& a, const FormalForm& b) {
  if (a.n_ != b.n_) return false;
  int order = std::min(a.order_, b.order_);
  auto ta = a.truncated(order).terms_;
  auto tb = b.truncated(order).terms_;
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i)
    if (ta[i].h != tb[i].h || !(ta[i].m == tb[i].m) || ta[i].mask != tb[i].mask || ta[i].c != tb[i].c) return false;
  return true;
}

std::string FormalForm::to_string() const {
  auto names = weyl_variable_names(n_);
  std::vector<std::pair<Rational, std::string>> parts;
  for (const auto& t : terms_) {
    std::string dy;
    for (int a = 0; a < 2 * n_; ++a)
      if (t.mask >> a & 1) dy += (dy.empty() ? "d" : "^d") + names[a];
    parts.emplace_back(t.c, text::product({text::power("h", t.h), monomial_string(t.m, names), dy}));
  }
  return text::join_terms(parts);
}

FormalForm de_rham_d(const FormalForm& w) {
  std::vector<FormTerm> out;
  for (const auto& t : w.terms())
    for (int a = 0; a < 2 * w.n(); ++a) {
      if (t.m.e[a] == 0 || (t.mask >> a & 1)) continue;
      FormTerm r = t;
      r.c *= Rational(t.m.e[a] * wedge_sign(t.mask, a));
      --r.m.e[a];
      r.mask |= 1u << a;
      out.push_back(r);
    }
  return FormalForm::from_terms(w.n(), w.order(), std::move(out));
}

FormalForm iota_pi(const FormalForm& w, const PoissonTensor& pi) {
  // (1/2) Pi^{ab} iota_b iota_a; the a<b and b<a halves coincide, so sum a<b once.
  std::vector<FormTerm> out;
  for (const auto& t : w.terms())
    for (const auto& e : pi.entries()) {
      if (e.a >= e.b) continue;
      if (!(t.mask >> e.a & 1) || !(t.mask >> e.b & 1)) continue;
      std::uint32_t m1 = t.mask & ~(1u << e.a);
      int sign = wedge_sign(m1, e.a) * wedge_sign(m1 & ~(1u << e.b), e.b);
      FormTerm r = t;
      r.mask = m1 & ~(1u << e.b);
      r.c *= e.value * Rational(sign);
      out.push_back(r);
    }
  return FormalForm::from_terms(w.n(), w.order(), std::move(out));
}

FormalForm bv_delta(const FormalForm& w, const PoissonTensor& pi) {
  std::vector<FormTerm> out;
  for (const auto& t : w.terms())
    for (const auto& e : pi.entries()) {
      if (!(t.mask >> e.b & 1) || t.m.e[e.a] == 0) continue;
      FormTerm r = t;
      r.mask &= ~(1u << e.b);
      r.c *= e.value * Rational(t.m.e[e.a] * wedge_sign(r.mask, e.b));
      --r.m.e[e.a];
      out.push_back(r);
    }
  return FormalForm::from_terms(w.n(), w.order(), std::move(out));
}

HbarSeries berezin_integral(const FormalForm& w, const PoissonTensor& pi) {
  int n = w.n();
  FormalForm cur = w;
  for (int i = 0; i < n; ++i) cur = iota_pi(cur, pi);
  std::map<int, Rational> acc;
  for (const auto& t : cur.terms())
    if (t.mask == 0 && t.m.is_one()) acc[t.h + n] += t.c / Rational::factorial(n);
  return HbarSeries::from_terms(acc, w.order() + n);
}

UPolynomial equivariant_integral(const FormalForm& w, const PoissonTensor& pi) {
  int n = w.n();
  UPolynomial out;
  FormalForm cur = w;
  Rational coef(1);
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      cur = iota_pi(cur, pi);
      coef *= Rational(-1, k);
    }
    std::map<int, Rational> acc;
    for (const auto& t : cur.terms())
      if (t.mask == 0 && t.m.is_one()) acc[t.h + k] += t.c * coef;
    HbarSeries s = HbarSeries::from_terms(acc, w.order() + k);
    if (!s.is_zero()) out.add_term(n - k, s);
  }
  return out;
}

}  // namespace bvtrace
