#include "bvtrace/hochschild.hpp"

#include <algorithm>

#include "bvtrace/errors.hpp"

namespace bvtrace {

bool chain_term_less(const ChainTerm& a, const ChainTerm& b) {
  if (a.slots.size() != b.slots.size()) return a.slots.size() < b.slots.size();
  if (a.h != b.h) return a.h < b.h;
  for (std::size_t i = 0; i < a.slots.size(); ++i) {
    if (a.slots[i] == b.slots[i]) continue;
    return grlex_less(b.slots[i], a.slots[i]);
  }
  return false;
}

ChainSum ChainSum::from_terms(int n, int order, std::vector<ChainTerm> terms) {
  ChainSum s(n, order);
  std::erase_if(terms, [&](const ChainTerm& t) {
    if (t.h > order) return true;
    for (std::size_t i = 1; i < t.slots.size(); ++i)
      if (t.slots[i].is_one()) return true;
    return false;
  });
  canonicalize_terms(terms, [](const auto& a, const auto& b) { return chain_term_less(a, b); });
  s.terms_ = std::move(terms);
  return s;
}

ChainSum ChainSum::from_entries(const std::vector<WeylElement>& entries) {
  if (entries.empty()) throw DomainError("a chain needs at least one entry");
  int n = entries.front().n();
  int vsum = 0;
  for (const auto& e : entries) {
    if (e.n() != n) throw DomainError("chain entries over different n");
    vsum += e.valuation();
  }
  int order = 1 << 20;
  for (const auto& e : entries) order = std::min(order, e.order() + vsum - e.valuation());
  std::vector<ChainTerm> acc{{0, {}, Rational(1)}};
  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::vector<ChainTerm> next;
    for (const auto& partial : acc)
      for (const auto& t : entries[i].terms()) {
        if (i > 0 && t.m.is_one()) continue;
        ChainTerm c = partial;
        c.h += t.h;
        c.slots.push_back(t.m);
        c.c *= t.c;
        next.push_back(std::move(c));
      }
    acc = std::move(next);
  }
  return from_terms(n, order, std::move(acc));
}

ChainSum ChainSum::operator-() const {
  ChainSum s = *this;
  for (auto& t : s.terms_) t.c = -t.c;
  return s;
}

ChainSum& ChainSum::operator+=(const ChainSum& rhs) {
  std::vector<ChainTerm> all = terms_;
  all.insert(all.end(), rhs.terms_.begin(), rhs.terms_.end());
  int n = terms_.empty() ? rhs.n_ : n_;
  return *this = from_terms(n, std::min(order_, rhs.order_), std::move(all));
}

ChainSum& ChainSum::operator-=(const ChainSum& rhs) { return *this += -rhs; }

ChainSum ChainSum::scaled(const HbarSeries& s) const {
  int v = terms_.empty() ? order_ + 1 : terms_.front().h;
  for (const auto& t : terms_) v = std::min(v, t.h);
  int order = std::min(order_ + s.valuation(), s.order() + v);
  std::vector<ChainTerm> out;
  for (auto& [k, c] : s.terms())
    for (const auto& t : terms_) out.push_back({t.h + k, t.slots, t.c * c});
  return from_terms(n_, order, std::move(out));
}

bool operator==(const ChainSum& a, const ChainSum& b) {
  int order = std::min(a.order_, b.order_);
  auto ta = ChainSum::from_terms(a.n_, order, a.terms_).terms_;
  auto tb = ChainSum::from_terms(b.n_, order, b.terms_).terms_;
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i].h != tb[i].h || ta[i].c != tb[i].c || ta[i].slots.size() != tb[i].slots.size()) return false;
    for (std::size_t j = 0; j < ta[i].slots.size(); ++j)
      if (!(ta[i].slots[j] == tb[i].slots[j])) return false;
  }
  return true;
}

std::string ChainSum::to_string() const {
  auto names = weyl_variable_names(n_);
  std::vector<std::pair<Rational, std::string>> parts;
  for (const auto& t : terms_) {
    std::string body;
    for (std::size_t i = 0; i < t.slots.size(); ++i) {
      if (i) body += " | ";
      std::string m = monomial_string(t.slots[i], names);
      body += m.empty() ? "1" : m;
    }
    std::string hp = text::power("h", t.h);
    if (t.slots.size() > 1)
      body = "(" + body + ")";
    else if (body == "1")
      body.clear();
    parts.emplace_back(t.c, text::product({hp, body}));
  }
  return text::join_terms(parts);
}

void hochschild_b_terms(const PoissonTensor& pi, const ChainTerm& t, int order, std::vector<ChainTerm>& out) {
  std::size_t p = t.slots.size() - 1;
  if (p == 0) return;
  auto emit = [&](std::size_t i, const Monomial& left, const Monomial& right, bool wrap, const Rational& sign) {
    for (const auto& s : monomial_star(pi, left, right)) {
      if (t.h + s.h > order) break;
      ChainTerm r;
      r.h = t.h + s.h;
      r.c = t.c * s.c * sign;
      if (wrap) {
        r.slots.push_back(s.m);
        r.slots.insert(r.slots.end(), t.slots.begin() + 1, t.slots.end() - 1);
      } else {
        if (i > 0 && s.m.is_one()) continue;
        r.slots.insert(r.slots.end(), t.slots.begin(), t.slots.begin() + static_cast<std::ptrdiff_t>(i));
        r.slots.push_back(s.m);
        r.slots.insert(r.slots.end(), t.slots.begin() + static_cast<std::ptrdiff_t>(i) + 2, t.slots.end());
      }
      out.push_back(std::move(r));
    }
  };
  emit(0, t.slots[p], t.slots[0], true, Rational(p % 2 ? -1 : 1));
  for (std::size_t i = 0; i < p; ++i) emit(i, t.slots[i], t.slots[i + 1], false, Rational(i % 2 ? -1 : 1));
}

void connes_B_terms(const ChainTerm& t, std::vector<ChainTerm>& out) {
  std::size_t p = t.slots.size() - 1;
  if (t.slots[0].is_one()) return;  // every rotation puts the unit into an interior slot
  for (std::size_t i = 0; i <= p; ++i) {
    ChainTerm r;
    r.h = t.h;
    r.c = (p * i) % 2 ? -t.c : t.c;
    r.slots.reserve(p + 2);
    r.slots.push_back(Monomial{});
    for (std::size_t k = 0; k <= p; ++k) r.slots.push_back(t.slots[(i + k) % (p + 1)]);
    out.push_back(std::move(r));
  }
}

ChainSum hochschild_b(const ChainSum& c, const PoissonTensor& pi) {
  std::vector<ChainTerm> out;
  for (const auto& t : c.terms()) hochschild_b_terms(pi, t, c.order(), out);
  return ChainSum::from_terms(c.n(), c.order(), std::move(out));
}

ChainSum connes_B(const ChainSum& c) {
  std::vector<ChainTerm> out;
  for (const auto& t : c.terms()) connes_B_terms(t, out);
  return ChainSum::from_terms(c.n(), c.order(), std::move(out));
}

PeriodicChain::PeriodicChain(int u_exponent, const ChainSum& c) : n_(c.n()), order_(c.order()) {
  add(u_exponent, c);
}

void PeriodicChain::add(int u_exponent, const ChainSum& c) {
  if (terms_.empty()) {
    n_ = c.n();
    order_ = c.order();
  }
  order_ = std::min(order_, c.order());
  auto it = terms_.find(u_exponent);
  if (it == terms_.end()) {
    if (!c.is_zero()) terms_.emplace(u_exponent, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

PeriodicChain& PeriodicChain::operator+=(const PeriodicChain& rhs) {
  for (const auto& [k, c] : rhs.terms_) add(k, c);
  return *this;
}

bool operator==(const PeriodicChain& a, const PeriodicChain& b) {
  PeriodicChain diff = a;
  for (const auto& [k, c] : b.terms_) diff.add(k, -c);
  return diff.is_zero();
}

std::string PeriodicChain::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [k, c] : terms_) {
    std::string body = c.to_string();
    std::string up = text::power("u", k);
    std::string piece = up.empty() ? body : "(" + body + ")*" + up;
    if (!out.empty()) out += " + ";
    out += piece;
  }
  return out;
}

PeriodicChain periodic_diff(const PeriodicChain& c, const PoissonTensor& pi) {
  PeriodicChain out(c.n(), c.order());
  for (const auto& [k, s] : c.terms()) {
    out.add(k, hochschild_b(s, pi));
    out.add(k + 1, connes_B(s));
  }
  return out;
}

}  // namespace bvtrace
