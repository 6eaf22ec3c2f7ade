#include "bvtrace/hbar_series.hpp"

#include <algorithm>

#include "bvtrace/errors.hpp"

namespace bvtrace {

HbarSeries::HbarSeries(const Rational& c, int order) : order_(order) {
  if (!c.is_zero() && order >= 0) coeffs_.push_back(c);
}

HbarSeries HbarSeries::monomial(const Rational& c, int exponent, int order) {
  HbarSeries s(order);
  if (!c.is_zero() && exponent <= order) {
    s.val_ = exponent;
    s.coeffs_.push_back(c);
  }
  return s;
}

HbarSeries HbarSeries::from_terms(const std::map<int, Rational>& terms, int order) {
  HbarSeries s(order);
  if (terms.empty()) return s;
  int lo = terms.begin()->first;
  if (lo > order) return s;
  s.val_ = lo;
  s.coeffs_.assign(order - lo + 1, Rational());
  for (const auto& [k, c] : terms)
    if (k <= order) s.coeffs_[k - lo] += c;
  s.normalize();
  return s;
}

void HbarSeries::normalize() {
  std::size_t lead = 0;
  while (lead < coeffs_.size() && coeffs_[lead].is_zero()) ++lead;
  if (lead == coeffs_.size()) {
    coeffs_.clear();
    val_ = 0;
    return;
  }
  coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
  val_ += static_cast<int>(lead);
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Rational HbarSeries::coefficient(int exponent) const {
  if (is_zero() || exponent < val_ || exponent >= val_ + static_cast<int>(coeffs_.size())) return {};
  return coeffs_[exponent - val_];
}

std::vector<std::pair<int, Rational>> HbarSeries::terms() const {
  std::vector<std::pair<int, Rational>> out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (!coeffs_[i].is_zero()) out.emplace_back(val_ + static_cast<int>(i), coeffs_[i]);
  return out;
}

HbarSeries HbarSeries::truncated(int order) const {
  HbarSeries s = *this;
  s.order_ = std::min(order, order_);
  if (!s.is_zero()) {
    int keep = s.order_ - s.val_ + 1;
    if (keep <= 0) {
      s.coeffs_.clear();
      s.val_ = 0;
    } else if (static_cast<int>(s.coeffs_.size()) > keep) {
      s.coeffs_.resize(keep);
      s.normalize();
    }
  }
  return s;
}

HbarSeries HbarSeries::operator-() const {
  HbarSeries s = *this;
  for (auto& c : s.coeffs_) c = -c;
  return s;
}

HbarSeries& HbarSeries::operator+=(const HbarSeries& rhs) {
  int order = std::min(order_, rhs.order_);
  if (rhs.is_zero()) return *this = truncated(order);
  if (is_zero()) return *this = rhs.truncated(order);
  std::map<int, Rational> acc;
  for (auto& [k, c] : terms()) acc[k] += c;
  for (auto& [k, c] : rhs.terms()) acc[k] += c;
  return *this = from_terms(acc, order);
}

HbarSeries& HbarSeries::operator-=(const HbarSeries& rhs) { return *this += -rhs; }

HbarSeries& HbarSeries::operator*=(const HbarSeries& rhs) {
  int order = std::min(order_ + rhs.valuation(), rhs.order_ + valuation());
  if (is_zero() || rhs.is_zero()) {
    *this = HbarSeries(order);
    return *this;
  }
  std::map<int, Rational> acc;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) {
      int k = val_ + rhs.val_ + static_cast<int>(i + j);
      if (k > order) break;
      acc[k] += coeffs_[i] * rhs.coeffs_[j];
    }
  }
  return *this = from_terms(acc, order);
}

HbarSeries& HbarSeries::operator*=(const Rational& c) {
  if (c.is_zero()) {
    coeffs_.clear();
    val_ = 0;
    return *this;
  }
  for (auto& x : coeffs_) x *= c;
  return *this;
}

HbarSeries HbarSeries::shifted(int k) const {
  HbarSeries s = *this;
  s.order_ += k;
  if (!s.is_zero()) s.val_ += k;
  return s;
}

HbarSeries HbarSeries::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero series");
  // a = h^v (c0 + c1 h + ...) known through relative order order_ - v
  int rel = order_ - val_;
  std::vector<Rational> b(rel + 1);
  Rational inv0 = coeffs_[0].inverse();
  b[0] = inv0;
  for (int k = 1; k <= rel; ++k) {
    Rational acc;
    for (int i = 1; i <= k && i < static_cast<int>(coeffs_.size()); ++i) acc += coeffs_[i] * b[k - i];
    b[k] = -acc * inv0;
  }
  std::map<int, Rational> terms;
  for (int k = 0; k <= rel; ++k)
    if (!b[k].is_zero()) terms[k - val_] = b[k];
  return from_terms(terms, rel - val_);
}

bool operator==(const HbarSeries& a, const HbarSeries& b) {
  int order = std::min(a.order_, b.order_);
  auto ta = a.truncated(order).terms();
  auto tb = b.truncated(order).terms();
  return ta == tb;
}

std::string HbarSeries::to_string() const {
  std::vector<std::pair<Rational, std::string>> parts;
  for (auto& [k, c] : terms()) parts.emplace_back(c, text::power("h", k));
  return text::join_terms(parts);
}

UPolynomial::UPolynomial(int u_exponent, const HbarSeries& c) { add_term(u_exponent, c); }

HbarSeries UPolynomial::coefficient(int u_exponent, int order) const {
  auto it = terms_.find(u_exponent);
  return it == terms_.end() ? HbarSeries(order) : it->second;
}

void UPolynomial::add_term(int u_exponent, const HbarSeries& c) {
  auto it = terms_.find(u_exponent);
  if (it == terms_.end()) {
    if (!c.is_zero()) terms_.emplace(u_exponent, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

UPolynomial& UPolynomial::operator+=(const UPolynomial& rhs) {
  for (auto& [k, c] : rhs.terms_) add_term(k, c);
  return *this;
}

UPolynomial& UPolynomial::operator-=(const UPolynomial& rhs) { return *this += -rhs; }

UPolynomial UPolynomial::operator-() const {
  UPolynomial r;
  for (auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

UPolynomial& UPolynomial::operator*=(const UPolynomial& rhs) {
  UPolynomial out;
  for (auto& [i, a] : terms_)
    for (auto& [j, b] : rhs.terms_) out.add_term(i + j, a * b);
  return *this = out;
}

UPolynomial& UPolynomial::operator*=(const HbarSeries& c) {
  UPolynomial out;
  for (auto& [i, a] : terms_) out.add_term(i, a * c);
  return *this = out;
}

bool operator==(const UPolynomial& a, const UPolynomial& b) {
  auto it = a.terms_.begin();
  auto jt = b.terms_.begin();
  while (it != a.terms_.end() || jt != b.terms_.end()) {
    if (jt == b.terms_.end() || (it != a.terms_.end() && it->first < jt->first)) {
      if (!(it->second == HbarSeries(it->second.order()))) return false;
      ++it;
    } else if (it == a.terms_.end() || jt->first < it->first) {
      if (!(jt->second == HbarSeries(jt->second.order()))) return false;
      ++jt;
    } else {
      if (!(it->second == jt->second)) return false;
      ++it;
      ++jt;
    }
  }
  return true;
}

std::string UPolynomial::to_string() const {
  std::vector<std::pair<Rational, std::string>> parts;
  for (auto& [j, s] : terms_)
    for (auto& [k, c] : s.terms()) parts.emplace_back(c, text::product({text::power("h", k), text::power("u", j)}));
  return text::join_terms(parts);
}

namespace text {

std::string power(const std::string& symbol, int exponent) {
  if (exponent == 0) return "";
  if (exponent == 1) return symbol;
  return symbol + "^" + std::to_string(exponent);
}

std::string product(std::initializer_list<std::string> factors) {
  std::string out;
  for (const auto& f : factors) {
    if (f.empty()) continue;
    if (!out.empty()) out += '*';
    out += f;
  }
  return out;
}

std::string join_terms(const std::vector<std::pair<Rational, std::string>>& terms) {
  std::string out;
  for (const auto& [c, rest] : terms) {
    if (c.is_zero()) continue;
    bool neg = c.sign() < 0;
    Rational mag = c.abs();
    std::string body;
    if (rest.empty())
      body = mag.to_string();
    else if (mag.is_one())
      body = rest;
    else
      body = mag.to_string() + "*" + rest;
    if (out.empty())
      out = neg ? "-" + body : body;
    else
      out += (neg ? " - " : " + ") + body;
  }
  return out.empty() ? "0" : out;
}

}  // namespace text

}  // namespace bvtrace
