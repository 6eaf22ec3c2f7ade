#include <random>

#include "bvtrace/correlation.hpp"
#include "bvtrace/errors.hpp"

namespace bvtrace {

void BaseForm::add(const Monomial& x, std::uint32_t mask, const WeylElement& w) {
  if (x.degree() > x_order_ || w.is_zero()) return;
  Key k{x, mask};
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, w);
    return;
  }
  it->second += w;
  if (it->second.is_zero()) terms_.erase(it);
}

BaseForm BaseForm::operator-() const {
  BaseForm r = *this;
  for (auto& [k, w] : r.terms_) w = -w;
  return r;
}

BaseForm& BaseForm::operator+=(const BaseForm& rhs) {
  order_ = std::min(order_, rhs.order_);
  for (const auto& [k, w] : rhs.terms_) add(k.x, k.mask, w);
  return *this;
}

BaseForm& BaseForm::operator-=(const BaseForm& rhs) { return *this += -rhs; }

BaseForm BaseForm::shifted(int k) const {
  BaseForm r(d_, n_, x_order_, order_ + k);
  for (const auto& [key, w] : terms_) r.terms_.emplace(key, w.shifted(k));
  return r;
}

BaseForm BaseForm::scaled(const Rational& c) const {
  BaseForm r(d_, n_, x_order_, order_);
  for (const auto& [key, w] : terms_) r.add(key.x, key.mask, w * c);
  return r;
}

bool BaseForm::is_central() const {
  for (const auto& [k, w] : terms_)
    if (w.max_y_degree() > 0) return false;
  return true;
}

std::string BaseForm::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<std::string> xs;
  for (int i = 1; i <= d_; ++i) xs.push_back("x" + std::to_string(i));
  std::string out;
  for (const auto& [k, w] : terms_) {
    std::string dx;
    for (int i = 0; i < d_; ++i)
      if (k.mask >> i & 1) dx += (dx.empty() ? "d" : "^d") + xs[i];
    std::string piece = "(" + w.to_string() + ")";
    std::string xm = monomial_string(k.x, xs);
    if (!xm.empty()) piece += "*" + xm;
    if (!dx.empty()) piece += "*" + dx;
    if (!out.empty()) out += " + ";
    out += piece;
  }
  return out;
}

BaseForm base_d(const BaseForm& a) {
  BaseForm r(a.d(), a.n(), a.x_order(), a.order());
  for (const auto& [k, w] : a.terms())
    for (int i = 0; i < a.d(); ++i) {
      if (k.x.e[i] == 0 || (k.mask >> i & 1)) continue;
      Monomial x = k.x;
      --x.e[i];
      r.add(x, k.mask | (1u << i), w * Rational(k.x.e[i] * wedge_sign(k.mask, i)));
    }
  return r;
}

BaseForm wedge_star(const BaseForm& a, const BaseForm& b, const PoissonTensor& pi) {
  int va = a.order() + 1, vb = b.order() + 1;
  for (const auto& [k, w] : a.terms()) va = std::min(va, w.valuation());
  for (const auto& [k, w] : b.terms()) vb = std::min(vb, w.valuation());
  BaseForm r(a.d(), a.n(), std::min(a.x_order(), b.x_order()), std::min(a.order() + vb, b.order() + va));
  for (const auto& [ka, wa] : a.terms())
    for (const auto& [kb, wb] : b.terms()) {
      if (ka.mask & kb.mask) continue;
      if (ka.x.degree() + kb.x.degree() > r.x_order()) continue;
      int sign = 1;
      std::uint32_t mask = ka.mask;
      for (int i = 0; i < a.d(); ++i)
        if (kb.mask >> i & 1) {
          if (__builtin_popcount(mask >> (i + 1)) & 1) sign = -sign;
          mask |= 1u << i;
        }
      r.add(ka.x * kb.x, mask, moyal_star(wa, wb, pi) * Rational(sign));
    }
  return r;
}

FedosovReport fedosov_verify(const FedosovData& data, const PoissonTensor& pi) {
  const BaseForm& G = data.connection;
  const BaseForm& g = data.gamma;
  // [A, B] of two 1-forms is A*B + B*A
  BaseForm lhs = base_d(g);
  lhs += (wedge_star(G, g, pi) + wedge_star(g, G, pi)).shifted(-1);
  lhs += wedge_star(g, g, pi).shifted(-1);
  lhs += data.curvature;
  FedosovReport rep;
  rep.residual = lhs - data.omega;
  rep.lhs = std::move(lhs);
  rep.residual_zero = rep.residual.is_zero();
  rep.residual_central = rep.residual.is_central();
  rep.lhs_central = rep.lhs.is_central();
  rep.omega_central = data.omega.is_central();
  rep.passed = rep.residual_zero && rep.omega_central;
  return rep;
}

FedosovData synthesize_fedosov(int d, int n, int x_order, int order, std::uint64_t seed, bool perturb) {
  if (d < 1 || d > kMaxVars) throw DomainError("base dimension out of range");
  if (perturb && d < 2) throw DomainError("perturbation needs base dimension >= 2");
  PoissonTensor pi = PoissonTensor::standard(n);
  std::mt19937_64 rng(seed);
  auto coef = [&] { return Rational(static_cast<long long>(rng() % 7) - 3); };
  auto xmono = [&](int max_deg) {
    Monomial x;
    int deg = static_cast<int>(rng() % (max_deg + 1));
    for (int k = 0; k < deg; ++k) ++x.e[rng() % d];
    return x;
  };
  auto ypoly = [&](int ydeg, int count) {
    WeylElement w(n, order);
    for (int c = 0; c < count; ++c) {
      Monomial y;
      for (int k = 0; k < ydeg; ++k) ++y.e[rng() % (2 * n)];
      w += WeylElement::monomial(n, order, y, coef());
    }
    return w;
  };
  int xg = std::min(1, x_order);
  BaseForm Gamma(d, n, x_order, order);
  for (int i = 0; i < d; ++i)
    for (int t = 0; t < 2; ++t) Gamma.add(xmono(xg), 1u << i, ypoly(2, 2));
  BaseForm h(d, n, x_order + 1, order);
  for (int t = 0; t < 3; ++t) {
    Monomial x = xmono(std::min(2, x_order + 1));
    h.add(x, 0u, ypoly(1, 1));
  }
  BaseForm g1 = base_d(h);
  BaseForm g1t(d, n, x_order, order);
  g1t += g1;
  BaseForm g0(d, n, x_order, order);
  for (int i = 0; i < d; ++i)
    g0.add(xmono(std::min(2, x_order)), 1u << i,
           WeylElement::monomial(n, order, Monomial{}, coef(), static_cast<int>(rng() % 3)));

  FedosovData data;
  data.connection = Gamma;
  data.gamma = g1t + g0 - Gamma;
  data.curvature = base_d(Gamma) + wedge_star(Gamma, Gamma, pi).shifted(-1);
  data.omega = base_d(g0) + wedge_star(g1t, g1t, pi).shifted(-1);
  if (perturb) {
    int i = static_cast<int>(rng() % d);
    int j = (i + 1 + static_cast<int>(rng() % (d - 1))) % d;
    Rational c = coef();
    if (c.is_zero()) c = Rational(1);
    Monomial x = Monomial::variable(j);
    data.gamma.add(x, 1u << i, WeylElement::monomial(n, order, Monomial::variable(static_cast<int>(rng() % (2 * n))), c));
  }
  return data;
}

}  // namespace bvtrace
