#include "bvtrace/dgbv.hpp"

#include <algorithm>
#include <set>

#include "bvtrace/errors.hpp"

namespace bvtrace {
namespace {

using Matrix = std::vector<std::vector<Rational>>;

std::uint32_t odd_bits(const Monomial& m, std::uint32_t odd) {
  std::uint32_t b = 0;
  for (int a = 0; a < kMaxVars; ++a)
    if (m.e[a] && (odd >> a & 1)) b |= 1u << a;
  return b;
}

void check_square(const Matrix& m, int dim, const char* what) {
  if (static_cast<int>(m.size()) != dim) throw DomainError(std::string(what) + " must be " + std::to_string(dim) + "x" + std::to_string(dim));
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != dim)
      throw DomainError(std::string(what) + " must be " + std::to_string(dim) + "x" + std::to_string(dim));
}

Matrix zeros(int r, int c) { return Matrix(r, std::vector<Rational>(c)); }

// Gauss-Jordan inverse; empty result when singular.
Matrix inverse(Matrix a) {
  int n = static_cast<int>(a.size());
  Matrix inv = zeros(n, n);
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (!a[r][col].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) return {};
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Rational s = a[col][col].inverse();
    for (int c = 0; c < n; ++c) {
      a[col][c] *= s;
      inv[col][c] *= s;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      Rational f = a[r][col];
      for (int c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

// Basis of the right null space of an r x c matrix.
std::vector<std::vector<Rational>> null_space(Matrix a, int cols) {
  int rows = static_cast<int>(a.size());
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (!a[i][c].is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[piv], a[r]);
    Rational s = a[r][c].inverse();
    for (auto& x : a[r]) x *= s;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      Rational f = a[i][c];
      for (int k = 0; k < cols; ++k) a[i][k] -= f * a[r][k];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<std::vector<Rational>> out;
  for (int free = 0; free < cols; ++free) {
    if (std::find(pivot_col.begin(), pivot_col.end(), free) != pivot_col.end()) continue;
    std::vector<Rational> v(cols);
    v[free] = 1;
    for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i) v[pivot_col[i]] = -a[i][free];
    out.push_back(std::move(v));
  }
  return out;
}

Rational random_small(std::mt19937_64& rng, int lo, int hi) {
  return Rational(std::uniform_int_distribution<int>(lo, hi)(rng));
}

}  // namespace

std::uint32_t DgSymplecticSpace::odd_mask() const {
  std::uint32_t m = 0;
  for (int a = 0; a < dim(); ++a)
    if (parity(a)) m |= 1u << a;
  return m;
}

void DgSymplecticSpace::validate() const {
  int n = dim();
  if (n == 0) throw DomainError("empty space");
  if (n > kMaxVars) throw DomainError("spaces of dimension above " + std::to_string(kMaxVars) + " are not supported");
  if (static_cast<int>(names.size()) != n) throw DomainError("basis names and degrees differ in length");
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) throw DomainError("duplicate basis name");
  check_square(q, n, "Q");
  check_square(omega, n, "omega");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!q[i][j].is_zero() && degrees[i] != degrees[j] + 1)
        throw DomainError("Q does not have degree +1 (entry " + names[i] + "," + names[j] + ")");
      if (!omega[i][j].is_zero() && degrees[i] + degrees[j] != 1)
        throw DomainError("omega does not have degree -1 (entry " + names[i] + "," + names[j] + ")");
      if (!(omega[i][j] == -omega[j][i])) throw DomainError("omega is not graded antisymmetric");
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rational s;
      for (int k = 0; k < n; ++k) s += q[i][k] * q[k][j];
      if (!s.is_zero()) throw DomainError("Q does not square to zero");
    }
  if (inverse(omega).empty()) throw DomainError("omega is degenerate");
  // omega(Q e_j, e_k) + (-1)^{|e_j|} omega(e_j, Q e_k) = 0
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Rational s;
      for (int i = 0; i < n; ++i) {
        s += q[i][j] * omega[i][k];
        Rational t = q[i][k] * omega[j][i];
        s += parity(j) ? -t : t;
      }
      if (!s.is_zero()) throw DomainError("omega is not Q-compatible");
    }
}

Functional Functional::from_terms(int nvars, std::uint32_t odd_mask, int order, std::vector<WeylTerm> terms) {
  Functional f(nvars, odd_mask, order);
  std::erase_if(terms, [&](const WeylTerm& t) {
    if (t.h > order) return true;
    for (int a = 0; a < kMaxVars; ++a)
      if ((odd_mask >> a & 1) && t.m.e[a] > 1) return true;
    return false;
  });
  canonicalize_terms(terms, [](const auto& a, const auto& b) { return weyl_term_less(a, b); });
  f.terms_ = std::move(terms);
  return f;
}

Functional Functional::constant(int nvars, std::uint32_t odd_mask, int order, const Rational& c) {
  return from_terms(nvars, odd_mask, order, {{0, Monomial{}, c}});
}

Functional Functional::coordinate(int nvars, std::uint32_t odd_mask, int order, int a) {
  if (a < 0 || a >= nvars) throw DomainError("coordinate index out of range");
  return from_terms(nvars, odd_mask, order, {{0, Monomial::variable(a), Rational(1)}});
}

int Functional::monomial_parity(const Monomial& m) const { return __builtin_popcount(odd_bits(m, odd_)) & 1; }

int Functional::max_degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.m.degree());
  return d;
}

Functional Functional::parity_part(int parity) const {
  Functional f(nvars_, odd_, order_);
  for (const auto& t : terms_)
    if (monomial_parity(t.m) == parity) f.terms_.push_back(t);
  return f;
}

Functional Functional::degree_at_most(int d) const {
  Functional f(nvars_, odd_, order_);
  for (const auto& t : terms_)
    if (t.m.degree() <= d) f.terms_.push_back(t);
  return f;
}

Functional Functional::operator-() const {
  Functional f = *this;
  for (auto& t : f.terms_) t.c = -t.c;
  return f;
}

Functional& Functional::operator+=(const Functional& rhs) {
  if (rhs.is_zero()) return *this;
  if (is_zero() && nvars_ == 0) {
    *this = rhs;
    return *this;
  }
  if (nvars_ != rhs.nvars_ || odd_ != rhs.odd_) throw DomainError("functionals over different spaces");
  order_ = std::min(order_, rhs.order_);
  std::vector<WeylTerm> all = terms_;
  all.insert(all.end(), rhs.terms_.begin(), rhs.terms_.end());
  *this = from_terms(nvars_, odd_, order_, std::move(all));
  return *this;
}

Functional& Functional::operator-=(const Functional& rhs) { return *this += -rhs; }

Functional operator*(const Functional& a, const Functional& b) {
  if (a.nvars_ != b.nvars_ || a.odd_ != b.odd_) throw DomainError("functionals over different spaces");
  int order = std::min(a.order_, b.order_);
  std::vector<WeylTerm> out;
  for (const auto& s : a.terms_) {
    std::uint32_t oa = odd_bits(s.m, a.odd_);
    for (const auto& t : b.terms_) {
      if (s.h + t.h > order) continue;
      std::uint32_t ob = odd_bits(t.m, a.odd_);
      if (oa & ob) continue;
      // move each odd factor of t left past the larger odd factors of s
      int sign = 0;
      for (int c = 0; c < kMaxVars; ++c)
        if (ob >> c & 1) sign += __builtin_popcount(oa >> (c + 1));
      Rational c = s.c * t.c;
      out.push_back({s.h + t.h, s.m * t.m, (sign & 1) ? -c : c});
    }
  }
  return Functional::from_terms(a.nvars_, a.odd_, order, std::move(out));
}

Functional Functional::scaled(const Rational& c) const {
  Functional f = *this;
  if (c.is_zero()) {
    f.terms_.clear();
    return f;
  }
  for (auto& t : f.terms_) t.c *= c;
  return f;
}

Functional Functional::shifted(int k) const {
  std::vector<WeylTerm> out = terms_;
  for (auto& t : out) t.h += k;
  return from_terms(nvars_, odd_, order_, std::move(out));
}

Functional Functional::truncated(int order) const {
  return from_terms(nvars_, odd_, std::min(order, order_), terms_);
}

Functional Functional::derivative(int a) const {
  if (a < 0 || a >= nvars_) throw DomainError("coordinate index out of range");
  std::vector<WeylTerm> out;
  bool odd = odd_ >> a & 1;
  for (const auto& t : terms_) {
    if (t.m.e[a] == 0) continue;
    WeylTerm r = t;
    r.m.e[a] -= 1;
    if (odd) {
      // bring the odd factor to the front
      if (__builtin_popcount(odd_bits(t.m, odd_) & ((1u << a) - 1)) & 1) r.c = -r.c;
    } else {
      r.c *= Rational(t.m.e[a]);
    }
    out.push_back(std::move(r));
  }
  return from_terms(nvars_, odd_, order_, std::move(out));
}

bool operator==(const Functional& a, const Functional& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  if (a.nvars_ != b.nvars_ || a.odd_ != b.odd_) return false;
  int order = std::min(a.order_, b.order_);
  return a.truncated(order).terms_ == b.truncated(order).terms_;
}

std::string Functional::to_string(const std::vector<std::string>& names) const {
  std::vector<std::pair<Rational, std::string>> parts;
  for (const auto& t : terms_) parts.emplace_back(t.c, text::product({text::power("h", t.h), monomial_string(t.m, names)}));
  return text::join_terms(parts);
}

Kernel2 poisson_kernel(const DgSymplecticSpace& space) {
  space.validate();
  int n = space.dim();
  Matrix inv = inverse(space.omega);
  if (inv.empty()) throw DomainError("omega is degenerate");
  Kernel2 k{zeros(n, n), 1};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      k.t[a][b] = space.parity(b) ? -inv[a][b] : inv[a][b];
      if (!k.t[a][b].is_zero() && space.degrees[a] + space.degrees[b] != 1)
        throw DomainError("Poisson kernel does not have degree 1");
    }
  Kernel2 qk = apply_q_to_kernel(space, k);
  for (const auto& row : qk.t)
    for (const auto& x : row)
      if (!x.is_zero()) throw DomainError("Poisson kernel is not Q-closed");
  return k;
}

Kernel2 apply_q_to_kernel(const DgSymplecticSpace& space, const Kernel2& t) {
  int n = space.dim();
  Kernel2 out{zeros(n, n), t.degree + 1};
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) {
      Rational s;
      for (int a = 0; a < n; ++a) s += space.q[c][a] * t.t[a][d];
      Rational r;
      for (int b = 0; b < n; ++b) r += t.t[c][b] * space.q[d][b];
      out.t[c][d] = space.parity(c) ? s - r : s + r;
    }
  return out;
}

Kernel2 add_kernels(const Kernel2& a, const Kernel2& b) {
  if (a.t.size() != b.t.size()) throw DomainError("kernels of different size");
  if (a.degree != b.degree) throw DomainError("adding kernels of different degree");
  Kernel2 out = a;
  for (std::size_t i = 0; i < a.t.size(); ++i)
    for (std::size_t j = 0; j < a.t.size(); ++j) out.t[i][j] += b.t[i][j];
  return out;
}

Functional contract(const Kernel2& t, const Functional& f) {
  int n = static_cast<int>(t.t.size());
  if (n != f.nvars() && !f.is_zero()) throw DomainError("kernel and functional over different spaces");
  Functional out(f.nvars(), f.odd_mask(), f.order());
  std::vector<Functional> first(n);
  std::vector<bool> have(n, false);
  std::vector<WeylTerm> acc;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (t.t[a][b].is_zero()) continue;
      if (!have[b]) {
        first[b] = f.derivative(b);
        have[b] = true;
      }
      Functional g = first[b].derivative(a);
      Rational w = t.t[a][b] * Rational(1, 2);
      for (const auto& term : g.terms()) acc.push_back({term.h, term.m, term.c * w});
    }
  return Functional::from_terms(f.nvars(), f.odd_mask(), f.order(), std::move(acc));
}

Functional bv_laplacian(const Kernel2& k, const Functional& f) { return contract(k, f); }

Functional bv_bracket(const Kernel2& k, const Functional& a, const Functional& b) {
  Functional out(a.nvars(), a.odd_mask(), std::min(a.order(), b.order()));
  Functional db = bv_laplacian(k, b);
  for (int parity = 0; parity < 2; ++parity) {
    Functional ap = a.parity_part(parity);
    if (ap.is_zero()) continue;
    Functional term = bv_laplacian(k, ap * b) - bv_laplacian(k, ap) * b;
    Functional last = ap * db;
    out += parity ? term + last : term - last;
  }
  return out;
}

Functional apply_q(const DgSymplecticSpace& space, const Functional& f) {
  int n = space.dim();
  if (n != f.nvars() && !f.is_zero()) throw DomainError("functional and space differ in dimension");
  // Q acts on coordinates by x_c -> sum_b (-1)^{|e_b|} Q_{cb} x_b and extends
  // as a degree +1 derivation: sum_c Q(x_c) d_c with left derivatives.
  Functional out(f.nvars(), f.odd_mask(), f.order());
  for (int c = 0; c < n; ++c) {
    std::vector<WeylTerm> qc;
    for (int b = 0; b < n; ++b)
      if (!space.q[c][b].is_zero())
        qc.push_back({0, Monomial::variable(b), space.parity(b) ? -space.q[c][b] : space.q[c][b]});
    if (qc.empty()) continue;
    Functional dc = f.derivative(c);
    if (dc.is_zero()) continue;
    out += Functional::from_terms(f.nvars(), f.odd_mask(), f.order(), std::move(qc)) * dc;
  }
  return out;
}

Functional hrg_flow(const Kernel2& p, const Functional& f) {
  if (p.degree != 0) throw DomainError("the flow kernel must have degree 0");
  Functional out = f;
  Functional cur = f;
  for (int k = 1; !cur.is_zero(); ++k) {
    cur = contract(p, cur).shifted(1).scaled(Rational(1, k));
    out += cur;
  }
  return out;
}

MasterEquationResult master_equation_check(const DgSymplecticSpace& space, const Kernel2& k, const Functional& i,
                                           MasterMode mode) {
  for (const auto& t : i.terms()) {
    int deg = 0;
    for (int a = 0; a < space.dim(); ++a) deg -= t.m.e[a] * space.degrees[a];
    if (deg != 0) throw DomainError("the interaction must have degree 0");
  }
  MasterEquationResult r;
  if (mode == MasterMode::classical) {
    std::vector<WeylTerm> tree;
    for (const auto& t : i.terms())
      if (t.h == 0) tree.push_back(t);
    Functional i0 = Functional::from_terms(i.nvars(), i.odd_mask(), i.order(), std::move(tree));
    r.residual = apply_q(space, i0) + bv_bracket(k, i0, i0).scaled(Rational(1, 2));
    std::vector<WeylTerm> classical;
    for (const auto& t : r.residual.terms())
      if (t.h == 0) classical.push_back(t);
    r.residual = Functional::from_terms(i.nvars(), i.odd_mask(), i.order(), std::move(classical));
  } else {
    r.residual = apply_q(space, i) + bv_laplacian(k, i).shifted(1) + bv_bracket(k, i, i).scaled(Rational(1, 2));
  }
  r.passed = r.residual.is_zero();
  return r;
}

HrgReport verify_hrg(const DgSymplecticSpace& space, const Kernel2& p, const std::vector<Functional>& fs) {
  Kernel2 k0 = poisson_kernel(space);
  Kernel2 kp = add_kernels(k0, apply_q_to_kernel(space, p));
  HrgReport rep;
  for (const auto& f : fs) {
    Functional flowed = hrg_flow(p, f);
    Functional lhs = apply_q(space, flowed) + bv_laplacian(kp, flowed).shifted(1);
    Functional rhs = hrg_flow(p, apply_q(space, f) + bv_laplacian(k0, f).shifted(1));
    ++rep.checked;
    if (!(lhs == rhs)) ++rep.failures;
  }
  return rep;
}

DgSymplecticSpace random_space(int half, std::mt19937_64& rng) {
  if (half < 1 || 2 * half > kMaxVars) throw DomainError("random space half-dimension out of range");
  DgSymplecticSpace s;
  std::vector<int> wdeg(half);
  for (auto& d : wdeg) d = std::uniform_int_distribution<int>(-1, 1)(rng);
  std::sort(wdeg.begin(), wdeg.end());
  int n = 2 * half;
  for (int i = 0; i < half; ++i) {
    s.names.push_back("w" + std::to_string(i + 1));
    s.degrees.push_back(wdeg[i]);
  }
  for (int i = 0; i < half; ++i) {
    s.names.push_back("v" + std::to_string(i + 1));
    s.degrees.push_back(1 - wdeg[i]);
  }
  // q on W, one degree block at a time from the top so that q^2 = 0
  Matrix q = zeros(half, half);
  auto level = [&](int d) {
    std::vector<int> idx;
    for (int i = 0; i < half; ++i)
      if (wdeg[i] == d) idx.push_back(i);
    return idx;
  };
  for (int d = 0; d >= -1; --d) {
    auto src = level(d), dst = level(d + 1), above = level(d + 2);
    if (src.empty() || dst.empty()) continue;
    // columns must lie in the kernel of the block dst -> above
    Matrix block = zeros(static_cast<int>(above.size()), static_cast<int>(dst.size()));
    for (std::size_t r = 0; r < above.size(); ++r)
      for (std::size_t c = 0; c < dst.size(); ++c) block[r][c] = q[above[r]][dst[c]];
    auto ker = above.empty() ? std::vector<std::vector<Rational>>{} : null_space(block, static_cast<int>(dst.size()));
    if (above.empty())
      for (std::size_t c = 0; c < dst.size(); ++c) {
        std::vector<Rational> e(dst.size());
        e[c] = 1;
        ker.push_back(e);
      }
    for (int j : src) {
      std::vector<Rational> col(dst.size());
      for (const auto& v : ker) {
        Rational w = random_small(rng, -2, 2);
        for (std::size_t c = 0; c < dst.size(); ++c) col[c] += w * v[c];
      }
      for (std::size_t c = 0; c < dst.size(); ++c) q[dst[c]][j] = col[c];
    }
  }
  s.q = zeros(n, n);
  s.omega = zeros(n, n);
  for (int i = 0; i < half; ++i) {
    s.omega[i][half + i] = 1;
    s.omega[half + i][i] = -1;
    for (int j = 0; j < half; ++j) {
      s.q[i][j] = q[i][j];
      // dual action fixed by compatibility
      Rational c = -q[j][i];
      s.q[half + i][half + j] = (((wdeg[i] % 2) + 2) % 2) ? -c : c;
    }
  }
  s.validate();
  return s;
}

Kernel2 random_degree0_kernel(const DgSymplecticSpace& space, std::mt19937_64& rng) {
  int n = space.dim();
  Kernel2 p{zeros(n, n), 0};
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      if (space.degrees[a] + space.degrees[b] != 0) continue;
      bool both_odd = space.parity(a) && space.parity(b);
      if (a == b && both_odd) continue;
      Rational v = random_small(rng, -2, 2);
      p.t[a][b] = v;
      p.t[b][a] = both_odd ? -v : v;
    }
  return p;
}

std::vector<Functional> monomial_basis(const DgSymplecticSpace& space, int d, int order) {
  int n = space.dim();
  std::uint32_t odd = space.odd_mask();
  std::vector<Functional> out;
  Monomial cur;
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == n) {
      out.push_back(Functional::from_terms(n, odd, order, {{0, cur, Rational(1)}}));
      return;
    }
    int top = (odd >> var & 1) ? std::min(left, 1) : left;
    for (int k = 0; k <= top; ++k) {
      cur.e[var] = static_cast<std::uint8_t>(k);
      self(self, var + 1, left - k);
    }
    cur.e[var] = 0;
  };
  rec(rec, 0, d);
  return out;
}

Functional random_functional(const DgSymplecticSpace& space, int d, int order, int terms, std::mt19937_64& rng) {
  auto basis = monomial_basis(space, d, order);
  std::vector<WeylTerm> out;
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  for (int i = 0; i < terms; ++i) {
    const auto& m = basis[pick(rng)].terms().front().m;
    int h = std::uniform_int_distribution<int>(0, std::min(order, 2))(rng);
    Rational c = random_small(rng, -3, 3);
    out.push_back({h, m, c});
  }
  return Functional::from_terms(space.dim(), space.odd_mask(), order, std::move(out));
}

}  // namespace bvtrace
