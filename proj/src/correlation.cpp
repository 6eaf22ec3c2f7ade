#include "bvtrace/correlation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "bvtrace/errors.hpp"

namespace bvtrace {
namespace {

constexpr int kMaxVertices = kMaxVars;  // theta_0 plus up to 7 moving points

/// Simplex values keyed by vertex count and packed 4-bit pair multiplicities.
const Rational& simplex_by_counts(int m, const std::uint8_t* counts, int npairs) {
  thread_local std::unordered_map<std::uint64_t, Rational> fast;
  thread_local std::unordered_map<std::string, Rational> slow;
  bool packable = m <= 5;
  std::uint64_t key = static_cast<std::uint64_t>(m);
  for (int p = 0; p < npairs && packable; ++p) {
    if (counts[p] > 15) packable = false;
    key |= static_cast<std::uint64_t>(counts[p]) << (4 + 4 * p);
  }
  auto build = [&] {
    EdgeIntegrand e;
    e.m = m;
    int p = 0;
    for (int i = 0; i <= m; ++i)
      for (int j = i + 1; j <= m; ++j, ++p)
        for (int c = 0; c < counts[p]; ++c) e.edges.emplace_back(i, j);
    return e;
  };
  if (packable) {
    auto it = fast.find(key);
    if (it != fast.end()) return it->second;
    return fast.emplace(key, simplex_integral(build())).first->second;
  }
  EdgeIntegrand e = build();
  std::string k = e.key();
  auto it = slow.find(k);
  if (it != slow.end()) return it->second;
  return slow.emplace(k, simplex_integral(e)).first->second;
}

// Exact fraction with wide integers, reduced only when it grows; the
// enumeration multiplies many small factors and reduces once per leaf.
struct WideFrac {
  __int128 num = 1;
  __int128 den = 1;

  void mul(std::int64_t n, std::int64_t d) {
    num *= n;
    den *= d;
    constexpr __int128 limit = static_cast<__int128>(1) << 100;
    if (num > limit || num < -limit || den > limit) reduce();
  }
  void reduce() {
    unsigned __int128 a = num < 0 ? -static_cast<unsigned __int128>(num) : static_cast<unsigned __int128>(num);
    unsigned __int128 b = static_cast<unsigned __int128>(den);
    while (b) {
      unsigned __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= static_cast<__int128>(a);
      den /= static_cast<__int128>(a);
    }
    constexpr __int128 hard = static_cast<__int128>(1) << 110;
    if (num > hard || num < -hard || den > hard) throw DomainError("coefficient overflow in correlation engine");
  }
};

class Correlator {
 public:
  Correlator(const PoissonTensor& pi, const Monomial* slots, int count, const Rational& c, int h0, int order,
             std::vector<FormTerm>& out)
      : entries_(pi.entries()), dim_(pi.dim()), nv_(count), h0_(h0), order_(order), scale_(c), out_(out) {
    for (const auto& e : entries_)
      if (!e.value.is_small()) throw DomainError("Poisson tensor entries too large for the correlation engine");
    for (int v = 0; v < count; ++v) e_[v] = slots[v];
    for (int i = 0; i < count; ++i)
      for (int j = i + 1; j < count; ++j) {
        pi_[npairs_] = i;
        pj_[npairs_] = j;
        ++npairs_;
      }
  }

  void run() {
    if (nv_ - 1 > dim_) return;  // descents must use distinct dy's
    descend(1, 0u, 1, 1);
  }

 private:
  struct Slot {
    int pair;
    int entry;
  };

  void descend(int v, std::uint32_t mask, int sign, std::int64_t coef) {
    if (v == nv_) {
      mask_ = mask;
      sign_ = sign;
      nslots_ = 0;
      for (int p = 0; p < npairs_; ++p)
        for (int k = 0; k < static_cast<int>(entries_.size()); ++k)
          if (e_[pj_[p]].e[entries_[k].a] && e_[pi_[p]].e[entries_[k].b]) slots_[nslots_++] = {p, k};
      std::fill(counts_, counts_ + npairs_, 0);
      WideFrac w;
      w.num = coef;
      contract(0, 0, w);
      return;
    }
    for (int a = 0; a < dim_; ++a) {
      if (e_[v].e[a] == 0 || (mask >> a & 1)) continue;
      int s = (__builtin_popcount(mask >> (a + 1)) & 1) ? -sign : sign;
      std::int64_t c = coef * e_[v].e[a];
      --e_[v].e[a];
      descend(v + 1, mask | (1u << a), s, c);
      ++e_[v].e[a];
    }
  }

  void contract(int idx, int h, const WideFrac& w0) {
    if (idx == nslots_) {
      leaf(h, w0);
      return;
    }
    contract(idx + 1, h, w0);
    const Slot& sl = slots_[idx];
    const auto& ent = entries_[sl.entry];
    Monomial& later = e_[pj_[sl.pair]];
    Monomial& earlier = e_[pi_[sl.pair]];
    int top = std::min<int>(later.e[ent.a], earlier.e[ent.b]);
    top = std::min(top, order_ - h0_ - h);
    if (top <= 0) return;
    std::uint8_t sa = later.e[ent.a], sb = earlier.e[ent.b];
    std::int64_t vn = ent.value.small_num(), vd = ent.value.small_den();
    WideFrac w = w0;
    for (int c = 1; c <= top; ++c) {
      w.mul(vn * later.e[ent.a] * earlier.e[ent.b], vd * c);
      --later.e[ent.a];
      --earlier.e[ent.b];
      ++counts_[sl.pair];
      contract(idx + 1, h + c, w);
    }
    later.e[ent.a] = sa;
    earlier.e[ent.b] = sb;
    counts_[sl.pair] = static_cast<std::uint8_t>(counts_[sl.pair] - top);
  }

  void leaf(int h, const WideFrac& w) {
    const Rational& s = simplex_by_counts(nv_ - 1, counts_, npairs_);
    if (s.is_zero()) return;
    Monomial m;
    for (int v = 0; v < nv_; ++v) m = m * e_[v];
    Rational c = Rational::from_int128(sign_ < 0 ? -w.num : w.num, w.den) * s;
    if (!scale_.is_one()) c *= scale_;
    out_.push_back({h0_ + h, m, mask_, std::move(c)});
  }

  const std::vector<PoissonTensor::Entry>& entries_;
  int dim_;
  int nv_;
  int h0_;
  int order_;
  Rational scale_;
  std::vector<FormTerm>& out_;
  Monomial e_[kMaxVertices];
  int pi_[kMaxVertices * kMaxVertices];
  int pj_[kMaxVertices * kMaxVertices];
  std::uint8_t counts_[kMaxVertices * kMaxVertices] = {};
  Slot slots_[kMaxVertices * (kMaxVertices - 1) / 2 * kMaxVars * (kMaxVars - 1)];
  int nslots_ = 0;
  int npairs_ = 0;
  std::uint32_t mask_ = 0;
  int sign_ = 1;
};

// Unit-coefficient correlations of short chains, bounded in size.
class CorrelationMemo {
 public:
  const std::vector<FormTerm>& get(const PoissonTensor& pi, const std::vector<Monomial>& slots, int order) {
    Key k{};
    k.count = static_cast<int>(slots.size());
    for (int i = 0; i < k.count; ++i) k.slots[i] = slots[i];
    auto it = map_.find(k);
    if (it != map_.end()) return it->second;
    if (map_.size() >= kCapacity) map_.clear();
    std::vector<FormTerm> out;
    correlate_monomials(pi, slots.data(), k.count, Rational(1), 0, order, out);
    return map_.emplace(k, std::move(out)).first->second;
  }

 private:
  static constexpr std::size_t kCapacity = 1 << 18;
  struct Key {
    int count;
    std::array<Monomial, kMaxVertices> slots;
    bool operator==(const Key& o) const {
      if (count != o.count) return false;
      for (int i = 0; i < count; ++i)
        if (!(slots[i] == o.slots[i])) return false;
      return true;
    }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = static_cast<std::uint64_t>(k.count);
      for (int i = 0; i < k.count; ++i) h = (h ^ k.slots[i].bits()) * 0x100000001b3ULL + (h >> 31);
      return static_cast<std::size_t>(h);
    }
  };
  std::unordered_map<Key, std::vector<FormTerm>, KeyHash> map_;
};

std::vector<Monomial> monomials_up_to(int nvars, int max_degree) {
  std::vector<Monomial> out;
  Monomial cur;
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == nvars) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur.e[var] = static_cast<std::uint8_t>(k);
      self(self, var + 1, left - k);
    }
    cur.e[var] = 0;
  };
  rec(rec, 0, max_degree);
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) { return grlex_less(a, b); });
  return out;
}

}  // namespace

void correlate_monomials(const PoissonTensor& pi, const Monomial* slots, int count, const Rational& c, int h0,
                         int order, std::vector<FormTerm>& out) {
  if (count < 1) throw DomainError("empty chain");
  if (count > kMaxVertices) throw DomainError("chains longer than " + std::to_string(kMaxVertices) + " entries are not supported");
  if (c.is_zero() || h0 > order) return;
  Correlator(pi, slots, count, c, h0, order, out).run();
}

FormalForm correlation_free(const ChainSum& c, const PoissonTensor& pi) {
  if (c.n() != pi.n() && !c.is_zero()) throw DomainError("chain and Poisson tensor over different n");
  std::vector<FormTerm> out;
  for (const auto& t : c.terms())
    correlate_monomials(pi, t.slots.data(), static_cast<int>(t.slots.size()), t.c, t.h, c.order(), out);
  return FormalForm::from_terms(pi.n(), c.order(), std::move(out));
}

UPolynomial trace(const PeriodicChain& c, const PoissonTensor& pi) {
  UPolynomial out;
  for (const auto& [k, s] : c.terms()) {
    UPolynomial part = equivariant_integral(correlation_free(s, pi), pi);
    // parts from different u-degrees mix h-orders, so only h^0..h^order is exact
    for (const auto& [j, coef] : part.terms()) out.add_term(j + k, coef.truncated(c.order()));
  }
  return out;
}

ChainMapReport verify_chain_map(const PoissonTensor& pi, int max_degree, int max_p, int jobs) {
  const int order = 1 << 16;  // no truncation: every identity is checked exactly
  const int n = pi.n();
  auto all = monomials_up_to(pi.dim(), max_degree);
  std::vector<Monomial> nonconst(all.begin() + 1, all.end());

  // flat index space: for each p, |all| * |nonconst|^p chains
  std::vector<long long> offsets{0};
  for (int p = 0; p <= max_p; ++p) {
    long long cnt = static_cast<long long>(all.size());
    for (int i = 0; i < p; ++i) cnt *= static_cast<long long>(nonconst.size());
    offsets.push_back(offsets.back() + cnt);
  }
  long long total = offsets.back();

  struct Partial {
    ChainMapReport report;
    long long first_index = -1;
  };
  const long long nn = static_cast<long long>(nonconst.size());

  // Decodes a flat index into a chain of length p+1 (slot 0 ranges over `all`).
  auto decode = [&](long long idx, int& p) {
    p = 0;
    while (idx >= offsets[p + 1]) ++p;
    long long r = idx - offsets[p];
    ChainTerm t{0, std::vector<Monomial>(p + 1), Rational(1)};
    for (int s = p; s >= 1; --s) {
      t.slots[s] = nonconst[r % nn];
      r /= nn;
    }
    t.slots[0] = all[r];
    return t;
  };
  // Flat index of the chain whose slots are given as indices into `all`.
  auto encode = [&](int p, const std::vector<long long>& all_idx) {
    long long r = all_idx[0];
    for (int s = 1; s <= p; ++s) r = r * nn + (all_idx[s] - 1);
    return offsets[p] + r;
  };
  auto index_in_all = [&](const Monomial& m) {
    auto it = std::lower_bound(all.begin(), all.end(), m, [](const Monomial& a, const Monomial& b) { return grlex_less(a, b); });
    return static_cast<long long>(it - all.begin());
  };

  // Checks one chain given the raw terms of <B(t)>.
  auto check = [&](const ChainTerm& t, long long idx, const std::vector<FormTerm>& b_side_B, Partial& part,
                   CorrelationMemo& memo,
                   std::vector<FormTerm>& buf, std::vector<FormTerm>& lhs, std::vector<ChainTerm>& chain_buf) {
    int p = static_cast<int>(t.slots.size()) - 1;
    buf.clear();
    correlate_monomials(pi, t.slots.data(), p + 1, t.c, 0, order, buf);
    FormalForm corr = FormalForm::from_terms(n, order, buf);
    bool bad_degree = corr.homogeneous_degree() != p && corr.homogeneous_degree() != -1;

    chain_buf.clear();
    hochschild_b_terms(pi, t, order, chain_buf);
    lhs.clear();
    for (const auto& ct : chain_buf) {
      const auto& base = memo.get(pi, ct.slots, order);
      for (const auto& ft : base) lhs.push_back({ft.h + ct.h, ft.m, ft.mask, ft.c * ct.c});
    }
    bool bad_b = !(FormalForm::from_terms(n, order, lhs) == bv_delta(corr, pi).shifted(1).truncated(order));
    bool bad_B = !(FormalForm::from_terms(n, order, b_side_B) == de_rham_d(corr));

    ++part.report.chains;
    if (bad_degree) ++part.report.degree_failures;
    if (bad_b) ++part.report.b_failures;
    if (bad_B) ++part.report.B_failures;
    if ((bad_degree || bad_b || bad_B) && (part.first_index < 0 || idx < part.first_index)) {
      part.first_index = idx;
      part.report.first_failure = ChainSum::from_terms(n, order, {t}).to_string();
    }
  };

  auto worker = [&](long long begin, long long end, Partial& part) {
    std::vector<FormTerm> lhs, buf;
    std::vector<ChainTerm> chain_buf;
    CorrelationMemo memo;
    std::vector<std::vector<FormTerm>> rot_corr;
    std::vector<FormTerm> b_side;
    const std::vector<FormTerm> empty;
    for (long long idx = begin; idx < end; ++idx) {
      int p = 0;
      ChainTerm t = decode(idx, p);
      if (t.slots[0].is_one()) {  // B(t) = 0: the unit lands in an interior slot
        check(t, idx, empty, part, memo, buf, lhs, chain_buf);
        continue;
      }
      // Rotation orbit; the member with the smallest index owns the orbit and
      // shares the correlations <1 (x) rot_k(t)> across all members.
      std::vector<long long> slot_idx(p + 1);
      for (int s = 0; s <= p; ++s) slot_idx[s] = index_in_all(t.slots[s]);
      std::vector<long long> member(p + 1);
      bool owner = true;
      for (int k = 0; k <= p; ++k) {
        std::vector<long long> rot(p + 1);
        for (int s = 0; s <= p; ++s) rot[s] = slot_idx[(s + k) % (p + 1)];
        member[k] = encode(p, rot);
        if (member[k] < idx) owner = false;
      }
      if (!owner) continue;
      rot_corr.assign(p + 1, {});
      std::vector<Monomial> ext(p + 2);
      for (int k = 0; k <= p; ++k) {
        ext[0] = Monomial{};
        for (int s = 0; s <= p; ++s) ext[s + 1] = t.slots[(s + k) % (p + 1)];
        correlate_monomials(pi, ext.data(), p + 2, Rational(1), 0, order, rot_corr[k]);
      }
      for (int j = 0; j <= p; ++j) {
        bool seen = false;
        for (int k = 0; k < j; ++k) seen = seen || member[k] == member[j];
        if (seen) continue;
        // B(rot_j t) = sum_i (-1)^{p i} 1 (x) rot_{i+j}(t)
        b_side.clear();
        for (int i = 0; i <= p; ++i) {
          bool neg = (p * i) % 2;
          for (const auto& ft : rot_corr[(i + j) % (p + 1)]) b_side.push_back({ft.h, ft.m, ft.mask, neg ? -ft.c : ft.c});
        }
        ChainTerm rt{0, std::vector<Monomial>(p + 1), Rational(1)};
        for (int s = 0; s <= p; ++s) rt.slots[s] = t.slots[(s + j) % (p + 1)];
        check(rt, member[j], b_side, part, memo, buf, lhs, chain_buf);
      }
    }
  };

  jobs = std::max(1, jobs);
  std::vector<Partial> parts(jobs);
  if (jobs == 1) {
    worker(0, total, parts[0]);
  } else {
    std::vector<std::thread> threads;
    for (int j = 0; j < jobs; ++j) {
      long long b = total * j / jobs, e = total * (j + 1) / jobs;
      threads.emplace_back(worker, b, e, std::ref(parts[j]));
    }
    for (auto& th : threads) th.join();
  }
  ChainMapReport out;
  long long first = -1;
  for (const auto& part : parts) {
    out.chains += part.report.chains;
    out.b_failures += part.report.b_failures;
    out.B_failures += part.report.B_failures;
    out.degree_failures += part.report.degree_failures;
    if (part.first_index >= 0 && (first < 0 || part.first_index < first)) {
      first = part.first_index;
      out.first_failure = part.report.first_failure;
    }
  }
  return out;
}

double heat_propagator(double s, double t_min, int images) {
  // d/ds h_t(s) by images for t in [t_min, t_split]; the t >= t_split part
  // is integrated in closed form on the Fourier side.
  const double t_split = 0.05;
  auto image_sum = [&](double t) {
    double acc = 0;
    for (int k = -images; k <= images; ++k) {
      double x = s + k;
      acc += -x / (2 * t) * std::exp(-x * x / (4 * t));
    }
    return acc / std::sqrt(4 * M_PI * t);
  };
  auto g = [&](double x) {
    double t = std::exp(x);
    return image_sum(t) * t;
  };
  auto simpson = [&](double a, double b, double fa, double fm, double fb) { return (b - a) / 6 * (fa + 4 * fm + fb); };
  auto adapt = [&](auto&& self, double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) -> double {
    double m = (a + b) / 2, lm = (a + m) / 2, rm = (m + b) / 2;
    double flm = g(lm), frm = g(rm);
    double left = simpson(a, m, fa, flm, fm), right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
    return self(self, a, m, fa, flm, fm, left, tol / 2, depth - 1) + self(self, m, b, fm, frm, fb, right, tol / 2, depth - 1);
  };
  double a = std::log(t_min), b = std::log(t_split);
  double fa = g(a), fb = g(b), fm = g((a + b) / 2);
  double body = adapt(adapt, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), 1e-13, 40);
  double tail = 0;
  for (int n = 1; n <= 60; ++n) tail += -std::exp(-4 * M_PI * M_PI * n * n * t_split) / (M_PI * n) * std::sin(2 * M_PI * n * s);
  return body + tail;
}

double heat_propagator_check(double t_min, int images, int samples) {
  double worst = 0;
  for (int i = 1; i <= samples; ++i) {
    double s = static_cast<double>(i) / (samples + 1);
    worst = std::max(worst, std::fabs(heat_propagator(s, t_min, images) - (s - 0.5)));
  }
  return worst;
}

}  // namespace bvtrace
