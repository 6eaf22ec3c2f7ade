#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "bvtrace/errors.hpp"

namespace bvtrace {

inline constexpr int kMaxVars = 8;

/// Exponent vector over at most kMaxVars commuting variables.
struct Monomial {
  std::array<std::uint8_t, kMaxVars> e{};

  static Monomial variable(int a) {
    Monomial m;
    m.e[a] = 1;
    return m;
  }

  int degree() const {
    std::uint64_t b = bits();
    b = (b & 0x00ff00ff00ff00ffULL) + ((b >> 8) & 0x00ff00ff00ff00ffULL);
    return static_cast<int>((b * 0x0001000100010001ULL) >> 48);
  }
  bool is_one() const { return bits() == 0; }
  std::uint64_t bits() const {
    std::uint64_t b;
    std::memcpy(&b, e.data(), sizeof b);
    return b;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.bits() == b.bits(); }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) {
      int s = a.e[i] + b.e[i];
      if (s > 255) throw DomainError("monomial exponent overflow");
      r.e[i] = static_cast<std::uint8_t>(s);
    }
    return r;
  }
};

static_assert(sizeof(Monomial) == 8);
static_assert(std::endian::native == std::endian::little);

/// Graded lexicographic order: total degree first, then the exponent of the
/// earliest variable dominates.
inline bool grlex_less(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  // little-endian packing: byte-swapping makes e[0] the most significant
  return __builtin_bswap64(a.bits()) < __builtin_bswap64(b.bits());
}

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::uint64_t x = m.bits() * 0x9e3779b97f4a7c15ULL;
    return static_cast<std::size_t>(x ^ (x >> 29));
  }
};

/// "p1^2*q1", or "" for the unit monomial.
inline std::string monomial_string(const Monomial& m, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (m.e[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += names[i];
    if (m.e[i] > 1) out += "^" + std::to_string(m.e[i]);
  }
  return out;
}

/// Sorts (key, coefficient) pairs with `less`, merges equal keys and drops zeros.
template <class Term, class Less>
void canonicalize_terms(std::vector<Term>& terms, Less less) {
  std::sort(terms.begin(), terms.end(), [&](const Term& a, const Term& b) { return less(a, b); });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i + 1;
    Term acc = terms[i];
    while (j < terms.size() && !less(terms[i], terms[j]) && !less(terms[j], terms[i])) {
      acc.c += terms[j].c;
      ++j;
    }
    if (!acc.c.is_zero()) terms[out++] = std::move(acc);
    i = j;
  }
  terms.resize(out);
}

}  // namespace bvtrace
