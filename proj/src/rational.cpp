#include "bvtrace/rational.hpp"

#include <limits>
#include <numeric>
#include <ostream>

#include "bvtrace/errors.hpp"

namespace bvtrace {
namespace {

using u128 = unsigned __int128;
using i128 = __int128;

u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits_i64(i128 v) {
  // the most negative value is excluded so that negation and gcd stay defined
  return v > std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

mpz_class mpz_from_i128(i128 v) {
  bool neg = v < 0;
  u128 mag = neg ? u128(0) - u128(v) : u128(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
  mpz_class out = (hi << 64) + lo;
  return neg ? mpz_class(-out) : out;
}

bool mpz_to_i64(const mpz_class& z, std::int64_t& out) {
  if (!mpz_fits_slong_p(z.get_mpz_t())) return false;
  out = mpz_get_si(z.get_mpz_t());
  return out != std::numeric_limits<std::int64_t>::min();
}

}  // namespace

Rational::Rational(long long num, long long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  *this = from_wide(i128(num), i128(den));
}

Rational::Rational(const mpq_class& value) {
  mpq_class v(value);
  v.canonicalize();
  std::int64_t n = 0, d = 1;
  if (mpz_to_i64(v.get_num(), n) && mpz_to_i64(v.get_den(), d)) {
    num_ = n;
    den_ = d;
  } else {
    big_ = std::make_shared<const mpq_class>(std::move(v));
    num_ = 0;
    den_ = 1;
  }
}

Rational Rational::from_wide(i128 num, i128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  u128 mag = num < 0 ? u128(0) - u128(num) : u128(num);
  constexpr u128 u64max = std::numeric_limits<std::uint64_t>::max();
  u128 g = (mag <= u64max && u128(den) <= u64max)
               ? u128(std::gcd(static_cast<std::uint64_t>(mag), static_cast<std::uint64_t>(den)))
               : gcd_u128(mag, u128(den));
  if (g > 1) {
    num /= i128(g);
    den /= i128(g);
  }
  if (fits_i64(num) && fits_i64(den)) {
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }
  mpq_class q;
  q.get_num() = mpz_from_i128(num);
  q.get_den() = mpz_from_i128(den);
  return Rational(q);
}

Rational Rational::from_int128(i128 num, i128 den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  return from_wide(num, den);
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw DomainError("empty rational literal");
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw DomainError("malformed rational literal '" + s + "'");
  if (q.get_den() == 0) throw DomainError("rational with zero denominator");
  return Rational(q);
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  mpq_class q;
  q.get_num() = mpz_from_i128(num_);
  q.get_den() = mpz_from_i128(den_);
  return q;
}

Rational Rational::operator-() const {
  if (big_ || num_ == std::numeric_limits<std::int64_t>::min()) return Rational(mpq_class(-to_mpq()));
  Rational r = *this;
  r.num_ = -num_;
  return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (den_ == rhs.den_) {
      *this = from_wide(i128(num_) + rhs.num_, den_);
    } else {
      *this = from_wide(i128(num_) * rhs.den_ + i128(rhs.num_) * den_, i128(den_) * rhs.den_);
    }
    return *this;
  }
  *this = Rational(mpq_class(to_mpq() + rhs.to_mpq()));
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (num_ == 0 || rhs.num_ == 0) {
      *this = Rational();
      return *this;
    }
    // cross-reduce first; the product of reduced factors is already reduced
    auto g1 = static_cast<std::int64_t>(std::gcd(num_, rhs.den_));
    auto g2 = static_cast<std::int64_t>(std::gcd(rhs.num_, den_));
    std::int64_t n, d;
    if (!__builtin_mul_overflow(num_ / g1, rhs.num_ / g2, &n) && !__builtin_mul_overflow(den_ / g2, rhs.den_ / g1, &d) &&
        n != std::numeric_limits<std::int64_t>::min()) {
      num_ = n;
      den_ = d;
      return *this;
    }
    *this = from_wide(i128(num_) * rhs.num_, i128(den_) * rhs.den_);
    return *this;
  }
  *this = Rational(mpq_class(to_mpq() * rhs.to_mpq()));
  return *this;
}

Rational Rational::inverse() const {
  if (is_zero()) throw DomainError("division by zero");
  if (big_) return Rational(mpq_class(1 / *big_));
  return from_wide(den_, num_);
}

Rational& Rational::operator/=(const Rational& rhs) { return *this *= rhs.inverse(); }

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical: a value has exactly one representation
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    i128 lhs = i128(a.num_) * b.den_;
    i128 rhs = i128(b.num_) * a.den_;
    return lhs <=> rhs;
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c <=> 0;
}

double Rational::to_double() const {
  if (big_) return big_->get_d();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::numerator_string() const {
  return big_ ? big_->get_num().get_str() : std::to_string(num_);
}

std::string Rational::denominator_string() const {
  return big_ ? big_->get_den().get_str() : std::to_string(den_);
}

std::string Rational::to_string() const {
  if (is_integer()) return numerator_string();
  return numerator_string() + "/" + denominator_string();
}

std::size_t Rational::hash() const {
  if (big_) return std::hash<std::string>{}(big_->get_str());
  std::size_t h = std::hash<std::int64_t>{}(num_);
  return h ^ (std::hash<std::int64_t>{}(den_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Rational Rational::factorial(int k) {
  if (k < 0) throw DomainError("factorial of negative number");
  Rational r(1);
  for (int i = 2; i <= k; ++i) r *= Rational(i);
  return r;
}

Rational Rational::binomial(long long top, int k) {
  if (k < 0) return Rational(0);
  Rational r(1);
  for (int i = 0; i < k; ++i) r *= Rational(top - i, i + 1);
  return r;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace bvtrace
