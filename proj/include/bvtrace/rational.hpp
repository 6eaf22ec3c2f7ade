#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace bvtrace {

/// Exact rational number, always stored reduced with a positive denominator.
///
/// Values whose numerator and denominator fit in 64 bits are held inline; anything
/// larger is promoted to a shared, immutable GMP rational. The two representations
/// are never mixed for the same value, so structural equality is value equality.
class Rational {
 public:
  Rational() = default;
  Rational(long long value) : num_(value) {  // NOLINT(google-explicit-constructor)
    if (value == std::numeric_limits<std::int64_t>::min()) *this = from_int128(value, 1);
  }
  Rational(long long num, long long den);
  explicit Rational(const mpq_class& value);

  /// Reduces num/den (den != 0) built from wide intermediates.
  static Rational from_int128(__int128 num, __int128 den);

  /// Parses "p", "-p" or "p/q" (decimal digits only, arbitrary length).
  static Rational parse(std::string_view text);

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const;
  /// True when numerator and denominator are held inline as 64-bit values.
  bool is_small() const { return !big_; }
  std::int64_t small_num() const { return num_; }
  std::int64_t small_den() const { return den_; }
  int sign() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  Rational inverse() const;
  Rational abs() const { return sign() < 0 ? -*this : *this; }

  mpq_class to_mpq() const;
  double to_double() const;
  std::string numerator_string() const;
  std::string denominator_string() const;
  /// Canonical text: "p" for integers, "p/q" otherwise.
  std::string to_string() const;
  std::size_t hash() const;

  static Rational factorial(int k);
  static Rational binomial(long long top, int k);  // generalized, top may be negative

 private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace bvtrace

template <>
struct std::hash<bvtrace::Rational> {
  std::size_t operator()(const bvtrace::Rational& r) const noexcept { return r.hash(); }
};
