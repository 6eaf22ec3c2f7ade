#include <random>

#include "bvtrace/errors.hpp"
#include "bvtrace/hbar_series.hpp"
#include "doctest.h"

using namespace bvtrace;

TEST_SUITE("scalar") {
  TEST_CASE("rational printing and reduction") {
    CHECK(Rational(-3, 7).to_string() == "-3/7");
    CHECK(Rational(6, -4).to_string() == "-3/2");
    CHECK(Rational(10, 5).to_string() == "2");
    CHECK(Rational::parse("-12/8") == Rational(-3, 2));
    CHECK_THROWS_AS(Rational(1, 0), DomainError);
    CHECK_THROWS_AS(Rational(0).inverse(), DomainError);
  }

  TEST_CASE("overflow promotes to GMP and demotes back") {
    Rational big(1);
    for (int i = 0; i < 40; ++i) big *= Rational(1000003);
    CHECK_FALSE(big.is_small());
    Rational back = big;
    for (int i = 0; i < 40; ++i) back /= Rational(1000003);
    CHECK(back.is_small());
    CHECK(back == Rational(1));
    CHECK(Rational::factorial(25).to_string() == "15511210043330985984000000");
    CHECK(Rational::binomial(-1, 3) == Rational(-1));
  }

  TEST_CASE("arithmetic matches GMP on random operands") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long long> d(-(1LL << 40), 1LL << 40);
    for (int i = 0; i < 2000; ++i) {
      long long a = d(rng), b = d(rng) | 1, c = d(rng), e = d(rng) | 1;
      Rational x(a, b), y(c, e);
      mpq_class mx(mpz_class(std::to_string(a)), mpz_class(std::to_string(b))), my(mpz_class(std::to_string(c)), mpz_class(std::to_string(e)));
      mx.canonicalize();
      my.canonicalize();
      CHECK((x + y).to_mpq() == mx + my);
      CHECK((x * y).to_mpq() == mx * my);
      CHECK((x - y).to_mpq() == mx - my);
      if (!y.is_zero()) CHECK((x / y).to_mpq() == mx / my);
      CHECK(((x <=> y) < 0) == (mx < my));
    }
  }

  TEST_CASE("hbar series") {
    auto s = [](std::map<int, Rational> t, int order) { return HbarSeries::from_terms(t, order); };
    CHECK((s({{0, 1}, {1, 1}}, 4) * s({{0, 1}, {1, -1}}, 4)).to_string() == "1 - h^2");
    CHECK(s({{0, 1}, {1, -1}}, 3).inverse().to_string() == "1 + h + h^2 + h^3");
    CHECK((HbarSeries::monomial(1, -1, 4) * HbarSeries::monomial(1, 1, 4)).to_string() == "1");
    CHECK(s({{0, 1}, {1, Rational(1, 2)}}, 4).to_string() == "1 + 1/2*h");
    CHECK_THROWS_AS(HbarSeries(4).inverse(), DomainError);
    // mixed truncations keep the tighter bound
    auto sum = s({{0, 1}, {3, 1}}, 5) + s({{0, 1}}, 2);
    CHECK(sum.order() == 2);
    CHECK(sum.to_string() == "2");
  }

  TEST_CASE("u polynomial printing") {
    UPolynomial p(1, HbarSeries(Rational(1), 4));
    p.add_term(-1, HbarSeries::monomial(1, 1, 4));
    CHECK(p.to_string() == "h*u^-1 + u");
  }
}
