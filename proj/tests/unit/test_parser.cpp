#include <random>

#include "bvtrace/errors.hpp"
#include "bvtrace/parser.hpp"
#include "bvtrace/random.hpp"
#include "doctest.h"

using namespace bvtrace;

TEST_SUITE("parser") {
  TEST_CASE("documented inputs") {
    auto w = parse_weyl("p1*q1 + 1/2*h", 1, 4);
    CHECK(w.to_string() == "p1*q1 + 1/2*h");
    CHECK(parse_chain("p1 | q1", 1, 4).to_string() == "(p1 | q1)");
    auto gens = GeneratorSet::beta_gamma_bc();
    auto v = parse_vertex(":b D^1 c:", gens, 4);
    CHECK(v.to_string() == ":b D^1 c:");
    CHECK(v == parse_vertex(":b D c:", gens, 4));
    CHECK(parse_qseries("(E2^2 - E4)/12", 3).to_string() == parse_qseries("1/12*E2^2 - 1/12*E4", 3).to_string());
    CHECK(parse_weyl("h^-1*p1", 1, 4).valuation() == -1);
    CHECK(parse_qseries("E2^2/12 - E4/12", 3) == parse_qseries("1/12*E2^2 - 1/12*E4", 3));
    CHECK(parse_weyl("h^-2/3", 1, 4) == parse_weyl("1/3*h^-2", 1, 4));
    CHECK(infer_weyl_n("p1*q3 + dp2") == 3);
    CHECK(mentions_identifier("(p1|q1)*u", "u"));
    CHECK_FALSE(mentions_identifier("mu + u2", "u"));
  }

  TEST_CASE("errors carry positions") {
    try {
      parse_weyl("p1 + * q1", 1, 4);
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
      CHECK(e.column() == 6);
    }
    try {
      parse_weyl("p1 +\n  x3", 1, 4);
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 3);
      CHECK(std::string(e.what()).find("unknown identifier 'x3'") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_weyl("(p1", 1, 4), ParseError);
    CHECK_THROWS_AS(parse_weyl("1/0", 1, 4), ParseError);
    CHECK_THROWS_AS(parse_weyl("p1/q1", 1, 4), ParseError);
    CHECK_THROWS_AS(parse_weyl("p1 | q1", 1, 4), ParseError);
    CHECK_THROWS_AS(parse_weyl(std::string(kMaxInputBytes + 1, '1'), 1, 4), ParseError);
  }

  TEST_CASE("round trips: Weyl elements") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
      int n = 1 + i % 3;
      auto x = random_weyl(n, 6, 4, 1 + i % 5, rng);
      REQUIRE_MESSAGE(parse_weyl(x.to_string(), n, 6) == x, x.to_string());
    }
  }

  TEST_CASE("round trips: chains") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 1000; ++i) {
      int n = 1 + i % 2;
      auto x = random_chain(n, 6, i % 4, 3, 2, rng);
      REQUIRE_MESSAGE(parse_chain(x.to_string(), n, 6) == x, x.to_string());
    }
  }

  TEST_CASE("round trips: periodic chains") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
      int n = 1 + i % 2;
      auto x = random_periodic(n, 6, 3, 3, rng);
      REQUIRE_MESSAGE(parse_periodic(x.to_string(), n, 6) == x, x.to_string());
    }
  }

  TEST_CASE("round trips: forms") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 1000; ++i) {
      int n = 1 + i % 2;
      auto x = random_form(n, 6, 3, 1 + i % 4, rng);
      REQUIRE_MESSAGE(parse_form(x.to_string(), n, 6) == x, x.to_string());
    }
  }

  TEST_CASE("round trips: vertex polynomials") {
    std::mt19937_64 rng(5);
    auto gens = GeneratorSet::beta_gamma_bc();
    for (int i = 0; i < 1000; ++i) {
      auto x = random_vertex_polynomial(gens, 8, 3, 3, 1 + i % 4, rng);
      REQUIRE_MESSAGE(parse_vertex(x.to_string(), gens, 8) == x, x.to_string());
    }
  }

  TEST_CASE("round trips: q-series") {
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> num(-50, 50), den(1, 9), zero(0, 2);
    for (int i = 0; i < 1000; ++i) {
      int n = i % 12;
      QSeries x(n);
      for (int k = 0; k <= n; ++k)
        if (zero(rng)) x[k] = Rational(num(rng), den(rng));
      REQUIRE_MESSAGE(parse_qseries(x.to_string(), n) == x, x.to_string());
    }
  }

  TEST_CASE("round trips: functionals") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
      auto space = random_space(1 + i % 3, rng);
      auto x = random_functional(space, 4, 4, 1 + i % 4, rng);
      REQUIRE_MESSAGE(parse_functional(x.to_string(space.names), space, 4) == x, x.to_string(space.names));
    }
  }
}
