#include <random>

#include "bvtrace/checks.hpp"
#include "bvtrace/errors.hpp"
#include "bvtrace/parser.hpp"
#include "bvtrace/random.hpp"
#include "bvtrace/weyl.hpp"
#include "doctest.h"

using namespace bvtrace;

namespace {
WeylElement w(const char* s, int n = 1, int order = 6) { return parse_weyl(s, n, order); }
}  // namespace

TEST_SUITE("weyl") {
  TEST_CASE("moyal product of generators") {
    auto pi = PoissonTensor::standard(1);
    CHECK(moyal_star(w("p1"), w("q1"), pi).to_string() == "p1*q1 + 1/2*h");
    CHECK(star_commutator(w("p1"), w("q1"), pi).to_string() == "1");
    CHECK(moyal_star(w("q1^2"), w("p1^2"), pi) == w("p1^2*q1^2 - 2*h*p1*q1 + 1/2*h^2"));
  }

  TEST_CASE("mismatched generator counts are rejected") {
    auto pi = PoissonTensor::standard(1);
    CHECK_THROWS_AS(moyal_star(w("p1"), w("p2", 2), pi), DomainError);
  }

  TEST_CASE("non-standard Poisson tensors are validated") {
    CHECK_THROWS_AS(PoissonTensor::from_matrix(1, {{0, 1}, {1, 0}}), DomainError);
    CHECK_THROWS_AS(PoissonTensor::from_matrix(1, {{0, 0}, {0, 0}}), DomainError);
    auto pi = PoissonTensor::from_matrix(1, {{0, 2}, {-2, 0}});
    CHECK(star_commutator(w("p1"), w("q1"), pi).to_string() == "2");
  }

  TEST_CASE("projections") {
    auto pr = pr_projections(w("3 + p1 + p1*q1 + h*q1^2"));
    CHECK(pr.quadratic == w("p1*q1"));
    CHECK(pr.central.to_string() == "3");
    auto quad = pr_projections(w("p1^2 - q1^2"));
    CHECK(quad.quadratic == w("p1^2 - q1^2"));
    CHECK(quad.central.is_zero());
    auto cst = pr_projections(w("2 + h"));
    CHECK(cst.quadratic.is_zero());
    CHECK(cst.central.to_string() == "2 + h");
  }

  TEST_CASE("curvature bilinears") {
    auto pi = PoissonTensor::standard(1);
    auto c = curvature_bilinears(w("p1"), w("q1"), pi);
    CHECK(c.r1.is_zero());
    CHECK(c.r3.to_string() == "-1");
    auto quad = curvature_bilinears(w("p1^2"), w("q1^2"), pi);
    CHECK(quad.r1.is_zero());
    CHECK(quad.r3 == -pr_projections(star_commutator(w("p1^2"), w("q1^2"), pi)).central);
    auto central = curvature_bilinears(w("5"), w("p1*q1"), pi);
    CHECK(central.r1.is_zero());
    CHECK(central.r3.is_zero());
  }

  TEST_CASE("star-product properties on random samples") {
    auto r = check_moyal(200, 3, 4, 6, 7);
    INFO(r.first_failure);
    CHECK(r.passed());
  }

  TEST_CASE("associativity through the truncation order, n = 2") {
    std::mt19937_64 rng(3);
    auto pi = PoissonTensor::standard(2);
    for (int i = 0; i < 50; ++i) {
      auto a = random_weyl(2, 5, 3, 3, rng), b = random_weyl(2, 5, 3, 3, rng), c = random_weyl(2, 5, 3, 3, rng);
      CHECK(moyal_star(moyal_star(a, b, pi), c, pi) == moyal_star(a, moyal_star(b, c, pi), pi));
    }
  }
}
