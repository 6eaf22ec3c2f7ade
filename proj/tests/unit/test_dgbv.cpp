#include <random>

#include "bvtrace/checks.hpp"
#include "bvtrace/dgbv.hpp"
#include "bvtrace/errors.hpp"
#include "bvtrace/parser.hpp"
#include "doctest.h"

using namespace bvtrace;

namespace {
using Matrix = std::vector<std::vector<Rational>>;

Matrix zeros(int n) { return Matrix(n, std::vector<Rational>(n)); }

// e (degree 0) and f (degree 1) with omega(e, f) = 1.
DgSymplecticSpace pair_space() {
  DgSymplecticSpace s{{"e", "f"}, {0, 1}, zeros(2), zeros(2)};
  s.omega[0][1] = 1;
  s.omega[1][0] = -1;
  return s;
}

Functional fn(const DgSymplecticSpace& s, const char* text) { return parse_functional(text, s, 4); }
}  // namespace

TEST_SUITE("dgbv") {
  TEST_CASE("Poisson kernel of the two-dimensional space") {
    auto s = pair_space();
    auto k = poisson_kernel(s);
    CHECK(k.degree == 1);
    CHECK(bv_laplacian(k, fn(s, "e*f")) == fn(s, "1"));
    CHECK(bv_laplacian(k, fn(s, "e")).is_zero());
    CHECK(bv_laplacian(k, fn(s, "f")).is_zero());
    CHECK(bv_bracket(k, fn(s, "e"), fn(s, "f")) == fn(s, "1"));
  }

  TEST_CASE("degree constraints are enforced") {
    DgSymplecticSpace even{{"a", "b"}, {0, 0}, zeros(2), zeros(2)};
    even.omega[0][1] = 1;
    even.omega[1][0] = -1;
    CHECK_THROWS_AS(poisson_kernel(even), DomainError);
    auto singular = pair_space();
    singular.omega = zeros(2);
    CHECK_THROWS_AS(poisson_kernel(singular), DomainError);
  }

  TEST_CASE("two pairs with Q = 0") {
    DgSymplecticSpace s{{"e1", "f1", "e2", "f2"}, {0, 1, 0, 1}, zeros(4), zeros(4)};
    s.omega[0][1] = s.omega[2][3] = 1;
    s.omega[1][0] = s.omega[3][2] = -1;
    auto k = poisson_kernel(s);
    CHECK(k.t[0][1] != Rational(0));
    CHECK(k.t[0][2] == Rational(0));
    CHECK(bv_laplacian(k, fn(s, "e1*f1 + e2*f2")) == fn(s, "2"));
  }

  TEST_CASE("HRG flow") {
    auto s = pair_space();
    Kernel2 p{zeros(2), 0};
    p.t[0][0] = 1;
    CHECK(hrg_flow(p, fn(s, "e^2")) == fn(s, "e^2 + h"));
    CHECK(hrg_flow(p, fn(s, "f")) == fn(s, "f"));
  }

  TEST_CASE("master equation") {
    auto s = pair_space();
    auto k = poisson_kernel(s);
    for (auto mode : {MasterMode::classical, MasterMode::quantum}) {
      CHECK(master_equation_check(s, k, fn(s, "0"), mode).passed);
      CHECK(master_equation_check(s, k, fn(s, "e"), mode).passed);
    }
    // pairs (u deg -1, v deg 2), (e deg 0, f deg 1): I = u e f has degree 0,
    // vanishing classical bracket and Delta I = +-u, so only the quantum check fails
    DgSymplecticSpace t{{"u", "v", "e", "f"}, {-1, 2, 0, 1}, zeros(4), zeros(4)};
    t.omega[0][1] = t.omega[2][3] = 1;
    t.omega[1][0] = t.omega[3][2] = -1;
    auto kt = poisson_kernel(t);
    auto i = parse_functional("u*e*f", t, 4);
    CHECK(master_equation_check(t, kt, i, MasterMode::classical).passed);
    auto bad = master_equation_check(t, kt, i, MasterMode::quantum);
    CHECK_FALSE(bad.passed);
    CHECK_FALSE(bad.residual.is_zero());
    CHECK_THROWS_AS(master_equation_check(s, k, fn(s, "f"), MasterMode::quantum), DomainError);
  }

  TEST_CASE("HRG conjugation and square-zero identities on random spaces") {
    auto r = check_dgbv(8, 3, 5, 4, 21);
    INFO(r.first_failure);
    CHECK(r.passed());
  }

  TEST_CASE("random spaces are valid") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
      auto s = random_space(1 + i % 3, rng);
      CHECK_NOTHROW(s.validate());
      CHECK_NOTHROW(poisson_kernel(s));
    }
  }
}
