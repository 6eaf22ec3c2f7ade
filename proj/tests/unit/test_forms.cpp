#include "bvtrace/checks.hpp"
#include "bvtrace/forms.hpp"
#include "bvtrace/parser.hpp"
#include "doctest.h"

using namespace bvtrace;

namespace {
FormalForm f(const char* s, int n = 1) { return parse_form(s, n, 6); }
}  // namespace

namespace {
const auto pi = PoissonTensor::standard(1);
}  // namespace

TEST_SUITE("bvforms") {
  TEST_CASE("de Rham differential") {
    CHECK(de_rham_d(f("p1*dq1")) == f("dp1^dq1"));
    CHECK(de_rham_d(f("1")).is_zero());
    CHECK(de_rham_d(f("p1*q1")) == f("q1*dp1 + p1*dq1"));
  }

  TEST_CASE("contraction with the bivector") {
    CHECK(iota_pi(f("dp1^dq1"), pi) == f("1"));
    CHECK(iota_pi(f("dq1^dp1"), pi) == f("-1"));
    CHECK(iota_pi(f("p1*dq1"), pi).is_zero());
    CHECK(iota_pi(f("p1*dp1^dq1"), pi) == f("p1"));
  }

  TEST_CASE("BV operator") {
    CHECK(bv_delta(f("p1*dq1"), pi) == f("1"));
    CHECK(bv_delta(f("q1*dp1"), pi) == f("-1"));
    CHECK(bv_delta(f("p1^2*q1"), pi).is_zero());
  }

  TEST_CASE("integrals") {
    CHECK(berezin_integral(f("dp1^dq1"), pi).to_string() == "h");
    CHECK(equivariant_integral(f("1"), pi).to_string() == "u");
    CHECK(equivariant_integral(f("p1*dq1"), pi).is_zero());
    auto pi2 = PoissonTensor::standard(2);
    CHECK(equivariant_integral(f("1", 2), pi2).to_string() == "u^2");
  }

  TEST_CASE("wedge signs") {
    CHECK(f("dp1^dq1") == -f("dq1^dp1"));
    CHECK(f("dp1^dp1").is_zero());
    CHECK(f("dp1^dq1").homogeneous_degree() == 2);
  }

  TEST_CASE("square-zero identities on random forms") {
    auto r = check_forms(100, 2, 3, 6, 9);
    INFO(r.first_failure);
    CHECK(r.passed());
  }
}
