#include "bvtrace/checks.hpp"
#include "bvtrace/correlation.hpp"
#include "doctest.h"

using namespace bvtrace;

namespace {
const auto pi = PoissonTensor::standard(1);
}  // namespace

TEST_SUITE("fedosov") {
  TEST_CASE("trivial data passes") {
    FedosovData zero{BaseForm(2, 1, 2, 6), BaseForm(2, 1, 2, 6), BaseForm(2, 1, 2, 6), BaseForm(2, 1, 2, 6)};
    auto r = fedosov_verify(zero, pi);
    CHECK(r.passed);
    CHECK(r.residual_zero);
  }

  TEST_CASE("synthesized instances") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto good = fedosov_verify(synthesize_fedosov(2, 1, 2, 6, seed, false), pi);
      CHECK(good.passed);
      CHECK(good.omega_central);
      auto bad = fedosov_verify(synthesize_fedosov(2, 1, 2, 6, seed, true), pi);
      CHECK_FALSE(bad.passed);
      CHECK_FALSE(bad.residual.is_zero());
    }
  }

  TEST_CASE("suite") {
    auto r = check_fedosov(10, 1, 3, 6, 31);
    INFO(r.first_failure);
    CHECK(r.passed());
    CHECK(r.checked == 20);
  }
}
