#include "bvtrace/checks.hpp"
#include "bvtrace/errors.hpp"
#include "bvtrace/parser.hpp"
#include "bvtrace/vertex.hpp"
#include "doctest.h"

using namespace bvtrace;

namespace {
const auto gens = GeneratorSet::beta_gamma_bc();
const auto v = [](const char* s) { return parse_vertex(s, GeneratorSet::beta_gamma_bc(), 8); };
}  // namespace

TEST_SUITE("vertex") {
  TEST_CASE("free-field OPEs") {
    CHECK(ope_singular(v("beta"), v("gamma")).to_string() == "h/(z-w)");
    CHECK(ope_singular(v("gamma"), v("beta")).to_string() == "-h/(z-w)");
    CHECK(ope_singular(v("b"), v("c")).to_string() == "h/(z-w)");
    CHECK(ope_singular(v("c"), v("c")).empty());
    CHECK(ope_singular(v(":beta gamma:"), v(":beta gamma:")).to_string() == "-h^2/(z-w)^2");
  }

  TEST_CASE("n-th products") {
    CHECK(nth_product(v("beta"), v("gamma"), 0) == v("h"));
    CHECK(nth_product(v(":beta gamma:"), v(":beta gamma:"), 1) == v("-h^2"));
    CHECK(nth_product(v(":beta gamma:"), v(":beta gamma:"), 2).is_zero());
    CHECK(nth_product(v("D beta"), v("gamma"), 1) == v("-h"));
    CHECK(nth_product(v("beta"), v("D gamma"), 1) == v("h"));
  }

  TEST_CASE("translation") {
    CHECK(translate(v(":beta gamma:")) == v(":D beta gamma: + :beta D gamma:"));
    CHECK(translate(v("1")).is_zero());
    CHECK(translate(v("D beta")) == v("D^2 beta"));
  }

  TEST_CASE("normal ordering signs") {
    CHECK(v(":c b:") == -v(":b c:"));
    CHECK(v(":c c:").is_zero());
    CHECK(v(":gamma beta:") == v(":beta gamma:"));
  }

  TEST_CASE("mode brackets") {
    auto m = [&](const char* s, int k) { return ModeSum::mode(v(s), k); };
    CHECK(mode_bracket(m("beta", 0), m("gamma", -1)).to_string() == "h");
    CHECK(mode_bracket(m("b", 0), m("c", 0)).is_zero());
    CHECK(mode_bracket(m(":beta gamma:", 1), m(":beta gamma:", 1)).is_zero());
    // integration by parts: oint z (T beta) = -oint beta
    CHECK(m("D beta", 1) == -m("beta", 0));
  }

  TEST_CASE("QME check") {
    auto c = qme_check(v("c"));
    CHECK(c.zero);
    CHECK_FALSE(c.vacuous);
    auto even = qme_check(v(":beta gamma:"));
    CHECK(even.vacuous);
    CHECK(even.zero);
    auto bc = qme_check(v(":beta gamma c:"));
    CHECK_FALSE(bc.vacuous);
  }

  TEST_CASE("generators") {
    CHECK(gens->size() == 4);
    CHECK(gens->index("gamma") == 1);
    CHECK_THROWS_AS(gens->index("delta"), DomainError);
  }

  TEST_CASE("skew-symmetry, translation and Jacobi on random samples") {
    auto r = check_vertex(50, 17);
    INFO(r.first_failure);
    CHECK(r.passed());
  }
}
