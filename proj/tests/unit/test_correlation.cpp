#include <filesystem>
#include <fstream>

#include "bvtrace/cache.hpp"
#include "bvtrace/checks.hpp"
#include "bvtrace/correlation.hpp"
#include "bvtrace/parser.hpp"
#include "doctest.h"

using namespace bvtrace;

namespace {
EdgeIntegrand edges(int m, std::vector<std::pair<int, int>> e) {
  EdgeIntegrand x;
  x.m = m;
  x.edges = std::move(e);
  return x;
}
FormalForm f(const char* s) { return parse_form(s, 1, 6); }
ChainSum c(const char* s) { return parse_chain(s, 1, 6); }
}  // namespace

namespace {
const auto pi = PoissonTensor::standard(1);
}  // namespace

TEST_SUITE("correlation") {
  TEST_CASE("sawtooth") {
    CHECK(sawtooth(Rational(1, 4)) == Rational(-1, 4));
    CHECK(sawtooth(Rational(0)) == Rational(0));
    CHECK(sawtooth(Rational(5, 4)) == Rational(-1, 4));
  }

  TEST_CASE("simplex integrals") {
    CHECK(simplex_integral(edges(1, {})) == Rational(1));
    CHECK(simplex_integral(edges(1, {{0, 1}})) == Rational(0));
    // int_{0<a<b<1} (b - a - 1/2)^2
    CHECK(simplex_integral(edges(2, {{1, 2}, {1, 2}})) == Rational(1, 24));
    CHECK(simplex_integral(edges(2, {})) == Rational(1, 2));
    CHECK(edges(2, {{1, 2}, {0, 1}}).key() == "m2:0-1,1-2");
    CHECK(EdgeIntegrand::parse_key("m2:0-1,1-2").key() == "m2:0-1,1-2");
  }

  TEST_CASE("correlation values") {
    CHECK(correlation_free(c("1"), pi) == f("1"));
    CHECK(correlation_free(c("p1 | q1"), pi) == f("p1*dq1"));
    CHECK(correlation_free(c("p1^2 | q1^2"), pi) == f("2*p1^2*q1*dq1"));
    CHECK(correlation_free(c("1 | p1 | q1"), pi) == f("1/2*dp1^dq1"));
    // chain-map instance: <b(p|q)> = h = h Delta <p|q>
    CHECK(correlation_free(hochschild_b(c("p1 | q1"), pi), pi) == bv_delta(f("p1*dq1"), pi).shifted(1));
  }

  TEST_CASE("traces") {
    CHECK(trace(parse_periodic("1", 1, 6), pi).to_string() == "u");
    CHECK(trace(parse_periodic("p1 | q1", 1, 6), pi).is_zero());
    CHECK(trace(periodic_diff(parse_periodic("p1 | q1", 1, 6), pi), pi).is_zero());
    auto r = check_trace_cocycle(50, 2, 3, 3, 6, 13);
    INFO(r.first_failure);
    CHECK(r.passed());
  }

  TEST_CASE("chain map, n = 1 exhaustive to degree 2") {
    auto rep = verify_chain_map(pi, 2, 2, 2);
    INFO(rep.first_failure);
    CHECK(rep.passed());
    CHECK(rep.chains > 0);
    auto serial = verify_chain_map(pi, 2, 2, 1);
    CHECK(serial.chains == rep.chains);
  }

  TEST_CASE("wheels and the A-hat factor") {
    CHECK(wheel_integral(1) == Rational(0));
    CHECK(wheel_integral(2) == Rational(-1, 24));
    CHECK(wheel_integral(3) == Rational(0));
    CHECK(wheel_ordered_integral(2) == wheel_integral(2));
    auto a = a_hat_factor(4);
    CHECK(a[0] == Rational(1));
    CHECK(a[2] == Rational(-1, 24));
    CHECK(a[4] == Rational(7, 5760));
  }

  TEST_CASE("heat-kernel propagator") {
    CHECK(std::abs(heat_propagator(0.25, 1e-5, 3) + 0.25) < 1e-6);
    CHECK(std::abs(heat_propagator(0.5, 1e-5, 3)) < 1e-6);
    CHECK(heat_propagator(1e-3, 1e-10, 3) < -0.498);
  }

  TEST_CASE("persistent simplex cache") {
    auto dir = std::filesystem::temp_directory_path() / "bvtrace_unit_cache";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    simplex_memo_clear();
    simplex_integral(edges(2, {{0, 1}, {1, 2}}));
    CHECK(store_simplex_cache(dir) >= 1);
    {
      std::ofstream out(simplex_cache_file(dir), std::ios::app);
      out << "garbage line\n";
    }
    simplex_memo_clear();
    auto rep = load_simplex_cache(dir, true);
    CHECK(rep.loaded >= 1);
    REQUIRE(rep.warnings.size() == 1);
    CHECK(rep.warnings[0].find("skipping corrupt cache line") != std::string::npos);
    // tampered value
    {
      std::ofstream out(simplex_cache_file(dir), std::ios::trunc);
      out << "m2:0-1,1-2 5/7\n";
    }
    simplex_memo_clear();
    CHECK_THROWS_AS(load_simplex_cache(dir, true), CacheMismatchError);
    simplex_memo_clear();
    std::filesystem::remove_all(dir);
  }
}
