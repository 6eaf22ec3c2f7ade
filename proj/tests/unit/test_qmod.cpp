#include "bvtrace/checks.hpp"
#include "bvtrace/errors.hpp"
#include "bvtrace/parser.hpp"
#include "bvtrace/qmod.hpp"
#include "doctest.h"

using namespace bvtrace;

namespace {
QSeries qs(const char* s, int n) { return parse_qseries(s, n); }
}  // namespace

TEST_SUITE("qmod") {
  TEST_CASE("Eisenstein series") {
    CHECK(eisenstein(2, 5).to_string() == "1 - 24*q - 72*q^2 - 96*q^3 - 168*q^4 - 144*q^5");
    CHECK(eisenstein(4, 2).to_string() == "1 + 240*q + 2160*q^2");
    CHECK(eisenstein(6, 1).to_string() == "1 - 504*q");
    CHECK(bernoulli(2) == Rational(1, 6));
    CHECK(bernoulli(12) == Rational(-691, 2730));
    CHECK(eisenstein(12, 0).to_string() == "1");
  }

  TEST_CASE("recognition") {
    auto r = recognize(eisenstein(2, 20).q_derivative(), 4);
    REQUIRE(r.success);
    CHECK(r.form.to_string() == "1/12*E2^2 - 1/12*E4");
    auto e4e6 = recognize(eisenstein(4, 20) * eisenstein(6, 20), 10);
    REQUIRE(e4e6.success);
    CHECK(e4e6.form.to_string() == "E4*E6");
    auto bad = recognize(qs("1 + q", 10), 2);
    CHECK_FALSE(bad.success);
    CHECK_FALSE(bad.residual.is_zero());
    CHECK_THROWS_AS(recognize(qs("1 + q", 1), 12), UndecidableError);
    CHECK(quasi_modular_basis(6).size() == 3);
  }

  TEST_CASE("A-cycle averages") {
    FourierKernel k(1, 3);
    k.at(0, 0) = 1;
    k.at(0, 2) = 5;
    KernelMap one{{{0, 0}, k}};
    CHECK(a_cycle_average(one, 1).to_string() == "1 + 5*q^2");

    // e^{2 pi i (z0 - z1)} q  and its conjugate: constant mode from the product
    FourierKernel sym(1, 3);
    sym.at(1, 1) = 1;
    sym.at(-1, 1) = 1;
    FourierKernel other(1, 3);
    other.at(1, 0) = 2;
    other.at(-1, 0) = 2;
    KernelMap pair{{{0, 1}, sym}, {{1, 0}, other}};
    auto avg = a_cycle_average(pair, 2);
    CHECK(avg == a_cycle_single(pair, 2, 3));
    CHECK(avg.to_string() == "4*q");

    // orderings with different expansions average arithmetically
    FourierKernel alt(1, 3);
    alt.at(0, 0) = 3;
    KernelMap first{{{0, 1}, k}}, second{{{0, 1}, alt}};
    auto mixed = a_cycle_average(first, 2, {{{1, 0}, second}});
    CHECK(mixed == (a_cycle_single(first, 2, 3) + a_cycle_single(second, 2, 3)).scaled(Rational(1, 2)));
    CHECK(mixed.to_string() == "2 + 5/2*q^2");
  }

  TEST_CASE("Fock characters and traces") {
    CHECK(fock_character({FockSystem::bc, 3}).to_string() == "1 + 2*q + 3*q^2 + 6*q^3");
    CHECK(fock_character({FockSystem::beta_gamma, 3}).to_string() == "1 + 2*q + 5*q^2 + 10*q^3");
    CHECK(fock_character({FockSystem::bc, 0}).to_string() == "1");
    FockSpace bc{FockSystem::bc, 8};
    CHECK(fock_trace(bc, DiagonalOperator::energy()) == fock_character(bc).q_derivative());
    CHECK(fock_trace(bc, DiagonalOperator::identity()) == fock_character(bc));
    // mode-1 number operator: q prod_{m>=2}(1+q^m) prod_{m>=1}(1+q^m)
    auto expected = qs("q", 8);
    for (int m = 1; m <= 8; ++m) {
      QSeries f(8);
      f[0] = 1;
      f[m] = 1;
      expected = expected * f;
      if (m >= 2) expected = expected * f;
    }
    CHECK(fock_trace(bc, DiagonalOperator::number(0, 1)) == expected);
  }

  TEST_CASE("Ramanujan identities and round trips") {
    auto r = check_quasi_modular(20, 12, 3);
    INFO(r.first_failure);
    CHECK(r.passed());
    auto f = check_fock(12);
    INFO(f.first_failure);
    CHECK(f.passed());
  }
}
