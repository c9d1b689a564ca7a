#include <catch2/catch.hpp>

#include "rvflow/model_flow.hpp"
#include "rvflow/pairing.hpp"
#include "rvflow/rng.hpp"

using namespace rvflow;
using namespace rvflow::pairing_functionals;

TEST_CASE("pair_strip reproduces the closed form") {
  SECTION("s = 1 closed form pi (cbar^2 - 1)/4") {
    for (cx c : {cx(0.4, 0.3), cx(1.7, -0.2), cx(0.9, 0.8)}) {
      const auto res = pair_strip(c, {1.0});
      const cx expected = pi * (std::conj(c) * std::conj(c) - 1.0) / 4.0;
      REQUIRE(std::abs(res.value - expected) <= 1e-8 * std::abs(expected));
      REQUIRE(res.est_error < 1e-8 * (1.0 + std::abs(expected)));
      REQUIRE(res.n_evals > 0);
    }
  }
  SECTION("c = 1 pairs to zero for any s") {
    for (double s : {0.3, 1.0, 2.5}) {
      const auto res = pair_strip({1.0, 0.0}, {s});
      REQUIRE(std::abs(res.value) < 1e-14);
    }
  }
  SECTION("c = 2, s = 1 gives 3 pi / 4") {
    const auto res = pair_strip({2.0, 0.0}, {1.0});
    REQUIRE(res.value.real() == Approx(3.0 * pi / 4.0).epsilon(1e-10));
    REQUIRE(std::abs(res.value.imag()) < 1e-12);
  }
  SECTION("quadrature vs closed form, 20 random c, three annuli, relative 1e-8") {
    SplitMix64 rng(31);
    for (int i = 0; i < 20; ++i) {
      const cx c = rng.in_disk({1.0, 0.0}, 1.0);
      for (double s : {0.5, 1.0, 2.0}) {
        const auto res = pair_strip(c, {s});
        const cx expected = pair_strip_closed_form(c, s);
        REQUIRE(std::abs(res.value - expected) <= 1e-8 * std::max(1e-6, std::abs(expected)));
      }
    }
  }
  SECTION("scaling law <mu,psi>_{sk} = k <mu,psi>_s") {
    SplitMix64 rng(32);
    for (int i = 0; i < 8; ++i) {
      const cx c = rng.in_disk({1.0, 0.0}, 1.0);
      const double s = rng.uniform(0.2, 1.1);
      const cx base = pair_strip(c, {s}).value;
      for (int k : {2, 3, 5}) {
        const cx scaled = pair_strip(c, {k * s}).value;
        REQUIRE(std::abs(scaled - double(k) * base) <=
                1e-10 * std::abs(double(k) * base) + 1e-16);
      }
    }
  }
  SECTION("invalid annulus and exhausted quadrature budget are reported") {
    CHECK_THROWS_AS(pair_strip({0.5, 0.5}, {-1.0}), std::invalid_argument);
    quadrature::QuadConfig starved;
    starved.rel_tol = 1e-30;
    starved.abs_tol = 1e-300;
    starved.max_evals = 64;
    CHECK_THROWS_AS(pair_strip({0.5, 0.5}, {1.0}, starved), error);
  }
}

TEST_CASE("limit functionals") {
  SECTION("F_ell frozen values") {
    CHECK(F_ell({1, 0}) == 0.0);
    CHECK(F_ell({2, 0}) == 1.5);
    CHECK(F_ell({0, 1}) == -1.0);
  }
  SECTION("F_L frozen values") {
    CHECK(std::abs(F_L({1, 0})) == 0.0);
    CHECK(std::abs(F_L({0, 0})) == 0.0);
    CHECK(std::abs(F_L({0, 1}) - cx(0, -0.5)) < 1e-15);
  }
  SECTION("the two exclusion constants") {
    CHECK(F_ell({2, 0}) == 1.5);                // length grows at c = 2
    CHECK(std::abs(dc_limit({2, 0})) == 0.0);   // yet the ratio is stationary
    const cx diff0 = F_L({0, 0}) - cx(F_ell({0, 0}), 0);
    CHECK(diff0.real() == 0.5);                 // log-derivative of c at c = 0
    CHECK(diff0.imag() == 0.0);
  }
  SECTION("F_ell equals (2/pi) Re pair_strip(c, s=1)") {
    SplitMix64 rng(33);
    for (int i = 0; i < 10; ++i) {
      const cx c = rng.in_disk({1.0, 0.0}, 1.0);
      const double via_pairing = 2.0 / pi * pair_strip(c, {1.0}).value.real();
      REQUIRE(F_ell(c) == Approx(via_pairing).margin(1e-10));
    }
  }
}

TEST_CASE("dc_limit identities") {
  SECTION("zeros of the limit derivative") {
    for (double c : {-1.0, 0.0, 1.0, 2.0}) CHECK(std::abs(dc_limit({c, 0})) == 0.0);
  }
  SECTION("frozen values") {
    CHECK(std::abs(dc_limit({1, 1}) - cx(1.5, 0)) < 1e-14);
    CHECK(dc_limit({0.5, 0}).real() == Approx(0.140625).margin(1e-15));
  }
  SECTION("dc = c (F_L - F_ell) = v(c) on random points") {
    SplitMix64 rng(34);
    for (int i = 0; i < 1000; ++i) {
      const cx c = rng.in_disk({1.0, 0.0}, 1.0);
      const cx via_functionals = c * (F_L(c) - cx(F_ell(c), 0));
      REQUIRE(std::abs(dc_limit(c) - via_functionals) < 1e-12);
      REQUIRE(std::abs(dc_limit(c) - model_flow::eval_v(c)) < 1e-12);
    }
  }
}

TEST_CASE("pre-limit pairing with the pulled-back differential lands on F_L") {
  SplitMix64 rng(35);
  for (int i = 0; i < 3; ++i) {
    const cx c = rng.in_disk({1.0, 0.0}, 0.8);
    if (std::abs(c) < 0.2) continue;
    for (double s : {0.5, 0.25, 0.125}) {
      const auto res = pair_strip_pullback(c, {s});
      REQUIRE(std::abs(res.value - F_L(c)) < 1e-9 * std::max(1.0, std::abs(F_L(c))));
    }
  }
  CHECK_THROWS_AS(pair_strip_pullback({0.0, 0.0}, {0.5}), error);
}

TEST_CASE("bers region") {
  SECTION("frozen cases") {
    const auto fuchsian = bers_region({1.0, {1.0, 0.0}});
    CHECK(fuchsian.satisfies);
    CHECK(std::abs(fuchsian.c - 1.0) < 1e-15);

    const auto boundary = bers_region({1.0, {2.0, 0.0}});  // 1 <= 2*2/4, boundary case
    CHECK(boundary.satisfies);
    CHECK(std::abs(boundary.c - 2.0) < 1e-15);

    const auto outside = bers_region({1.0, {2.1, 0.0}});  // 2*2.1/4.41 = 0.952 < 1
    CHECK_FALSE(outside.satisfies);
  }
  SECTION("equivalence with the disk |c - 1| <= 1 on 10^4 random pairs") {
    SplitMix64 rng(36);
    int disagreements = 0;
    for (int i = 0; i < 10000; ++i) {
      LengthPair pair;
      pair.ell = rng.uniform(0.05, 3.0);
      pair.L = {rng.uniform(0.01, 4.0), rng.uniform(-3.0, 3.0)};
      const auto verdict = bers_region(pair);
      const bool in_disk = std::abs(verdict.c - 1.0) <= 1.0;
      if (verdict.satisfies != in_disk) {
        // ties at the circle are broken by <= with 1e-14 slack
        const double gap = std::abs(std::norm(verdict.c) - 2.0 * verdict.c.real());
        if (gap > 1e-14 * std::max(1.0, std::norm(verdict.c))) ++disagreements;
      }
    }
    CHECK(disagreements == 0);
  }
  SECTION("invalid pairs are rejected") {
    CHECK_THROWS_AS(bers_region({-1.0, {1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(bers_region({1.0, {-0.5, 0.0}}), std::invalid_argument);
  }
}

TEST_CASE("real-length domination predicate is advisory only") {
  CHECK(real_length_dominated({1.0, {2.0, 5.0}}));
  CHECK_FALSE(real_length_dominated({1.0, {2.5, 0.0}}));
  // bers_region accepts inputs either way
  CHECK_NOTHROW(bers_region({1.0, {2.5, 0.0}}));
}

TEST_CASE("aux term bound") {
  CHECK(aux_term_bound(0.1, 0.01) == Approx(0.001).margin(1e-18));
  CHECK(aux_term_bound(1.0, 0.0) == 0.0);
  CHECK(aux_term_bound(0.5, 0.2) == Approx(0.1).margin(1e-16));
  CHECK(aux_term_bound(0.5, 0.4) > aux_term_bound(0.5, 0.2));
  CHECK_THROWS_AS(aux_term_bound(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(aux_term_bound(0.5, -1.0), std::invalid_argument);
}
