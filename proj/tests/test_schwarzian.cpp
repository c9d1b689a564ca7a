#include <catch2/catch.hpp>

#include "rvflow/rng.hpp"
#include "rvflow/schwarzian.hpp"

using namespace rvflow;
using namespace rvflow::schwarzian_lab;

namespace {

/// Predicate: a wrap pair z, z*exp(2 pi i/c) fits inside the log-polar core
/// of the sampling region, so non-injectivity of g_c is certain to be seen.
/// Used to draw the c population for the three-way equivalence check.
bool wrap_detectable(cx c) {
  if (std::abs(c) < 1e-9) return false;
  const double phi = 2.0 * pi * c.real() / std::norm(c);
  const double lam = 2.0 * pi * c.imag() / std::norm(c);
  return phi <= 2.55 && std::abs(lam) <= 1.35;
}

cx draw_population_c(SplitMix64& rng) {
  for (;;) {
    const double r = rng.uniform(0.0, 2.0);
    const double a = rng.uniform(0.0, 2.0 * pi);
    const cx c = 1.0 + std::polar(r, a);
    if (c.real() < 0.05) continue;
    if (std::abs(std::abs(c - 1.0) - 1.0) <= 0.05) continue;  // boundary band
    if (r > 1.0 && !wrap_detectable(c)) continue;
    return c;
  }
}

}  // namespace

TEST_CASE("closed-form schwarzian coefficient") {
  CHECK(std::abs(schwarzian_closed_form({1, 0}).C) == 0.0);
  CHECK(schwarzian_closed_form({0, 0}).C.real() == 0.5);
  CHECK(schwarzian_closed_form({2, 0}).C.real() == -1.5);
  CHECK(std::abs(schwarzian_closed_form({2, 0}).C.imag()) == 0.0);
}

TEST_CASE("numeric schwarzian agrees with the closed form") {
  SECTION("c = 1.3 + 0.4i at z = i") {
    const cx c{1.3, 0.4};
    const cx expected = -(1.0 - c * c) / 2.0;  // C / i^2
    const cx got = schwarzian_numeric(PowerMap{c}, {0, 1}, 1e-3);
    REQUIRE(std::abs(got - expected) < 1e-5 * std::abs(expected));
  }
  SECTION("a Moebius map alone has vanishing schwarzian") {
    const auto m = MobiusTransform::normalized({2, 0}, {1, 0.5}, {0.3, 0}, {1, 0});
    const cx got = schwarzian_numeric([&](cx z) { return m(z); }, {0, 2}, 1e-3);
    REQUIRE(std::abs(got) < 1e-6);
  }
  SECTION("the logarithm has coefficient 1/2") {
    const cx got = schwarzian_numeric(PowerMap{{0, 0}}, {0, 1}, 1e-3);
    REQUIRE(std::abs(got - cx(-0.5, 0)) < 1e-6);
  }
  SECTION("safe-point sweep, numeric vs closed form / z^2, relative 1e-5") {
    SplitMix64 rng(41);
    for (int i = 0; i < 30; ++i) {
      const double rho = rng.uniform(0.5, 2.0);
      const double th = rng.uniform(pi / 6, 5 * pi / 6);
      const cx z = std::polar(rho, th);
      const cx c = rng.in_disk({1.0, 0.0}, 0.9);
      const cx expected = schwarzian_closed_form(c).C / (z * z);
      const cx got = schwarzian_numeric(PowerMap{c}, z, 1e-3 * std::abs(z));
      REQUIRE(std::abs(got - expected) <= 1e-5 * std::max(1e-8, std::abs(expected)));
    }
  }
  SECTION("analytic-derivative route matches to near machine precision") {
    SplitMix64 rng(42);
    for (int i = 0; i < 30; ++i) {
      const cx z = std::polar(rng.uniform(0.5, 2.0), rng.uniform(pi / 6, 5 * pi / 6));
      const cx c = rng.in_disk({1.0, 0.0}, 0.9);
      const cx expected = schwarzian_closed_form(c).C / (z * z);
      REQUIRE(std::abs(schwarzian_analytic(PowerMap{c}, z) - expected) <
              1e-11 * std::max(1.0, std::abs(expected)));
    }
  }
  SECTION("S(g_c)(z) z^2 is constant in z") {
    SplitMix64 rng(43);
    const cx c{0.7, 0.5};
    const cx ref = schwarzian_numeric(PowerMap{c}, {0, 1}, 1e-3) * cx(-1.0);  // z = i
    for (int i = 0; i < 10; ++i) {
      const cx z = std::polar(rng.uniform(0.5, 2.0), rng.uniform(pi / 6, 5 * pi / 6));
      const cx val = schwarzian_numeric(PowerMap{c}, z, 1e-3 * std::abs(z)) * z * z;
      REQUIRE(std::abs(val - ref) <= 1e-4 * std::abs(ref));
    }
  }
  SECTION("stencils that leave the half-plane are rejected") {
    CHECK_THROWS_AS(schwarzian_numeric(PowerMap{{1.5, 0}}, cx(1.0, 0.0), 1e-3), error);
  }
}

TEST_CASE("branch-cut safety across the upper half-plane") {
  for (double th : {0.01, 0.5, pi / 2, 2.8, pi - 0.01}) {
    for (double rho : {0.2, 1.0, 3.0}) {
      const cx z = std::polar(rho, th);
      const PowerMap g{{1.4, -0.6}};
      REQUIRE(is_finite(g(z)));
      REQUIRE(is_finite(g.d1(z)));
      REQUIRE(is_finite(schwarzian_analytic(g, z)));
    }
  }
}

TEST_CASE("univalence tests") {
  SECTION("criterion on the closed disk") {
    CHECK(univalence_criterion({2, 0}));
    CHECK(univalence_criterion({1, 0}));
    CHECK_FALSE(univalence_criterion({2.2, 0}));
  }
  SECTION("strip intersection lengths") {
    CHECK(strip_intersection_length({1, 0}) == Approx(pi).margin(1e-14));
    CHECK(strip_intersection_length({2, 0}) == Approx(2 * pi).margin(1e-13));
    CHECK(strip_intersection_length({1, 1}) == Approx(2 * pi).margin(1e-12));
    CHECK(std::isinf(strip_intersection_length({-0.5, 1})));
    CHECK(std::isinf(strip_intersection_length({0.0, 1})));
  }
  SECTION("empirical injectivity frozen cases") {
    CHECK(empirical_injectivity({1.5, 0}, 10000, 7, 0.05));
    CHECK_FALSE(empirical_injectivity({2.5, 0}, 10000, 7, 0.05));
    CHECK(empirical_injectivity({1.0, 0}, 10000, 7, 0.05));
    CHECK_THROWS_AS(empirical_injectivity({1.5, 0}, 50, 7, 0.05), std::invalid_argument);
  }
  SECTION("three-way equivalence on a 10^3 population") {
    SplitMix64 rng(44);
    for (int i = 0; i < 1000; ++i) {
      const cx c = draw_population_c(rng);
      const bool disk = univalence_criterion(c);
      const bool strip = strip_intersection_length(c) <= 2.0 * pi;
      const bool empirical = empirical_injectivity(c, 300, 1000 + i, 0.05);
      REQUIRE(disk == strip);
      REQUIRE(disk == empirical);
    }
  }
}

TEST_CASE("moebius invariance of the schwarzian") {
  SECTION("identity composition changes nothing") {
    CHECK(mobius_invariance_check({1.2, 0}, MobiusTransform::identity(), {0, 1}) == 0.0);
  }
  SECTION("z -> 1/(z+3) composed with g_{1.2} at z = i") {
    const auto m = MobiusTransform::normalized({0, 0}, {1, 0}, {1, 0}, {3, 0});
    const double diff = mobius_invariance_check({1.2, 0}, m, {0, 1});
    const cx s = schwarzian_closed_form({1.2, 0}).C / cx(-1, 0);
    CHECK(diff < 1e-5 * (1.0 + std::abs(s)));
  }
  SECTION("z -> 2z composed with g_{0.5} at z = 2i") {
    const auto m = MobiusTransform::normalized({2, 0}, {0, 0}, {0, 0}, {1, 0});
    const double diff = mobius_invariance_check({0.5, 0}, m, {0, 2});
    const cx s = schwarzian_closed_form({0.5, 0}).C / cx(-4, 0);
    CHECK(diff < 1e-5 * (1.0 + std::abs(s)));
  }
  SECTION("random Moebius maps at random safe points") {
    SplitMix64 rng(45);
    for (int i = 0; i < 20; ++i) {
      const cx z = std::polar(rng.uniform(0.7, 1.8), rng.uniform(pi / 4, 3 * pi / 4));
      const cx c = rng.in_disk({1.0, 0.0}, 0.8);
      const auto m = MobiusTransform::normalized({rng.uniform(0.5, 2.0), 0},
                                                 {rng.uniform(-1.0, 1.0), 0},
                                                 {rng.uniform(-0.2, 0.2), 0}, {1, 0});
      const cx s = schwarzian_closed_form(c).C / (z * z);
      REQUIRE(mobius_invariance_check(c, m, z) < 1e-5 * (1.0 + std::abs(s)));
    }
  }
  SECTION("degenerate coefficients are rejected") {
    CHECK_THROWS_AS(MobiusTransform::normalized({1, 0}, {2, 0}, {2, 0}, {4, 0}),
                    std::invalid_argument);
  }
}

TEST_CASE("scale invariance of C dz^2/z^2") {
  CHECK(s_invariance_check({{0.7, 0.1}}, 0.7, {0, 1}) < 1e-15);
  const cx z{1, 1};
  const double rel = s_invariance_check({{0.5, 0}}, 2.0, z) / std::abs(cx(0.5, 0) / (z * z));
  CHECK(rel < 1e-15);
  CHECK(s_invariance_check({{0, 0}}, 1.3, {0.5, 2}) == 0.0);
  CHECK_THROWS_AS(s_invariance_check({{1, 0}}, 1.0, {1, -1}), std::invalid_argument);
}
