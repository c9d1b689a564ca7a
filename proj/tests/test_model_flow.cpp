#include <catch2/catch.hpp>

#include "rvflow/model_flow.hpp"
#include "rvflow/oracles.hpp"
#include "rvflow/rng.hpp"

using namespace rvflow;
using namespace rvflow::model_flow;

namespace {
const IntegratorConfig default_cfg{};  // rk45, tol 1e-9, t_max 200, conv 1e-7, div 50
}

TEST_CASE("eval_v vanishes exactly at -1, 0, 1, 2") {
  CHECK(std::abs(eval_v({0, 0})) == 0.0);
  CHECK(std::abs(eval_v({1, 0})) == 0.0);
  CHECK(std::abs(eval_v({2, 0})) == 0.0);
  CHECK(std::abs(eval_v({-1, 0})) == 0.0);
}

TEST_CASE("eval_v matches hand-expanded values") {
  // v(1+i) = 3/2: |z|^4 = 4, Re z^2 = 0, z^2 = 2i -> (4 - 2i + 2 + 2i)/4.
  const cx v = eval_v({1, 1});
  CHECK(v.real() == Approx(1.5).margin(1e-14));
  CHECK(v.imag() == Approx(0.0).margin(1e-14));
  // v(1/2) = (0.0625 - 0.25 - 0.25 + 1)/4 = 0.140625.
  CHECK(eval_v({0.5, 0}).real() == Approx(0.140625).margin(1e-15));
  CHECK(eval_v({0.5, 0}).imag() == 0.0);
}

TEST_CASE("eval_v rejects non-finite input") {
  CHECK_THROWS_AS(eval_v({std::numeric_limits<double>::quiet_NaN(), 0}), std::invalid_argument);
}

TEST_CASE("no zeros besides the four on a wide grid") {
  const std::array<cx, 4> zeros{cx(-1, 0), cx(0, 0), cx(1, 0), cx(2, 0)};
  GridSpec grid{Rect{-3, 4, -3, 3}, 400, 400};
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j) {
      const cx z = grid.point(i, j);
      bool near_zero = false;
      for (cx p : zeros) near_zero = near_zero || std::abs(z - p) < 0.1;
      if (!near_zero) REQUIRE(std::abs(eval_v(z)) > 1e-3);
    }
}

TEST_CASE("wirtinger derivatives agree with central differences") {
  SECTION("frozen values at the zeros") {
    auto w1 = wirtinger_derivatives({1, 0});
    CHECK(std::abs(w1.dz - cx(-0.5, 0)) < 1e-14);
    CHECK(std::abs(w1.dzbar) < 1e-14);
    auto w0 = wirtinger_derivatives({0, 0});
    CHECK(std::abs(w0.dz - cx(0.5, 0)) < 1e-14);
    CHECK(std::abs(w0.dzbar) < 1e-14);
    auto w2 = wirtinger_derivatives({2, 0});
    CHECK(std::abs(w2.dz - cx(-0.5, 0)) < 1e-14);
    CHECK(std::abs(w2.dzbar - cx(2, 0)) < 1e-14);
  }
  SECTION("random points vs oracle, relative 1e-6") {
    SplitMix64 rng(2024);
    for (int i = 0; i < 100; ++i) {
      const cx z = rng.in_rect({-2.5, 3.5, -2.5, 2.5});
      const auto a = wirtinger_derivatives(z);
      const auto o = oracles::fd_wirtinger(z);
      const double scale = 1.0 + std::abs(o.dz) + std::abs(o.dzbar);
      REQUIRE(std::abs(a.dz - o.dz) / scale < 1e-6);
      REQUIRE(std::abs(a.dzbar - o.dzbar) / scale < 1e-6);
    }
  }
}

TEST_CASE("real jacobian matches finite differences and frozen diagonals") {
  auto j2 = real_jacobian({2, 0});
  CHECK(j2.a == Approx(1.5).margin(1e-12));
  CHECK(j2.d == Approx(-2.5).margin(1e-12));
  CHECK(std::abs(j2.b) < 1e-12);
  CHECK(std::abs(j2.c) < 1e-12);
  auto j1 = real_jacobian({1, 0});
  CHECK(j1.a == Approx(-0.5).margin(1e-12));
  CHECK(j1.d == Approx(-0.5).margin(1e-12));
  auto jm1 = real_jacobian({-1, 0});
  CHECK(jm1.a == Approx(-1.5).margin(1e-12));
  CHECK(jm1.d == Approx(0.5).margin(1e-12));

  SplitMix64 rng(77);
  for (int i = 0; i < 100; ++i) {
    const cx z = rng.in_rect({-2, 3, -2, 2});
    const Mat2 a = real_jacobian(z);
    const Mat2 o = oracles::fd_jacobian(z);
    const double scale = 1.0 + std::abs(o.a) + std::abs(o.b) + std::abs(o.c) + std::abs(o.d);
    REQUIRE(std::abs(a.a - o.a) / scale < 1e-6);
    REQUIRE(std::abs(a.b - o.b) / scale < 1e-6);
    REQUIRE(std::abs(a.c - o.c) / scale < 1e-6);
    REQUIRE(std::abs(a.d - o.d) / scale < 1e-6);
  }

  // trace/determinant identities of the realification
  for (cx z : {cx(0.3, 0.7), cx(-1.2, 0.4), cx(2.1, -0.9)}) {
    const auto w = wirtinger_derivatives(z);
    const Mat2 j = real_jacobian(z);
    CHECK(j.trace() == Approx(2.0 * w.dz.real()).margin(1e-12));
    CHECK(j.det() == Approx(std::norm(w.dz) - std::norm(w.dzbar)).margin(1e-12));
  }
}

TEST_CASE("classification of the four zeros") {
  const auto r1 = classify_fixed_point({1, 0});
  CHECK(r1.cls == StabilityClass::STABLE);
  CHECK(r1.eigenvalues[0].real() == Approx(-0.5).margin(1e-12));
  CHECK(r1.eigenvalues[1].real() == Approx(-0.5).margin(1e-12));

  const auto r0 = classify_fixed_point({0, 0});
  CHECK(r0.cls == StabilityClass::UNSTABLE);
  CHECK(r0.eigenvalues[0].real() == Approx(0.5).margin(1e-12));

  const auto r2 = classify_fixed_point({2, 0});
  CHECK(r2.cls == StabilityClass::SADDLE);
  CHECK(r2.eigenvalues[0].real() == Approx(1.5).margin(1e-12));
  CHECK(r2.eigenvalues[1].real() == Approx(-2.5).margin(1e-12));

  const auto rm = classify_fixed_point({-1, 0});
  CHECK(rm.cls == StabilityClass::SADDLE);

  CHECK_THROWS_AS(classify_fixed_point({0.5, 0}), error);
}

TEST_CASE("find_fixed_points") {
  SECTION("wide box finds exactly the four zeros") {
    const auto reports = find_fixed_points({-2, 3, -2, 2}, 40);
    REQUIRE(reports.size() == 4);
    const double expected[] = {-1, 0, 1, 2};
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(reports[i].location - expected[i]) < 1e-10);
      CHECK(std::abs(reports[i].location.imag()) < 1e-10);
    }
    CHECK(reports[0].cls == StabilityClass::SADDLE);
    CHECK(reports[1].cls == StabilityClass::UNSTABLE);
    CHECK(reports[2].cls == StabilityClass::STABLE);
    CHECK(reports[3].cls == StabilityClass::SADDLE);
  }
  SECTION("tight box isolates z = 1") {
    const auto reports = find_fixed_points({0.5, 1.5, -0.5, 0.5}, 10);
    REQUIRE(reports.size() == 1);
    CHECK(std::abs(reports[0].location - 1.0) < 1e-10);
  }
  SECTION("far box has no zeros") {
    CHECK(find_fixed_points({5, 6, 5, 6}, 10).empty());
  }
  SECTION("grid_n below 8 is rejected") {
    CHECK_THROWS_AS(find_fixed_points({0, 1, 0, 1}, 4), std::invalid_argument);
  }
}

TEST_CASE("integrate") {
  SECTION("fixed point stays put") {
    auto traj = integrate({1, 0}, default_cfg, cx(1, 0));
    CHECK(traj.terminal_status == ode::TerminalStatus::CONVERGED);
    CHECK(std::abs(traj.final_z() - 1.0) < 1e-7);
  }
  SECTION("interior start converges to 1") {
    auto traj = integrate({0.3, 0.2}, default_cfg, cx(1, 0));
    CHECK(traj.terminal_status == ode::TerminalStatus::CONVERGED);
    CHECK(std::abs(traj.final_z() - 1.0) < 1e-6);
  }
  SECTION("sample times strictly increase from 0") {
    auto traj = integrate({0.4, 0.3}, default_cfg, cx(1, 0));
    REQUIRE(!traj.samples.empty());
    CHECK(traj.samples.front().t == 0.0);
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
      REQUIRE(traj.samples[i].t > traj.samples[i - 1].t);
  }
  SECTION("outward real start diverges") {
    auto traj = integrate({2.5, 0.0}, default_cfg);
    CHECK(traj.terminal_status == ode::TerminalStatus::DIVERGED);
  }
  SECTION("circle orbit from near z=0 rides the circle to 2") {
    IntegratorConfig cfg;
    cfg.method = ode::Method::RK4_FIXED;
    cfg.dt = 1e-3;
    cfg.t_max = 20.0;
    const cx z0 = 1.0 + std::polar(1.0, pi - 1e-3);
    auto traj = ode::solve([](double, cx z) { return eval_v(z); }, z0, cfg);
    for (const auto& s : traj.samples) REQUIRE(std::abs(std::abs(s.z - 1.0) - 1.0) < 1e-6);
    CHECK(std::abs(traj.final_z() - 2.0) < 0.05);
  }
  SECTION("on-circle start near 2 approaches 2") {
    IntegratorConfig cfg;
    cfg.method = ode::Method::RK4_FIXED;
    cfg.dt = 1e-3;
    cfg.t_max = 10.0;
    const cx z0 = 1.0 + std::polar(1.0, 0.1);
    auto traj = ode::solve([](double, cx z) { return eval_v(z); }, z0, cfg);
    for (const auto& s : traj.samples) REQUIRE(std::abs(std::abs(s.z - 1.0) - 1.0) < 1e-6);
    CHECK(std::abs(traj.final_z() - 2.0) < 1e-3);
  }
}

TEST_CASE("RK4 order of accuracy is at least 3.8") {
  auto run = [](double dt) {
    IntegratorConfig cfg;
    cfg.method = ode::Method::RK4_FIXED;
    cfg.dt = dt;
    cfg.t_max = 5.0;
    return integrate({1.3, 0.2}, cfg).final_z();
  };
  const cx ref = run(1e-4);
  const double e1 = std::abs(run(1e-2) - ref);
  const double e2 = std::abs(run(5e-3) - ref);
  REQUIRE(e2 > 0);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 3.8);
}

TEST_CASE("circle decomposition") {
  SECTION("frozen angles") {
    const auto mid = circle_decompose(pi / 2);
    CHECK(std::abs(mid.radial) < 1e-12);
    CHECK(mid.horizontal == Approx(1.5).margin(1e-12));
    CHECK(std::abs(circle_decompose(0.0).horizontal) < 1e-12);
    CHECK(std::abs(circle_decompose(pi).horizontal) < 1e-12);
  }
  SECTION("tangency and the closed-form speed on a fine grid") {
    for (int k = 0; k < 10000; ++k) {
      const double theta = 2.0 * pi * k / 10000.0;
      const auto d = circle_decompose(theta);
      REQUIRE(std::abs(d.radial) < 1e-12);
      REQUIRE(std::abs(d.horizontal - circle_horizontal_formula(theta)) < 1e-12);
    }
  }
  SECTION("horizontal speed is nonnegative, vanishing only at 0 and pi") {
    for (int k = 0; k < 2000; ++k) {
      const double theta = 2.0 * pi * k / 2000.0;
      const double h = circle_horizontal_formula(theta);
      REQUIRE(h >= 0.0);
      const double dist = std::min({std::abs(theta), std::abs(theta - pi),
                                    std::abs(theta - 2 * pi)});
      if (dist > 1e-2) REQUIRE(h > 1e-12);
    }
  }
}

TEST_CASE("basin sampling") {
  IntegratorConfig cfg;
  cfg.convergence_radius = 1e-6;

  SECTION("disk interior is the basin of 1") {
    GridSpec grid{Rect{0.2, 1.8, -0.8, 0.8}, 9, 9};
    const auto raster = basin_sample(grid, cfg);
    for (int i = 0; i < grid.nx; ++i)
      for (int j = 0; j < grid.ny; ++j) {
        const cx z = grid.point(i, j);
        if (std::abs(z - 1.0) <= 0.9) REQUIRE(raster.at(i, j) == BasinLabel::TO_ONE);
      }
  }
  SECTION("the fixed point itself is labeled 1") {
    CHECK(terminal_fate({1.0, 0.0}, cfg) == BasinLabel::TO_ONE);
  }
  SECTION("points clearly outside the disk do not reach 1") {
    for (cx z : {cx(0.5, 1.3), cx(1.5, -1.3), cx(1.0, 1.2)}) {
      REQUIRE(std::abs(z - 1.0) >= 1.1);
      CHECK(terminal_fate(z, cfg) != BasinLabel::TO_ONE);
    }
  }
  SECTION("raster is deterministic and scheduling independent") {
    GridSpec grid{Rect{0.4, 1.6, -0.5, 0.5}, 6, 6};
    const auto a = basin_sample(grid, cfg, 1);
    const auto b = basin_sample(grid, cfg, 4);
    REQUIRE(a.labels == b.labels);
  }
  SECTION("degenerate resolution is rejected") {
    CHECK_THROWS_AS(basin_sample(GridSpec{Rect{0, 1, 0, 1}, 1, 5}, cfg), std::invalid_argument);
  }
}

TEST_CASE("perturbed integration") {
  IntegratorConfig cfg;
  cfg.method = ode::Method::RK4_FIXED;
  cfg.dt = 0.01;
  cfg.t_max = 40.0;

  SECTION("decaying noise still accumulates at the attractor") {
    auto traj = perturbed_integrate({1.2, 0.1}, [](double t) { return std::exp(-t); }, 123, cfg);
    const auto tail = tail_accumulation(traj);
    CHECK(std::abs(tail.mean - 1.0) < 1e-4);
    CHECK(tail.diameter < 1e-4);
  }
  SECTION("zero noise reproduces the plain integration") {
    auto plain = ode::solve([](double, cx z) { return eval_v(z); }, {0.7, 0.2}, cfg);
    auto noisy = perturbed_integrate({0.7, 0.2}, [](double) { return 0.0; }, 5, cfg);
    REQUIRE(plain.samples.size() == noisy.samples.size());
    for (std::size_t i = 0; i < plain.samples.size(); ++i) {
      REQUIRE(plain.samples[i].t == noisy.samples[i].t);
      REQUIRE(plain.samples[i].z == noisy.samples[i].z);
    }
  }
  SECTION("start at the fixed point, seed 7") {
    auto traj = perturbed_integrate({1.0, 0.0}, [](double t) { return std::exp(-t); }, 7, cfg);
    const auto tail = tail_accumulation(traj);
    CHECK(std::abs(tail.mean - 1.0) < 1e-3);
  }
  SECTION("growing amplitude is rejected") {
    CHECK_THROWS_AS(
        perturbed_integrate({1.0, 0.0}, [](double t) { return t; }, 0, cfg),
        std::invalid_argument);
  }
  SECTION("same seed, same trajectory; different seed, different noise") {
    auto a = perturbed_integrate({1.3, 0.2}, [](double t) { return std::exp(-t); }, 11, cfg);
    auto b = perturbed_integrate({1.3, 0.2}, [](double t) { return std::exp(-t); }, 11, cfg);
    auto c = perturbed_integrate({1.3, 0.2}, [](double t) { return std::exp(-t); }, 12, cfg);
    REQUIRE(a.samples.size() == b.samples.size());
    bool all_equal = true;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
      all_equal = all_equal && a.samples[i].z == b.samples[i].z;
    CHECK(all_equal);
    bool differs = false;
    for (std::size_t i = 0; i < std::min(a.samples.size(), c.samples.size()); ++i)
      differs = differs || a.samples[i].z != c.samples[i].z;
    CHECK(differs);
  }
}
