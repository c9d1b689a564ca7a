#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rvflow/convergence.hpp"
#include "rvflow/hyperbolic.hpp"
#include "rvflow/io.hpp"
#include "rvflow/model_flow.hpp"
#include "rvflow/oracles.hpp"
#include "rvflow/pairing.hpp"
#include "rvflow/schwarzian.hpp"

// The runtime invariant suites behind `verify`. Every module's documented
// invariants appear here once, keyed as <module>.<n>; the CLI runs them all
// and emits a machine-readable report.

namespace rvflow::verify {

using nlohmann::json;

struct CheckResult {
  std::string check_id;
  bool pass = false;
  std::string expected, got;
  double tolerance = 0;
};

struct VerifyReport {
  std::string suite;
  int n_checks = 0;
  int n_failed = 0;
  std::vector<CheckResult> failures;
};

using CheckFn = std::function<CheckResult(std::uint64_t)>;

struct Check {
  std::string id;
  CheckFn fn;
};

namespace detail {

inline CheckResult bound(const std::string& id, double worst, double threshold) {
  CheckResult r;
  r.check_id = id;
  r.pass = worst <= threshold;
  r.expected = "<= " + io::num17(threshold);
  r.got = io::num17(worst);
  r.tolerance = threshold;
  return r;
}

inline CheckResult at_least(const std::string& id, double value, double threshold) {
  CheckResult r;
  r.check_id = id;
  r.pass = value >= threshold;
  r.expected = ">= " + io::num17(threshold);
  r.got = io::num17(value);
  r.tolerance = threshold;
  return r;
}

}  // namespace detail

inline std::vector<Check> model_flow_checks() {
  using namespace model_flow;
  return {
      {"model_flow.1",  // field equals c (F_L - F_ell) on the closed disk
       [](std::uint64_t seed) {
         SplitMix64 rng(seed);
         double worst = 0;
         for (int i = 0; i < 1000; ++i) {
           const cx c = rng.in_disk({1.0, 0.0}, 1.0);
           const cx rhs = c * (pairing_functionals::F_L(c) -
                               cx(pairing_functionals::F_ell(c), 0));
           worst = std::max(worst, std::abs(eval_v(c) - rhs));
         }
         return detail::bound("model_flow.1", worst, 1e-12);
       }},
      {"model_flow.2",  // no spurious zeros on a wide grid
       [](std::uint64_t) {
         GridSpec grid{Rect{-3, 4, -3, 3}, 400, 400};
         double min_off = std::numeric_limits<double>::infinity();
         const std::array<cx, 4> zeros{cx(-1, 0), cx(0, 0), cx(1, 0), cx(2, 0)};
         for (int i = 0; i < grid.nx; ++i)
           for (int j = 0; j < grid.ny; ++j) {
             const cx z = grid.point(i, j);
             bool near = false;
             for (cx p : zeros) near = near || std::abs(z - p) < 0.1;
             if (!near) min_off = std::min(min_off, std::abs(eval_v(z)));
           }
         return detail::at_least("model_flow.2", min_off, 1e-3);
       }},
      {"model_flow.3",  // tangency of v along |z-1| = 1
       [](std::uint64_t) {
         double worst = 0;
         for (int k = 0; k < 10000; ++k)
           worst = std::max(worst, std::abs(circle_decompose(2 * pi * k / 10000.0).radial));
         return detail::bound("model_flow.3", worst, 1e-12);
       }},
      {"model_flow.4",  // horizontal speed nonnegative, vanishing only at 0, pi
       [](std::uint64_t) {
         double worst = 0;
         for (int k = 0; k < 10000; ++k) {
           const double theta = 2 * pi * k / 10000.0;
           const auto d = circle_decompose(theta);
           worst = std::max(worst, -d.horizontal);
           worst = std::max(worst,
                            std::abs(d.horizontal - circle_horizontal_formula(theta)));
           const double off = std::min({theta, std::abs(theta - pi), 2 * pi - theta});
           if (off > 1e-2 && d.horizontal <= 1e-12) worst = std::max(worst, 1.0);
         }
         return detail::bound("model_flow.4", worst, 1e-12);
       }},
      {"model_flow.5",  // analytic derivatives vs central differences
       [](std::uint64_t seed) {
         SplitMix64 rng(seed);
         double worst = 0;
         for (int i = 0; i < 100; ++i) {
           const cx z = rng.in_rect({-2.5, 3.5, -2.5, 2.5});
           const auto a = wirtinger_derivatives(z);
           const auto o = oracles::fd_wirtinger(z);
           const auto ja = real_jacobian(z);
           const auto jo = oracles::fd_jacobian(z);
           const double scale = 1.0 + std::abs(o.dz) + std::abs(o.dzbar);
           worst = std::max({worst, std::abs(a.dz - o.dz) / scale,
                             std::abs(a.dzbar - o.dzbar) / scale,
                             std::abs(ja.a - jo.a) / scale, std::abs(ja.b - jo.b) / scale,
                             std::abs(ja.c - jo.c) / scale, std::abs(ja.d - jo.d) / scale});
         }
         return detail::bound("model_flow.5", worst, 1e-6);
       }},
      {"model_flow.6",  // RK4 global order between dt = 1e-2 and 5e-3
       [](std::uint64_t) {
         auto run = [](double dt) {
           ode::IntegratorConfig cfg;
           cfg.method = ode::Method::RK4_FIXED;
           cfg.dt = dt;
           cfg.t_max = 5.0;
           return integrate({1.3, 0.2}, cfg).final_z();
         };
         const cx ref = run(1e-4);
         const double order = std::log2(std::abs(run(1e-2) - ref) / std::abs(run(5e-3) - ref));
         return detail::at_least("model_flow.6", order, 3.8);
       }},
  };
}

inline std::vector<Check> schwarzian_lab_checks() {
  using namespace schwarzian_lab;
  return {
      {"schwarzian_lab.1",  // disk = strip = empirical injectivity
       [](std::uint64_t seed) {
         SplitMix64 rng(seed);
         int disagreements = 0;
         for (int i = 0; i < 1000; ++i) {
           cx c;
           for (;;) {
             c = 1.0 + std::polar(rng.uniform(0.0, 2.0), rng.uniform(0.0, 2 * pi));
             if (c.real() < 0.05) continue;
             if (std::abs(std::abs(c - 1.0) - 1.0) <= 0.05) continue;
             if (std::abs(c - 1.0) > 1.0) {
               const double phi = 2 * pi * c.real() / std::norm(c);
               const double lam = 2 * pi * c.imag() / std::norm(c);
               if (phi > 2.55 || std::abs(lam) > 1.35) continue;  // wrap outside region
             }
             break;
           }
           const bool disk = univalence_criterion(c);
           const bool strip = strip_intersection_length(c) <= 2 * pi;
           const bool empirical = empirical_injectivity(c, 300, seed * 1000 + i, 0.05);
           if (disk != strip || disk != empirical) ++disagreements;
         }
         return detail::bound("schwarzian_lab.1", disagreements, 0);
       }},
      {"schwarzian_lab.2",  // S(g_c) z^2 constant in z, numeric route
       [](std::uint64_t seed) {
         SplitMix64 rng(seed);
         double worst = 0;
         for (int trial = 0; trial < 5; ++trial) {
           const cx c = rng.in_disk({1.0, 0.0}, 0.9);
           const cx ref = schwarzian_closed_form(c).C;
           for (int i = 0; i < 10; ++i) {
             const cx z = std::polar(rng.uniform(0.5, 2.0), rng.uniform(pi / 6, 5 * pi / 6));
             const cx val = schwarzian_numeric(PowerMap{c}, z, 1e-3 * std::abs(z)) * z * z;
             worst = std::max(worst, std::abs(val - ref) / std::max(1e-8, std::abs(ref)));
           }
         }
         return detail::bound("schwarzian_lab.2", worst, 1e-4);
       }},
      {"schwarzian_lab.3",  // branch-cut safety over the upper half-plane
       [](std::uint64_t) {
         double bad = 0;
         for (double th : {0.01, 0.3, pi / 2, 2.5, pi - 0.01})
           for (double rho : {0.2, 1.0, 3.0}) {
             const PowerMap g{{1.4, -0.6}};
             const cx z = std::polar(rho, th);
             if (!is_finite(g(z)) || !is_finite(schwarzian_analytic(g, z))) bad += 1;
           }
         return detail::bound("schwarzian_lab.3", bad, 0);
       }},
  };
}

inline std::vector<Check> pairing_functionals_checks() {
  using namespace pairing_functionals;
  return {
      {"pairing_functionals.1",  // quadrature vs closed form
       [](std::uint64_t seed) {
         SplitMix64 rng(seed);
         double worst = 0;
         for (int i = 0; i < 20; ++i) {
           const cx c = rng.in_disk({1.0, 0.0}, 1.0);
           for (double s : {0.5, 1.0, 2.0}) {
             const cx got = pair_strip(c, {s}).value;
             const cx want = pair_strip_closed_form(c, s);
             worst = std::max(worst, std::abs(got - want) / std::max(1e-6, std::abs(want)));
           }
         }
         return detail::bound("pairing_functionals.1", worst, 1e-8);
       }},
      {"pairing_functionals.2",  // scaling law in the annulus modulus
       [](std::uint64_t seed) {
         SplitMix64 rng(seed);
         double worst = 0;
         for (int i = 0; i < 8; ++i) {
           const cx c = rng.in_disk({1.0, 0.0}, 1.0);
           const double s = rng.uniform(0.2, 1.1);
           const cx base = pair_strip(c, {s}).value;
           for (int k : {2, 3, 5}) {
             const cx scaled = pair_strip(c, {k * s}).value;
             worst = std::max(worst, std::abs(scaled - double(k) * base) /
                                         (std::abs(double(k) * base) + 1e-6));
           }
         }
         return detail::bound("pairing_functionals.2", worst, 1e-10);
       }},
      {"pairing_functionals.3",  // dc identity against the functionals
       [](std::uint64_t seed) {
         SplitMix64 rng(seed);
         double worst = 0;
         for (int i = 0; i < 1000; ++i) {
           const cx c = rng.in_disk({1.0, 0.0}, 1.0);
           worst = std::max(worst,
                            std::abs(dc_limit(c) - c * (F_L(c) - cx(F_ell(c), 0))));
         }
         return detail::bound("pairing_functionals.3", worst, 1e-12);
       }},
      {"pairing_functionals.4",  // growth-with-stationary-ratio mechanism
       [](std::uint64_t) {
         double worst = std::abs(F_ell({2, 0}) - 1.5);
         worst = std::max(worst, std::abs(dc_limit({2, 0})));
         const cx diff0 = F_L({0, 0}) - cx(F_ell({0, 0}), 0);
         worst = std::max(worst, std::abs(diff0 - cx(0.5, 0)));
         return detail::bound("pairing_functionals.4", worst, 0);
       }},
      {"pairing_functionals.5",  // Bers region is the disk |c-1| <= 1
       [](std::uint64_t seed) {
         SplitMix64 rng(seed);
         int disagreements = 0;
         for (int i = 0; i < 10000; ++i) {
           LengthPair pair;
           pair.ell = rng.uniform(0.05, 3.0);
           pair.L = {rng.uniform(0.01, 4.0), rng.uniform(-3.0, 3.0)};
           const auto verdict = bers_region(pair);
           const bool in_disk = std::abs(verdict.c - 1.0) <= 1.0;
           if (verdict.satisfies != in_disk) {
             const double gap = std::abs(std::norm(verdict.c) - 2.0 * verdict.c.real());
             if (gap > 1e-14 * std::max(1.0, std::norm(verdict.c))) ++disagreements;
           }
         }
         return detail::bound("pairing_functionals.5", disagreements, 0);
       }},
  };
}

inline std::vector<Check> hyperbolic_estimates_checks() {
  using namespace hyperbolic_estimates;
  return {
      {"hyperbolic_estimates.1",  // disk area: quadrature, closed form, ceilings
       [](std::uint64_t) {
         double worst = 0;  // each leg's deviation normalized by its own tolerance
         for (int k = 1; k <= 7; ++k) {
           const double r = 0.1 * k;
           const double quad = quotient_disk_area_exact(r);
           const double closed = quotient_disk_area_closed_form(r);
           const double ceiling = 4 * pi * r * r / ((1 - r * r) * (1 - r * r));
           const double via_sinh = quotient_disk_area_bound(std::log(1.0 / r));
           worst = std::max(worst, (std::abs(quad - closed) / closed) / 1e-4);
           worst = std::max(worst, (std::abs(via_sinh - ceiling) / ceiling) / 1e-12);
           if (quad > ceiling) worst = std::max(worst, 2.0);
         }
         return detail::bound("hyperbolic_estimates.1", worst, 1.0);
       }},
      {"hyperbolic_estimates.2",  // visual area: bound and exact ratio
       [](std::uint64_t) {
         double worst = 0;
         for (int k = 0; k <= 60; ++k) {
           const double d = k == 0 ? 0.0 : std::exp(-4.0 + 7.0 * (k - 1) / 59.0);
           const double area = visual_area_exact(d);
           if (area < pi * std::exp(-2 * d) * (1 - 1e-15)) worst = std::max(worst, 1.0);
           const double ratio = area / (pi * std::exp(-2 * d));
           worst = std::max(worst, std::abs(ratio - 4.0 / (1.0 + std::exp(-2 * d))) / 4.0);
         }
         return detail::bound("hyperbolic_estimates.2", worst, 1e-12);
       }},
      {"hyperbolic_estimates.3",  // Lambert relation is an involution
       [](std::uint64_t) {
         double worst = 0;
         for (int k = 1; k <= 40; ++k) {
           const double d = 0.08 * k;
           worst = std::max(worst,
                            std::abs(lambert_quadrilateral(lambert_quadrilateral(d)) - d));
         }
         return detail::bound("hyperbolic_estimates.3", worst, 1e-12);
       }},
      {"hyperbolic_estimates.4",  // displacement vs matrix-action oracle
       [](std::uint64_t seed) {
         SplitMix64 rng(seed);
         double worst = 0;
         for (int i = 0; i < 1000; ++i) {
           const LoxodromicCyclicGroup g{rng.uniform(0.2, 2.5), rng.uniform(-pi, pi)};
           const long long n = (long long)std::floor(rng.uniform(-8.0, 9.0));
           const double r = rng.uniform(0.0, 1.5);
           worst = std::max(worst, std::abs(loxodromic_displacement(g, n, r) -
                                            oracles::displacement_matrix_oracle(g, n, r)));
         }
         return detail::bound("hyperbolic_estimates.4", worst, 1e-9);
       }},
      {"hyperbolic_estimates.5",  // on-axis series: coth(t) and the 8 coth^2 bound
       [](std::uint64_t) {
         double worst = 0;
         for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
           const double p = poincare_series_cyclic({t, 0.4}, 0.0, 1e-14);
           worst = std::max(worst, std::abs(p - 1.0 / std::tanh(t)));
           const double ch = 1.0 / std::tanh(t / 2);
           if (p > 8 * ch * ch) worst = std::max(worst, 1.0);
         }
         return detail::bound("hyperbolic_estimates.5", worst, 1e-10);
       }},
      {"hyperbolic_estimates.6",  // series decreases in the translation length
       [](std::uint64_t) {
         double prev = std::numeric_limits<double>::infinity(), worst = -1.0;
         for (double t = 0.25; t <= 4.01; t += 0.25) {
           const double p = poincare_series_cyclic({t, 0.0}, 0.0, 1e-14);
           worst = std::max(worst, p - prev);
           prev = p;
         }
         return detail::bound("hyperbolic_estimates.6", worst, 0);
       }},
      {"hyperbolic_estimates.7",  // neighborhood volume vs Simpson quadrature
       [](std::uint64_t seed) {
         SplitMix64 rng(seed);
         double worst = 0;
         for (int i = 0; i < 100; ++i) {
           CoreNeighborhoodSpec spec{rng.uniform(0.0, 6.0), rng.uniform(0.0, 10.0),
                                     rng.uniform(0.0, 3.0)};
           const double closed = neighborhood_volume(spec);
           const double numeric = oracles::simpson(
               [&](double t) {
                 return neighborhood_boundary_area(
                     {spec.chi_abs, spec.bending_length, t});
               },
               0.0, spec.offset, 1e-12);
           worst = std::max(worst, std::abs(numeric - closed) / (closed + 1e-4));
         }
         return detail::bound("hyperbolic_estimates.7", worst, 1e-8);
       }},
  };
}

inline std::vector<Check> convergence_bounds_checks() {
  using namespace convergence_bounds;
  return {
      {"convergence_bounds.1",  // banach certificates are true bounds
       [](std::uint64_t seed) {
         SplitMix64 rng(seed);
         double worst = 0;
         for (int i = 0; i < 100; ++i) {
           const cx fixed = rng.in_rect({-2, 2, -2, 2});
           const cx lambda = std::polar(rng.uniform(0.05, 0.9), rng.uniform(0.0, 2 * pi));
           ContractionSpec<cx> spec;
           spec.factor = std::abs(lambda);
           spec.map = [=](const cx& z) { return fixed + lambda * (z - fixed); };
           spec.metric = [](const cx& a, const cx& b) { return std::abs(a - b); };
           spec.sample = [=](SplitMix64& r) { return r.in_disk(fixed, 3.0); };
           BanachOptions opts;
           opts.seed = seed + i;
           const auto res =
               banach_iterate(spec, fixed + rng.in_disk({0, 0}, 2.0), 1e-9, opts);
           worst = std::max(worst,
                            std::abs(res.fixed_point - fixed) - res.certified_radius);
         }
         return detail::bound("convergence_bounds.1", worst, 0);
       }},
      {"convergence_bounds.2",  // Ahlfors-Weill monotone and convex
       [](std::uint64_t) {
         const int n = 200;
         std::vector<double> vals;
         for (int k = 0; k < n; ++k) vals.push_back(ahlfors_weill_bound(0.4999 * k / (n - 1)));
         double worst = 0;
         for (int k = 1; k < n; ++k) worst = std::max(worst, vals[k - 1] - vals[k]);
         for (int k = 1; k + 1 < n; ++k)
           worst = std::max(worst, (vals[k] - vals[k - 1]) - (vals[k + 1] - vals[k]) - 1e-12);
         return detail::bound("convergence_bounds.2", worst, 0);
       }},
      {"convergence_bounds.3",  // chained tail bound decreases to zero
       [](std::uint64_t) {
         double prev = std::numeric_limits<double>::infinity(), worst = 0;
         for (int k = 2; k <= 20; ++k) {
           const double b = chained_tail_bound(std::pow(2.0, -k), 0.5);
           worst = std::max(worst, b - prev);
           prev = b;
         }
         if (prev > 1e-5) worst = std::max(worst, prev);
         return detail::bound("convergence_bounds.3", worst, 0);
       }},
  };
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "convergence_bounds", "hyperbolic_estimates", "model_flow", "pairing_functionals",
      "schwarzian_lab"};  // report order is fixed by name
  return names;
}

inline std::vector<Check> suite_checks(const std::string& module) {
  if (module == "model_flow") return model_flow_checks();
  if (module == "schwarzian_lab") return schwarzian_lab_checks();
  if (module == "pairing_functionals") return pairing_functionals_checks();
  if (module == "hyperbolic_estimates") return hyperbolic_estimates_checks();
  if (module == "convergence_bounds") return convergence_bounds_checks();
  throw std::invalid_argument("unknown verify suite: " + module);
}

inline VerifyReport run_suite(const std::string& module, std::uint64_t seed) {
  VerifyReport report;
  report.suite = module;
  for (const auto& check : suite_checks(module)) {
    ++report.n_checks;
    CheckResult res;
    try {
      res = check.fn(seed);
    } catch (const std::exception& e) {
      res.check_id = check.id;
      res.pass = false;
      res.expected = "no exception";
      res.got = e.what();
    }
    if (!res.pass) {
      ++report.n_failed;
      report.failures.push_back(res);
    }
  }
  return report;
}

inline json report_json(const VerifyReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures)
    failures.push_back({{"check_id", f.check_id},
                        {"expected", f.expected},
                        {"got", f.got},
                        {"tolerance", f.tolerance}});
  return json{{"suite", r.suite},
              {"n_checks", r.n_checks},
              {"n_failed", r.n_failed},
              {"failures", failures}};
}

}  // namespace rvflow::verify
