#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <future>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "rvflow/core.hpp"
#include "rvflow/ode.hpp"
#include "rvflow/rng.hpp"

namespace rvflow::model_flow {

using ode::IntegratorConfig;
using ode::TerminalStatus;
using ode::Trajectory;

/// The model vector field on the plane,
///   v(z) = (|z|^4 - 2 z Re(z^2) - z^2 + 2z) / 4.
/// Its zeros are exactly -1, 0, 1 and 2; the circle |z - 1| = 1 is invariant
/// and the open disk it bounds is the basin of z = 1.
inline cx eval_v(cx z) {
  require_finite(z, "eval_v");
  const double m2 = std::norm(z);
  const cx z2 = z * z;
  return 0.25 * (cx(m2 * m2) - 2.0 * z * z2.real() - z2 + 2.0 * z);
}

/// Wirtinger derivatives of v:
///   dv/dz    = (2 z zbar^2 - 3 z^2 - zbar^2 - 2z + 2) / 4
///   dv/dzbar = (2 z^2 zbar - 2 z zbar) / 4
struct Wirtinger {
  cx dz, dzbar;
};

inline Wirtinger wirtinger_derivatives(cx z) {
  require_finite(z, "wirtinger_derivatives");
  const cx zb = std::conj(z);
  const cx zb2 = zb * zb;
  const cx dz = 0.25 * (2.0 * z * zb2 - 3.0 * z * z - zb2 - 2.0 * z + 2.0);
  const cx dzbar = 0.25 * (2.0 * z * z * zb - 2.0 * z * zb);
  return {dz, dzbar};
}

/// 2x2 real matrix, row major.
struct Mat2 {
  double a = 0, b = 0, c = 0, d = 0;  // [a b; c d]
  double trace() const { return a + d; }
  double det() const { return a * d - b * c; }
  std::array<cx, 2> eigenvalues() const {
    const double tr = trace(), dt = det();
    const double disc = tr * tr - 4.0 * dt;
    if (disc >= 0) {
      const double s = std::sqrt(disc);
      return {cx((tr + s) / 2, 0), cx((tr - s) / 2, 0)};
    }
    const double s = std::sqrt(-disc) / 2;
    return {cx(tr / 2, s), cx(tr / 2, -s)};
  }
};

/// Realification of the linearization delta -> a*delta + b*conj(delta) with
/// a = dv/dz, b = dv/dzbar.
inline Mat2 real_jacobian(cx z) {
  const auto [a, b] = wirtinger_derivatives(z);
  return Mat2{a.real() + b.real(), -a.imag() + b.imag(),
              a.imag() + b.imag(), a.real() - b.real()};
}

enum class StabilityClass { STABLE, UNSTABLE, SADDLE, NONHYPERBOLIC };

inline const char* stability_name(StabilityClass s) {
  switch (s) {
    case StabilityClass::STABLE: return "STABLE";
    case StabilityClass::UNSTABLE: return "UNSTABLE";
    case StabilityClass::SADDLE: return "SADDLE";
    case StabilityClass::NONHYPERBOLIC: return "NONHYPERBOLIC";
  }
  return "UNKNOWN";
}

struct FixedPointReport {
  cx location;
  cx dz, dzbar;
  Mat2 jacobian;
  std::array<cx, 2> eigenvalues;
  StabilityClass cls = StabilityClass::NONHYPERBOLIC;
};

/// Eigenvalue real parts below this magnitude are treated as zero; all four
/// zeros of v are hyperbolic, so this only guards numerical noise.
inline constexpr double hyperbolicity_threshold = 1e-9;

inline StabilityClass classify_eigenvalues(const std::array<cx, 2>& ev) {
  const double r0 = ev[0].real(), r1 = ev[1].real();
  if (std::abs(r0) < hyperbolicity_threshold || std::abs(r1) < hyperbolicity_threshold)
    return StabilityClass::NONHYPERBOLIC;
  if (r0 < 0 && r1 < 0) return StabilityClass::STABLE;
  if (r0 > 0 && r1 > 0) return StabilityClass::UNSTABLE;
  return StabilityClass::SADDLE;
}

/// Linearization report at a zero of v. Throws NOT_A_ZERO unless |v(z)| < 1e-8.
inline FixedPointReport classify_fixed_point(cx z) {
  if (std::abs(eval_v(z)) >= 1e-8)
    throw error(errc::not_a_zero, "classify_fixed_point: |v(z)| >= 1e-8");
  FixedPointReport rep;
  rep.location = z;
  const auto w = wirtinger_derivatives(z);
  rep.dz = w.dz;
  rep.dzbar = w.dzbar;
  rep.jacobian = real_jacobian(z);
  rep.eigenvalues = rep.jacobian.eigenvalues();
  rep.cls = classify_eigenvalues(rep.eigenvalues);
  return rep;
}

namespace detail {

/// Newton iteration on the real 2D system from a seed; nullopt when the seed
/// does not converge (dropped by the caller, never fatal).
inline std::optional<cx> newton_zero(cx seed) {
  cx z = seed;
  for (int it = 0; it < 80; ++it) {
    const cx v = eval_v(z);
    if (!is_finite(v)) return std::nullopt;
    if (std::abs(v) < 1e-13) return z;
    const Mat2 j = real_jacobian(z);
    const double det = j.det();
    if (std::abs(det) < 1e-14) return std::nullopt;
    const double fx = v.real(), fy = v.imag();
    const double sx = (j.d * fx - j.b * fy) / det;
    const double sy = (-j.c * fx + j.a * fy) / det;
    z -= cx(sx, sy);
    if (std::abs(z) > 1e6) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace detail

/// Newton search seeded on a grid_n x grid_n grid over the box. Zeros are
/// de-duplicated at radius 1e-8, snapped to {-1, 0, 1, 2} when within 1e-6 of
/// an exact value, and only zeros inside the box are reported.
inline std::vector<FixedPointReport> find_fixed_points(const Rect& box, int grid_n) {
  if (grid_n < 8) throw std::invalid_argument("find_fixed_points: grid_n must be >= 8");
  static constexpr std::array<double, 4> exact{-1.0, 0.0, 1.0, 2.0};

  std::vector<cx> zeros;
  GridSpec grid{box, grid_n, grid_n};
  for (int i = 0; i < grid_n; ++i)
    for (int j = 0; j < grid_n; ++j) {
      auto root = detail::newton_zero(grid.point(i, j));
      if (!root) continue;
      cx z = *root;
      for (double e : exact)
        if (std::abs(z - e) < 1e-6) z = cx(e, 0.0);
      if (!box.contains(z)) continue;
      bool dup = false;
      for (cx known : zeros)
        if (std::abs(z - known) < 1e-8) {
          dup = true;
          break;
        }
      if (!dup) zeros.push_back(z);
    }

  std::sort(zeros.begin(), zeros.end(), [](cx a, cx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<FixedPointReport> reports;
  reports.reserve(zeros.size());
  for (cx z : zeros) reports.push_back(classify_fixed_point(z));
  return reports;
}

/// Numerical solution of z' = v(z). CONVERGED means the trajectory entered
/// the convergence radius around `target`.
inline Trajectory integrate(cx z0, const IntegratorConfig& cfg, std::optional<cx> target = {}) {
  std::function<bool(cx)> stop;
  if (target) {
    const cx tgt = *target;
    const double r = cfg.convergence_radius;
    stop = [tgt, r](cx z) { return std::abs(z - tgt) < r; };
  }
  return ode::solve([](double, cx z) { return eval_v(z); }, z0, cfg, stop);
}

/// Decomposition of v along the invariant circle z = 1 + e^{i theta}:
/// radial component (analytically zero) and horizontal component
/// Re v = (1/2) sin^2(theta) (3 + 2 cos(theta)), nonnegative with zeros only
/// at theta in {0, pi}.
struct CircleComponents {
  double radial, horizontal;
};

inline CircleComponents circle_decompose(double theta) {
  const cx u = std::polar(1.0, theta);
  const cx v = eval_v(1.0 + u);
  return {(v * std::conj(u)).real(), v.real()};
}

inline double circle_horizontal_formula(double theta) {
  const double s = std::sin(theta);
  return 0.5 * s * s * (3.0 + 2.0 * std::cos(theta));
}

enum class BasinLabel { TO_MINUS_ONE, TO_ZERO, TO_ONE, TO_TWO, DIVERGED, MAX_TIME };

inline const char* basin_label_name(BasinLabel l) {
  switch (l) {
    case BasinLabel::TO_MINUS_ONE: return "-1";
    case BasinLabel::TO_ZERO: return "0";
    case BasinLabel::TO_ONE: return "1";
    case BasinLabel::TO_TWO: return "2";
    case BasinLabel::DIVERGED: return "DIVERGED";
    case BasinLabel::MAX_TIME: return "MAX_TIME";
  }
  return "?";
}

/// Terminal fate of a single start: integrates until the trajectory enters
/// the convergence radius of one of the four zeros, diverges, or times out.
inline BasinLabel terminal_fate(cx z0, const IntegratorConfig& cfg) {
  static constexpr std::array<double, 4> zeros{-1.0, 0.0, 1.0, 2.0};
  int hit = -1;
  auto stop = [&](cx z) {
    for (int k = 0; k < 4; ++k)
      if (std::abs(z - zeros[k]) < cfg.convergence_radius) {
        hit = k;
        return true;
      }
    return false;
  };
  const Trajectory traj = ode::solve([](double, cx z) { return eval_v(z); }, z0, cfg, stop);
  switch (traj.terminal_status) {
    case TerminalStatus::DIVERGED: return BasinLabel::DIVERGED;
    case TerminalStatus::MAX_TIME: return BasinLabel::MAX_TIME;
    case TerminalStatus::CONVERGED: break;
  }
  switch (hit) {
    case 0: return BasinLabel::TO_MINUS_ONE;
    case 1: return BasinLabel::TO_ZERO;
    case 2: return BasinLabel::TO_ONE;
    default: return BasinLabel::TO_TWO;
  }
}

struct BasinRaster {
  GridSpec grid;
  std::vector<BasinLabel> labels;  // row-major, index = j * nx + i
  BasinLabel at(int i, int j) const { return labels[std::size_t(j) * grid.nx + i]; }
};

/// Labels every grid point by terminal fate. Cells are independent, so the
/// raster is identical no matter how the work is scheduled; n_threads > 1
/// splits the rows across std::async tasks.
inline BasinRaster basin_sample(const GridSpec& grid, const IntegratorConfig& cfg,
                                int n_threads = 1) {
  if (grid.nx < 2 || grid.ny < 2)
    throw std::invalid_argument("basin_sample: resolution must be >= 2 per axis");
  BasinRaster raster{grid, std::vector<BasinLabel>(std::size_t(grid.nx) * grid.ny)};

  auto run_rows = [&](int j0, int j1) {
    for (int j = j0; j < j1; ++j)
      for (int i = 0; i < grid.nx; ++i)
        raster.labels[std::size_t(j) * grid.nx + i] = terminal_fate(grid.point(i, j), cfg);
  };

  if (n_threads <= 1) {
    run_rows(0, grid.ny);
    return raster;
  }
  const int nt = std::min<int>(n_threads, grid.ny);
  std::vector<std::future<void>> tasks;
  for (int k = 0; k < nt; ++k) {
    const int j0 = grid.ny * k / nt, j1 = grid.ny * (k + 1) / nt;
    tasks.push_back(std::async(std::launch::async, run_rows, j0, j1));
  }
  for (auto& t : tasks) t.get();
  return raster;
}

/// Decaying noise amplitude a(t).
using NoiseSchedule = std::function<double(double)>;

/// Unit noise direction at time t: piecewise constant on intervals of length
/// noise_dt, a pure function of (seed, interval index) via splitmix64, so the
/// perturbation is reproducible independent of integrator stepping.
inline cx noise_direction(std::uint64_t seed, double t, double noise_dt) {
  const auto j = static_cast<std::uint64_t>(std::floor(t / noise_dt));
  const double phi = 2.0 * pi * (double(splitmix64_at(seed, j) >> 11) * 0x1.0p-53);
  return {std::cos(phi), std::sin(phi)};
}

/// Integrates z' = v(z) + a(t) u(t) with |u| = 1 pseudorandom and a decaying.
/// With a == 0 the run is identical to integrate() under the same config.
inline Trajectory perturbed_integrate(cx z0, const NoiseSchedule& amplitude, std::uint64_t seed,
                                      const IntegratorConfig& cfg, double noise_dt = 0.05) {
  cfg.validate();
  const double checks[] = {0.0, cfg.t_max / 4, cfg.t_max / 2, cfg.t_max};
  for (std::size_t i = 0; i + 1 < std::size(checks); ++i) {
    const double a0 = amplitude(checks[i]), a1 = amplitude(checks[i + 1]);
    if (!(a1 <= a0) || !(a1 >= 0) || !std::isfinite(a0))
      throw std::invalid_argument("perturbed_integrate: amplitude must decrease to 0");
  }
  auto f = [&](double t, cx z) {
    return eval_v(z) + amplitude(t) * noise_direction(seed, t, noise_dt);
  };
  return ode::solve(f, z0, cfg);
}

/// Mean and diameter of the last 10% of samples; the accumulation-set
/// estimate of a (perturbed) run.
struct TailStats {
  cx mean;
  double diameter = 0;
  std::size_t n_samples = 0;
};

inline TailStats tail_accumulation(const Trajectory& traj) {
  const std::size_t n = traj.samples.size();
  const std::size_t begin = n - std::max<std::size_t>(1, n / 10);
  TailStats stats;
  cx sum{0, 0};
  for (std::size_t i = begin; i < n; ++i) sum += traj.samples[i].z;
  stats.n_samples = n - begin;
  stats.mean = sum / double(stats.n_samples);
  for (std::size_t i = begin; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      stats.diameter = std::max(stats.diameter, std::abs(traj.samples[i].z - traj.samples[j].z));
  return stats;
}

}  // namespace rvflow::model_flow
