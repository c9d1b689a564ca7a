#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rvflow/core.hpp"

namespace rvflow::ode {

enum class Method { RK4_FIXED, RK45_ADAPTIVE };

enum class TerminalStatus { CONVERGED, MAX_TIME, DIVERGED };

inline const char* status_name(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::CONVERGED: return "CONVERGED";
    case TerminalStatus::MAX_TIME: return "MAX_TIME";
    case TerminalStatus::DIVERGED: return "DIVERGED";
  }
  return "UNKNOWN";
}

struct IntegratorConfig {
  Method method = Method::RK45_ADAPTIVE;
  double dt = 1e-2;        // fixed step size (RK4_FIXED)
  double abs_tol = 1e-9;   // adaptive error control
  double rel_tol = 1e-9;
  double t_max = 200.0;
  double convergence_radius = 1e-7;
  double divergence_radius = 50.0;

  void validate() const {
    if (!(dt > 0) || !(abs_tol > 0) || !(rel_tol > 0) || !(t_max > 0) ||
        !(convergence_radius > 0) || !(divergence_radius > 0))
      throw std::invalid_argument("IntegratorConfig: tolerances, radii and t_max must be > 0");
  }
};

struct Sample {
  double t;
  cx z;
};

struct StepStats {
  double min_dt = 0, max_dt = 0;
  std::size_t n_steps = 0;
};

/// Sampled solution path of z' = f(t, z). Sample times are strictly
/// increasing and start at t = 0.
struct Trajectory {
  std::vector<Sample> samples;
  std::string integrator_id;
  StepStats step_stats;
  TerminalStatus terminal_status = TerminalStatus::MAX_TIME;

  cx final_z() const { return samples.back().z; }
  double final_t() const { return samples.back().t; }
};

namespace detail {

template <class F>
cx rk4_step(const F& f, double t, cx z, double h) {
  const cx k1 = f(t, z);
  const cx k2 = f(t + 0.5 * h, z + 0.5 * h * k1);
  const cx k3 = f(t + 0.5 * h, z + 0.5 * h * k2);
  const cx k4 = f(t + h, z + h * k3);
  return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Dormand-Prince 5(4) pair.
template <class F>
void rk45_step(const F& f, double t, cx z, double h, cx& z5, double& err_est) {
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const cx k1 = f(t, z);
  const cx k2 = f(t + h / 5, z + h * (a21 * k1));
  const cx k3 = f(t + 3 * h / 10, z + h * (a31 * k1 + a32 * k2));
  const cx k4 = f(t + 4 * h / 5, z + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const cx k5 = f(t + 8 * h / 9, z + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const cx k6 = f(t + h, z + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  z5 = z + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const cx k7 = f(t + h, z5);
  const cx err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  err_est = std::abs(err);
}

}  // namespace detail

/// Integrates z' = f(t, z) from z0 over [0, t_max]. stop(z) -> true ends the
/// run with CONVERGED; |z| > divergence_radius ends it with DIVERGED.
template <class F>
Trajectory solve(const F& f, cx z0, const IntegratorConfig& cfg,
                 const std::function<bool(cx)>& stop = {}) {
  cfg.validate();
  require_finite(z0, "ode::solve");

  Trajectory traj;
  traj.integrator_id = cfg.method == Method::RK4_FIXED ? "rk4" : "rk45-dopri";
  traj.samples.push_back({0.0, z0});

  double t = 0.0;
  cx z = z0;
  double h = cfg.method == Method::RK4_FIXED ? cfg.dt : std::min(1e-3, cfg.t_max);
  double min_dt = std::numeric_limits<double>::infinity(), max_dt = 0;
  std::size_t n_steps = 0;

  auto record = [&](double tn, cx zn, double used) {
    traj.samples.push_back({tn, zn});
    min_dt = std::min(min_dt, used);
    max_dt = std::max(max_dt, used);
    ++n_steps;
  };

  auto check_terminal = [&](cx zn) -> std::optional<TerminalStatus> {
    if (std::abs(zn) > cfg.divergence_radius || !is_finite(zn)) return TerminalStatus::DIVERGED;
    if (stop && stop(zn)) return TerminalStatus::CONVERGED;
    return std::nullopt;
  };

  traj.terminal_status = TerminalStatus::MAX_TIME;
  if (auto st = check_terminal(z0)) {
    traj.terminal_status = *st;
    traj.step_stats = {0, 0, 0};
    return traj;
  }

  if (cfg.method == Method::RK4_FIXED) {
    while (t < cfg.t_max) {
      const double step = std::min(h, cfg.t_max - t);
      z = detail::rk4_step(f, t, z, step);
      t += step;
      record(t, z, step);
      if (auto st = check_terminal(z)) {
        traj.terminal_status = *st;
        break;
      }
    }
  } else {
    const double h_min = 1e-12;
    while (t < cfg.t_max) {
      h = std::min(h, cfg.t_max - t);
      cx z_next;
      double err;
      detail::rk45_step(f, t, z, h, z_next, err);
      const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(z), std::abs(z_next));
      const double ratio = err / scale;
      if (ratio <= 1.0 || h <= h_min) {
        t += h;
        z = z_next;
        record(t, z, h);
        if (auto st = check_terminal(z)) {
          traj.terminal_status = *st;
          break;
        }
      }
      const double factor =
          ratio > 0 ? std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0) : 5.0;
      h = std::max(h * factor, h_min);
    }
  }

  traj.step_stats = {n_steps ? min_dt : 0.0, max_dt, n_steps};
  return traj;
}

}  // namespace rvflow::ode
