#pragma once

#include <cstdint>

#include "rvflow/core.hpp"
#include "rvflow/quadrature.hpp"

namespace rvflow::hyperbolic_estimates {

/// Margulis tube data: complex length L of the core geodesic, Margulis
/// parameter epsilon, tube radius R.
struct TubeSpec {
  cx L{0.1, 0.0};
  double epsilon = 0.1;
  double R = 1.0;

  void validate() const {
    if (!(L.real() > 0) || !(epsilon > 0) || !(R >= 0))
      throw std::invalid_argument("TubeSpec: need Re L > 0, epsilon > 0, R >= 0");
  }
  /// Boundary-torus area consistency pi sinh(2R) Re L >= pi epsilon^2.
  bool consistent() const {
    return pi * std::sinh(2.0 * R) * L.real() >= pi * epsilon * epsilon;
  }
};

/// Half-space in upper half-space, named by its boundary disk in the plane.
struct HalfSpaceSpec {
  cx center{0.0, 0.0};
  double radius = 1.0;
  void validate() const {
    if (!(radius > 0)) throw std::invalid_argument("HalfSpaceSpec: radius must be > 0");
  }
};

/// Half-space at distance d from the axis with endpoints +-1, in the
/// concentric normalization: boundary disk of radius e^{-d} about 0. This is
/// the configuration in which the disk-area ceiling becomes an equality of
/// forms, pi/sinh^2(d) = 4 pi r^2/(1-r^2)^2.
inline HalfSpaceSpec concentric_halfspace(double d) {
  if (!(d > 0)) throw std::invalid_argument("concentric_halfspace: need d > 0");
  return {cx(0.0, 0.0), std::exp(-d)};
}

/// Cyclic group generated by z -> e^{t + i theta} z acting on upper
/// half-space; t is the translation length along the vertical axis.
struct LoxodromicCyclicGroup {
  double t = 1.0;
  double theta = 0.0;
  void validate() const {
    if (!(t > 0)) throw std::invalid_argument("LoxodromicCyclicGroup: t must be > 0");
  }
};

/// Inputs of the convex-core neighborhood growth formulas.
struct CoreNeighborhoodSpec {
  double chi_abs = 2.0;         // |chi(boundary)|
  double bending_length = 0.0;  // length of the bending lamination
  double offset = 0.0;          // neighborhood offset t
  void validate() const {
    if (!(chi_abs >= 0) || !(bending_length >= 0) || !(offset >= 0))
      throw std::invalid_argument("CoreNeighborhoodSpec: all fields must be >= 0");
  }
};

/// Tube boundary area pi sinh(2R) Re L.
inline double tube_boundary_area(double R, double ReL) {
  if (!(R >= 0) || !(ReL > 0))
    throw std::invalid_argument("tube_boundary_area: need R >= 0, Re L > 0");
  return pi * std::sinh(2.0 * R) * ReL;
}

/// Lower bound epsilon^2 / sinh(2R) for Re L (hence |L|) of a geodesic whose
/// epsilon-tube has radius R.
inline double min_length_bound(double epsilon, double R) {
  if (!(epsilon > 0) || !(R > 0))
    throw std::invalid_argument("min_length_bound: need epsilon > 0, R > 0");
  return epsilon * epsilon / std::sinh(2.0 * R);
}

/// Area of the disk |z| < r in the quotient-cylinder metric
/// 4 |dz|^2 / |z^2 - 1|^2 (axis endpoints at +-1), by adaptive polar
/// quadrature. Closed form: 4 pi r^2 / (1 - r^2)^2 = pi / sinh^2(log(1/r)).
inline double quotient_disk_area_exact(double r, quadrature::QuadConfig cfg = {}) {
  if (!(r > 0) || r > 0.9)
    throw std::invalid_argument("quotient_disk_area_exact: need 0 < r <= 0.9");
  auto f = [](double rho, double th) {
    const double r2 = rho * rho;
    return 4.0 * rho / (r2 * r2 - 2.0 * r2 * std::cos(2.0 * th) + 1.0);
  };
  // Integrand steepens toward the rim; pre-split the radial axis there.
  const auto q = quadrature::integrate_2d([&](double th, double rho) { return f(rho, th); },
                                          Rect{0.0, 2.0 * pi, 0.0, r}, cfg,
                                          {0.5 * r, 0.8 * r, 0.95 * r});
  const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(q.value));
  if (q.est_error > tol) throw error(errc::quadrature_not_converged, "quotient_disk_area_exact");
  return q.value.real();
}

/// Exact value of the disk integral, 4 pi atanh(r^2); the quadrature must
/// land on this. The sup-form ceiling 4 pi r^2/(1-r^2)^2 (integrand maximum
/// times Euclidean area) always dominates it.
inline double quotient_disk_area_closed_form(double r) {
  if (!(r > 0) || !(r < 1))
    throw std::invalid_argument("quotient_disk_area_closed_form: need 0 < r < 1");
  return 4.0 * pi * std::atanh(r * r);
}

/// Area ceiling pi / sinh^2(d) for the boundary disk of a half-space at
/// distance d from the axis. Equals 4 pi r^2/(1-r^2)^2 under r = e^{-d}.
inline double quotient_disk_area_bound(double d) {
  if (!(d > 0)) throw std::invalid_argument("quotient_disk_area_bound: need d > 0");
  const double s = std::sinh(d);
  return pi / (s * s);
}

/// Visual area 2 pi (1 - tanh d) of a half-space seen from distance d;
/// always >= pi e^{-2d}, with ratio 4 / (1 + e^{-2d}). Evaluated as
/// 4 pi e^{-2d} / (1 + e^{-2d}) so large d keeps full relative precision.
inline double visual_area_exact(double d) {
  if (!(d >= 0)) throw std::invalid_argument("visual_area_exact: need d >= 0");
  const double q = std::exp(-2.0 * d);
  return 4.0 * pi * q / (1.0 + q);
}

/// Certified distance ceiling log(2 coth epsilon) from a boundary point of a
/// convex set to the half-space below an epsilon ball's projection preimage.
inline double projection_halfspace_distance_bound(double epsilon) {
  if (!(epsilon > 0))
    throw std::invalid_argument("projection_halfspace_distance_bound: need epsilon > 0");
  return std::log(2.0 / std::tanh(epsilon));
}

/// Dual side of a Lambert quadrilateral: sinh(d1) sinh(d2) = 1, so
/// d2 = asinh(1/sinh d1). Involutive.
inline double lambert_quadrilateral(double d1) {
  if (!(d1 > 0)) throw std::invalid_argument("lambert_quadrilateral: need d1 > 0");
  return std::asinh(1.0 / std::sinh(d1));
}

inline constexpr double log_1_plus_sqrt2 = 0.88137358701954302523;  // log(1 + sqrt 2)
inline constexpr double shadow_radius_floor = 0.88137358701954302523 + 1.41421356237309504880;

/// Distance from the core axis to the half-space shadowing a thin-part strip:
/// R_eps3 + ell(u) - log(1 + sqrt 2), valid under the tube-radius hypothesis
/// R_eps3 >= log(1 + sqrt 2) + sqrt 2; always >= log(sqrt 2).
inline double halfspace_shadow_distance(double R_eps3, double ell_u) {
  if (!(R_eps3 >= shadow_radius_floor))
    throw error(errc::hypothesis_violated,
                "halfspace_shadow_distance: R_eps3 below log(1+sqrt2)+sqrt2");
  if (!(ell_u >= 0))
    throw std::invalid_argument("halfspace_shadow_distance: need ell_u >= 0");
  return R_eps3 + ell_u - log_1_plus_sqrt2;
}

/// Strip-shadow area ceiling 16 pi e^{-2 d} with d = halfspace_shadow_distance.
/// Uses sinh t >= e^t/4 for t >= log(sqrt 2), so it dominates pi/sinh^2(d).
inline double shadow_area_bound(double R_eps3, double ell_u) {
  const double d = halfspace_shadow_distance(R_eps3, ell_u);
  return 16.0 * pi * std::exp(-2.0 * d);
}

/// Displacement of a point at distance r from the axis under the n-th power:
/// cosh d = cosh^2(r) cosh(n t) - sinh^2(r) cos(n theta). The acosh argument
/// is clamped at 1 to absorb rounding at n = 0 or r = 0.
inline double loxodromic_displacement(const LoxodromicCyclicGroup& g, long long n, double r) {
  g.validate();
  if (!(r >= 0)) throw std::invalid_argument("loxodromic_displacement: need r >= 0");
  if (n == 0) return 0.0;  // cosh^2 - sinh^2 rounding would otherwise leak through acosh
  const double ch = std::cosh(r), sh = std::sinh(r);
  const double arg =
      ch * ch * std::cosh(double(n) * g.t) - sh * sh * std::cos(double(n) * g.theta);
  return std::acosh(std::max(1.0, arg));
}

/// Poincare series sum over n in Z of e^{-2 d(x, g^n x)} at distance r from
/// the axis, truncated once the geometric tail bound (from d(n) >= |n| t)
/// drops below tail_tol. On the axis this is exactly coth(t).
inline double poincare_series_cyclic(const LoxodromicCyclicGroup& g, double r,
                                     double tail_tol = 1e-12) {
  g.validate();
  if (!(tail_tol > 0)) throw std::invalid_argument("poincare_series_cyclic: tail_tol > 0");
  const double q = std::exp(-2.0 * g.t);
  const double N_real = std::ceil(std::log(2.0 / (tail_tol * (1.0 - q))) / (2.0 * g.t));
  const long long N = std::max<long long>(1, (long long)N_real);
  double sum = 1.0;  // n = 0
  for (long long n = N; n >= 1; --n)
    sum += 2.0 * std::exp(-2.0 * loxodromic_displacement(g, n, r));
  return sum;
}

/// Orthogeodesic exponential-sum ceiling N e^{2D} P from the Poincare series
/// bound P, multiplicity N and thick-part diameter D.
inline double orthosum_bound(long long N, double D, double P) {
  if (!(N >= 1) || !(D >= 0) || !(P >= 0))
    throw std::invalid_argument("orthosum_bound: need N >= 1, D >= 0, P >= 0");
  return double(N) * std::exp(2.0 * D) * P;
}

/// Area of the boundary of the t-neighborhood of the convex core:
/// A_t = 2 pi |chi| cosh^2 t + L(beta) sinh t cosh t.
inline double neighborhood_boundary_area(const CoreNeighborhoodSpec& spec) {
  spec.validate();
  const double t = spec.offset;
  return 2.0 * pi * spec.chi_abs * std::cosh(t) * std::cosh(t) +
         spec.bending_length * std::sinh(t) * std::cosh(t);
}

/// Volume grown between the core and its epsilon-neighborhood, the integral
/// of A_t: 2 pi |chi| (eps/2 + sinh(2 eps)/4) + L(beta) sinh^2(eps)/2.
inline double neighborhood_volume(const CoreNeighborhoodSpec& spec) {
  spec.validate();
  const double e = spec.offset;
  return 2.0 * pi * spec.chi_abs * (e / 2.0 + std::sinh(2.0 * e) / 4.0) +
         spec.bending_length * std::sinh(e) * std::sinh(e) / 2.0;
}

/// Bending lamination length ceiling (A + B/delta) |chi|, with A, B supplied
/// by the caller (only existence of the universal constants is known).
inline double bending_length_bound(double chi_abs, double delta, double A, double B) {
  if (!(delta > 0) || !(chi_abs >= 0))
    throw std::invalid_argument("bending_length_bound: need delta > 0, chi >= 0");
  return (A + B / delta) * chi_abs;
}

}  // namespace rvflow::hyperbolic_estimates
