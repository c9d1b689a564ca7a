#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <vector>

#include "rvflow/core.hpp"
#include "rvflow/rng.hpp"

namespace rvflow::schwarzian_lab {

/// Power map on the upper half-plane with principal logarithm (branch cut on
/// the non-positive reals):
///   g_c(z) = exp(c Log z) / exp(c Log i)   for c != 0,
///   g_0(z) = Log z.
struct PowerMap {
  cx c{1.0, 0.0};

  bool is_log() const { return c == cx(0.0, 0.0); }

  cx operator()(cx z) const {
    if (is_log()) return std::log(z);
    return std::exp(c * std::log(z) - c * std::log(cx(0.0, 1.0)));
  }

  /// Analytic derivatives, e.g. g' = c z^{c-1} / i^c.
  cx d1(cx z) const {
    if (is_log()) return 1.0 / z;
    return c * std::exp((c - 1.0) * std::log(z) - c * std::log(cx(0.0, 1.0)));
  }
  cx d2(cx z) const {
    if (is_log()) return -1.0 / (z * z);
    return c * (c - 1.0) * std::exp((c - 2.0) * std::log(z) - c * std::log(cx(0.0, 1.0)));
  }
  cx d3(cx z) const {
    if (is_log()) return 2.0 / (z * z * z);
    return c * (c - 1.0) * (c - 2.0) *
           std::exp((c - 3.0) * std::log(z) - c * std::log(cx(0.0, 1.0)));
  }
};

/// Coefficient C of the quadratic differential C dz^2/z^2.
struct QuadDiffCoefficient {
  cx C{0.0, 0.0};
};

/// Schwarzian of the power map family: S(g_c) = (1 - c^2)/2 * dz^2/z^2.
inline QuadDiffCoefficient schwarzian_closed_form(cx c) {
  require_finite(c, "schwarzian_closed_form");
  return {(1.0 - c * c) / 2.0};
}

/// Moebius transformation z -> (az + b)/(cz + d), kept normalized to
/// determinant 1 (within 1e-12).
struct MobiusTransform {
  cx a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};

  static MobiusTransform normalized(cx a, cx b, cx c, cx d) {
    const cx det = a * d - b * c;
    if (std::abs(det) < 1e-14)
      throw std::invalid_argument("MobiusTransform: singular coefficients");
    const cx s = std::sqrt(det);
    MobiusTransform m{a / s, b / s, c / s, d / s};
    if (std::abs(m.a * m.d - m.b * m.c - 1.0) >= 1e-12)
      throw std::invalid_argument("MobiusTransform: normalization failed");
    return m;
  }

  static MobiusTransform identity() { return {}; }

  cx operator()(cx z) const { return (a * z + b) / (c * z + d); }
};

namespace detail {

/// 7-point horizontal central stencils for the first three derivatives of a
/// holomorphic function (orders 6, 6 and 4).
template <class F>
std::array<cx, 3> stencil_d123(const F& f, cx z, double h) {
  if (!(h > 0) || !std::isfinite(h))
    throw std::invalid_argument("stencil: h must be positive and finite");
  std::array<cx, 7> v;  // f(z + k h), k = -3..3
  for (int k = -3; k <= 3; ++k) {
    const cx p = z + double(k) * h;
    if (!(p.imag() > 0.0))
      throw error(errc::stencil_out_of_domain, "stencil leaves the upper half-plane");
    v[k + 3] = f(p);
    if (!is_finite(v[k + 3]))
      throw error(errc::stencil_out_of_domain, "non-finite map value on stencil");
  }
  const cx d1 = (-v[0] + 9.0 * v[1] - 45.0 * v[2] + 45.0 * v[4] - 9.0 * v[5] + v[6]) / (60.0 * h);
  const cx d2 = (2.0 * v[0] - 27.0 * v[1] + 270.0 * v[2] - 490.0 * v[3] + 270.0 * v[4] -
                 27.0 * v[5] + 2.0 * v[6]) /
                (180.0 * h * h);
  const cx d3 =
      (v[0] - 8.0 * v[1] + 13.0 * v[2] - 13.0 * v[4] + 8.0 * v[5] - v[6]) / (8.0 * h * h * h);
  return {d1, d2, d3};
}

}  // namespace detail

/// First derivative by the 7-point stencil; the finite-difference leg of the
/// pullback quadrature route.
template <class F>
cx stencil_derivative(const F& f, cx z, double h) {
  return detail::stencil_d123(f, z, h)[0];
}

/// Pointwise Schwarzian derivative S(f) = f'''/f' - (3/2)(f''/f')^2 computed
/// from finite differences of the map alone. This is the oracle route; it
/// works for any holomorphic callable on the upper half-plane, including
/// Moebius-composed maps.
template <class F>
cx schwarzian_numeric(const F& f, cx z, double h) {
  require_finite(z, "schwarzian_numeric");
  const auto [d1, d2, d3] = detail::stencil_d123(f, z, h);
  if (std::abs(d1) == 0.0)
    throw error(errc::stencil_out_of_domain, "vanishing derivative on stencil");
  const cx q = d2 / d1;
  return d3 / d1 - 1.5 * q * q;
}

/// Schwarzian of the power map from its analytic derivatives (primary path;
/// the stencil version validates it).
inline cx schwarzian_analytic(const PowerMap& g, cx z) {
  if (!(z.imag() > 0)) throw error(errc::stencil_out_of_domain, "Im z must be > 0");
  const cx d1 = g.d1(z), d2 = g.d2(z), d3 = g.d3(z);
  const cx q = d2 / d1;
  return d3 / d1 - 1.5 * q * q;
}

/// The univalence disk: g_c is injective on the upper half-plane if and only
/// if |c - 1| <= 1 (closed disk; boundary maps are univalent).
inline bool univalence_criterion(cx c) {
  require_finite(c, "univalence_criterion");
  return std::abs(c - 1.0) <= 1.0;
}

/// Length of the intersection of a vertical line with the slanted strip
/// c * {0 < Im w < pi}: |c| pi / cos(arg c) for Re c > 0, infinite otherwise.
/// exp restricted to the strip is injective exactly when this is <= 2 pi,
/// which reproduces the univalence disk.
inline double strip_intersection_length(cx c) {
  require_finite(c, "strip_intersection_length");
  if (!(c.real() > 0)) return std::numeric_limits<double>::infinity();
  return std::abs(c) * pi / std::cos(std::arg(c));
}

/// Fixed sampling region of the Monte-Carlo injectivity check.
inline constexpr Rect injectivity_region{-2.0, 2.0, 0.1, 3.0};

/// Monte-Carlo injectivity check of g_c on injectivity_region. The sample set
/// is n pseudorandom points plus a fixed log-polar lattice, each augmented by
/// its wrap translates z * exp(2 pi i k / c) when those land in the region
/// (two such samples map to the same point, which is what the pair rule
/// detects). Returns false iff two samples at distance > margin map within
/// margin * 1e-3 of each other.
inline bool empirical_injectivity(cx c, int n_samples, std::uint64_t rng_seed, double margin) {
  require_finite(c, "empirical_injectivity");
  if (n_samples < 100)
    throw std::invalid_argument("empirical_injectivity: n_samples must be >= 100");
  if (!(margin > 0)) throw std::invalid_argument("empirical_injectivity: margin must be > 0");

  const PowerMap g{c};
  const Rect& region = injectivity_region;

  struct Sample {
    cx z, image;
  };
  std::vector<Sample> samples;
  samples.reserve(std::size_t(n_samples) * 2 + 1200);

  auto push = [&](cx z) {
    if (!region.contains(z) || !(z.imag() > 0)) return;
    const cx w = g(z);
    if (is_finite(w)) samples.push_back({z, w});
  };

  auto push_with_wraps = [&](cx z) {
    push(z);
    if (!g.is_log() && std::abs(c) > 1e-9) {
      for (int k : {1, -1, 2, -2, 3, -3}) push(z * std::exp(2.0 * pi * cx(0, 1) * double(k) / c));
    }
  };

  // Log-polar lattice on an inner box of the region; any wrap translate the
  // box can host lands next to a lattice point, making detection there
  // deterministic rather than luck-of-the-draw.
  const double lr0 = std::log(0.45), lr1 = std::log(2.0);
  const double th0 = 0.23, th1 = 2.91;
  for (int i = 0; i < 24; ++i)
    for (int j = 0; j < 24; ++j) {
      const double lr = lr0 + (lr1 - lr0) * i / 23.0;
      const double th = th0 + (th1 - th0) * j / 23.0;
      push_with_wraps(std::polar(std::exp(lr), th));
    }

  SplitMix64 rng(rng_seed);
  for (int i = 0; i < n_samples; ++i) push_with_wraps(rng.in_rect(region));

  // Pair scan: sort by Re(image); images closer than the threshold are also
  // close in the sort key, so a sliding window sees every candidate pair.
  const double image_tol = margin * 1e-3;
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return samples[x].image.real() < samples[y].image.real();
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Sample& si = samples[order[i]];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const Sample& sj = samples[order[j]];
      if (sj.image.real() - si.image.real() > image_tol) break;
      if (std::abs(si.image - sj.image) < image_tol && std::abs(si.z - sj.z) > margin)
        return false;
    }
  }
  return true;
}

/// |S(m o g_c)(z) - S(g_c)(z)| by the numeric route; analytically zero since
/// the Schwarzian kills post-composed Moebius maps.
inline double mobius_invariance_check(cx c, const MobiusTransform& m, cx z, double h = 1e-3) {
  const PowerMap g{c};
  const cx s_plain = schwarzian_numeric(g, z, h);
  const cx s_composed = schwarzian_numeric([&](cx w) { return m(g(w)); }, z, h);
  return std::abs(s_composed - s_plain);
}

/// |phi(e^s z) e^{2s} - phi(z)| for phi = C/z^2; the differential is
/// invariant under z -> e^s z, so this vanishes identically.
inline double s_invariance_check(QuadDiffCoefficient q, double s, cx z) {
  if (!(z.imag() > 0)) throw std::invalid_argument("s_invariance_check: Im z must be > 0");
  const cx scaled = std::exp(s) * z;
  const cx lhs = q.C / (scaled * scaled) * std::exp(2.0 * s);
  const cx rhs = q.C / (z * z);
  return std::abs(lhs - rhs);
}

}  // namespace rvflow::schwarzian_lab
