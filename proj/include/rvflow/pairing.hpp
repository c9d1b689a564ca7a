#pragma once

#include "rvflow/core.hpp"
#include "rvflow/quadrature.hpp"
#include "rvflow/schwarzian.hpp"

namespace rvflow::pairing_functionals {

/// Quotient annulus of the upper half-plane under z -> e^s z, realized in the
/// strip model {0 < Im w < pi} with fundamental domain [0, s] x (0, pi) and
/// hyperbolic density 1/sin^2(Im w).
struct AnnulusSpec {
  double s = 1.0;
  void validate() const {
    if (!(s > 0)) throw std::invalid_argument("AnnulusSpec: s must be > 0");
  }
};

/// Boundary geodesic length paired with the complex length upstairs.
struct LengthPair {
  double ell = 1.0;
  cx L{1.0, 0.0};
  void validate() const {
    if (!(ell > 0) || !(L.real() > 0))
      throw std::invalid_argument("LengthPair: need ell > 0 and Re L > 0");
  }
};

struct PairingResult {
  cx value{0.0, 0.0};
  double est_error = 0;
  std::size_t n_evals = 0;
};

/// Harmonic Beltrami coefficient of C dz^2/z^2 in strip coordinates:
/// mu(w) = sin^2(Im w) * conj(-C). For C = (1 - c^2)/2 this is
/// sin^2(y) (cbar^2 - 1)/2.
inline cx beltrami_strip(cx c, double y) {
  const cx cb = std::conj(c);
  const double s = std::sin(y);
  return s * s * (cb * cb - 1.0) / 2.0;
}

/// Pairing of the harmonic Beltrami differential of (1-c^2)/2 dz^2/z^2
/// against dz^2/z^2 over one fundamental domain of the annulus, computed by
/// adaptive Gauss quadrature in the strip model (where dz^2/z^2 is the
/// constant differential dw^2). Closed form: s pi (cbar^2 - 1)/4.
inline PairingResult pair_strip(cx c, const AnnulusSpec& annulus,
                                quadrature::QuadConfig cfg = {}) {
  annulus.validate();
  require_finite(c, "pair_strip");
  auto f = [&](double, double y) { return beltrami_strip(c, y); };
  const Rect dom{0.0, annulus.s, 0.0, pi};
  const auto q = quadrature::integrate_2d(f, dom, cfg, {pi / 8, pi / 2, 7 * pi / 8});
  const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(q.value));
  if (q.est_error > tol) throw error(errc::quadrature_not_converged, "pair_strip");
  return {q.value, q.est_error, q.n_evals};
}

inline cx pair_strip_closed_form(cx c, double s) {
  const cx cb = std::conj(c);
  return s * pi * (cb * cb - 1.0) / 4.0;
}

/// Boundary-length log-derivative functional at the limit:
/// F_ell(c) = (Re(c^2) - 1)/2. Equals (2/pi) Re pair_strip(c, s=1).
inline double F_ell(cx c) {
  require_finite(c, "F_ell");
  return ((c * c).real() - 1.0) / 2.0;
}

/// Complex-length log-derivative functional at the limit:
/// F_L(c) = c (cbar^2 - 1)/4.
inline cx F_L(cx c) {
  require_finite(c, "F_L");
  const cx cb = std::conj(c);
  return c * (cb * cb - 1.0) / 4.0;
}

/// Limit of the derivative of the length ratio:
/// dc(c) = (|c|^4 - 2 c Re(c^2) - c^2 + 2c)/4. Identically equal to
/// c (F_L(c) - F_ell(c)) and to the model vector field.
inline cx dc_limit(cx c) {
  require_finite(c, "dc_limit");
  const double m2 = std::norm(c);
  const cx c2 = c * c;
  return 0.25 * (cx(m2 * m2) - 2.0 * c * c2.real() - c2 + 2.0 * c);
}

/// Pre-limit pairing against the numerically pulled-back differential
/// (g_c)^*(dz^2/z^2), normalized by pi L = pi c s. The pullback coefficient
/// is evaluated through the power map and a finite-difference derivative, so
/// this is an independent route that must land on F_L(c).
inline PairingResult pair_strip_pullback(cx c, const AnnulusSpec& annulus,
                                         quadrature::QuadConfig cfg = {}) {
  annulus.validate();
  require_finite(c, "pair_strip_pullback");
  if (std::abs(c) < 1e-12)
    throw error(errc::out_of_domain, "pair_strip_pullback: c = 0 has no complex length");
  const schwarzian_lab::PowerMap g{c};
  auto f = [&](double x, double y) -> cx {
    const cx w{x, y};
    const cx z = std::exp(w);  // strip -> upper half-plane
    const cx gp = schwarzian_lab::stencil_derivative(g, z, 1e-4 * std::abs(z));
    const cx gz = g(z);
    const cx pullback = (gp * gp) / (gz * gz) * (z * z);  // coefficient in strip coords
    return beltrami_strip(c, y) * pullback;
  };
  const Rect dom{0.0, annulus.s, 0.0, pi};
  auto local = cfg;
  local.rel_tol = std::max(cfg.rel_tol, 1e-9);
  const auto q = quadrature::integrate_2d(f, dom, local, {pi / 8, pi / 2, 7 * pi / 8});
  const double norm = pi * std::abs(c) * annulus.s;
  return {q.value / (pi * c * annulus.s), q.est_error / norm, q.n_evals};
}

struct BersVerdict {
  bool satisfies = false;
  cx c{0.0, 0.0};
};

/// Bers-inequality region: satisfies = [1/ell <= 2 Re L / |L|^2], reported
/// with the ratio c = L/ell. Algebraically equivalent to |c - 1| <= 1.
inline BersVerdict bers_region(const LengthPair& pair) {
  pair.validate();
  const double lhs = 1.0 / pair.ell;
  const double rhs = 2.0 * pair.L.real() / std::norm(pair.L);
  return {lhs <= rhs, pair.L / pair.ell};
}

/// Optional sanity predicate Re L <= 2 ell. Offered for callers that want to
/// screen inputs; nothing in this module enforces it.
inline bool real_length_dominated(const LengthPair& pair) {
  pair.validate();
  return pair.L.real() <= 2.0 * pair.ell;
}

/// Certified ceiling eta * Re L for the auxiliary pairing term under the
/// smallness hypotheses (checking those hypotheses is the caller's concern).
inline double aux_term_bound(double eta, double ReL) {
  if (!(eta > 0) || !(ReL >= 0))
    throw std::invalid_argument("aux_term_bound: need eta > 0 and Re L >= 0");
  return eta * ReL;
}

}  // namespace rvflow::pairing_functionals
