#pragma once

#include <functional>

#include "rvflow/core.hpp"
#include "rvflow/rng.hpp"

namespace rvflow::convergence_bounds {

/// Teichmueller-distance ceiling from the Ahlfors-Weill reflection:
/// (1/2) log((1 + 2k)/(1 - 2k)) for a sup-norm k < 1/2.
inline double ahlfors_weill_bound(double k) {
  if (!(k >= 0) || !(k < 0.5))
    throw error(errc::out_of_domain, "ahlfors_weill_bound: need 0 <= k < 1/2");
  return 0.5 * std::log((1.0 + 2.0 * k) / (1.0 - 2.0 * k));
}

/// Distance from a point to the fixed point of a c-contraction, bounded by
/// the first-step distance: d / (1 - c).
inline double contraction_tail_bound(double d_first_step, double c) {
  if (!(d_first_step >= 0) || !(c > 0) || !(c < 1))
    throw std::invalid_argument("contraction_tail_bound: need d >= 0, c in (0,1)");
  return d_first_step / (1.0 - c);
}

/// A self-map of a metric space together with its claimed contraction factor
/// and a point sampler used by the Lipschitz spot-check.
template <class X>
struct ContractionSpec {
  double factor = 0.5;  // claimed Lipschitz constant, in (0, 1)
  std::function<X(const X&)> map;
  std::function<double(const X&, const X&)> metric;
  std::function<X(SplitMix64&)> sample;

  void validate() const {
    if (!(factor > 0) || !(factor < 1))
      throw std::invalid_argument("ContractionSpec: factor must lie in (0, 1)");
    if (!map || !metric || !sample)
      throw std::invalid_argument("ContractionSpec: map, metric and sample are required");
  }
};

template <class X>
struct BanachResult {
  X fixed_point;
  std::size_t n_iters = 0;
  double certified_radius = 0;
};

struct BanachOptions {
  std::size_t max_iters = 100000;
  std::size_t spot_checks = 100;   // random Lipschitz probes before iterating
  double spot_slack = 1.05;        // 5% slack on the claimed factor
  std::uint64_t seed = 0;
};

/// Certified fixed-point iteration. The map is first spot-checked to be
/// factor-Lipschitz on random pairs (a heuristic guard, not a proof); then
/// x -> map(x) runs until the step drops below tol (1 - c), at which point
/// step/(1 - c) bounds the distance to the true fixed point.
template <class X>
BanachResult<X> banach_iterate(const ContractionSpec<X>& spec, X x0, double tol,
                               const BanachOptions& opts = {}) {
  spec.validate();
  if (!(tol > 0)) throw std::invalid_argument("banach_iterate: tol must be > 0");

  SplitMix64 rng(opts.seed);
  for (std::size_t i = 0; i < opts.spot_checks; ++i) {
    const X a = spec.sample(rng);
    const X b = spec.sample(rng);
    const double d = spec.metric(a, b);
    if (d == 0) continue;
    const double dm = spec.metric(spec.map(a), spec.map(b));
    if (dm > spec.factor * opts.spot_slack * d)
      throw error(errc::not_contractive, "banach_iterate: Lipschitz spot-check failed");
  }

  const double c = spec.factor;
  X x = std::move(x0);
  for (std::size_t iter = 0; iter < opts.max_iters; ++iter) {
    X next = spec.map(x);
    const double step = spec.metric(next, x);
    if (step < tol * (1.0 - c))
      return {std::move(next), iter, step / (1.0 - c)};
    x = std::move(next);
  }
  throw error(errc::max_iters, "banach_iterate: no convergence within max_iters");
}

/// Norm data of a harmonic Beltrami differential plus the caller-supplied
/// constant of the sup-norm lemma. wolpert_c defaults to 1, in which case
/// results are shape-correct but not certified; the sup-norm ceiling 3/2 is
/// the Nehari bound for differentials coming from univalent maps.
struct NormBudget {
  double sup_norm = 0;
  double l2_norm = 0;
  double max_log_length_deriv = 0;
  double wolpert_c = 1.0;

  void validate() const {
    if (!(sup_norm >= 0) || !(l2_norm >= 0) || !(max_log_length_deriv >= 0) ||
        !(wolpert_c > 0))
      throw std::invalid_argument("NormBudget: norms must be >= 0 and wolpert_c > 0");
    if (sup_norm > 1.5)
      throw std::invalid_argument("NormBudget: sup_norm exceeds the Nehari ceiling 3/2");
  }
};

/// Sup-norm certificate c ((1/2) max |d log ell(mu)| + ||mu_0||_2).
inline double wolpert_sup_bound(const NormBudget& budget) {
  budget.validate();
  return budget.wolpert_c * (0.5 * budget.max_log_length_deriv + budget.l2_norm);
}

/// The endgame chain: sup-norm -> Ahlfors-Weill distance -> contraction tail.
/// Tends to 0 with the sup norm.
inline double chained_tail_bound(double sup_norm, double contraction_factor) {
  return contraction_tail_bound(ahlfors_weill_bound(sup_norm), contraction_factor);
}

/// Full chain from a norm budget: the Wolpert certificate fed through the
/// reflection bound and the contraction tail. Requires the certificate to
/// land below 1/2 (OUT_OF_DOMAIN otherwise).
inline double chained_tail_from_budget(const NormBudget& budget, double contraction_factor) {
  return chained_tail_bound(wolpert_sup_bound(budget), contraction_factor);
}

}  // namespace rvflow::convergence_bounds
