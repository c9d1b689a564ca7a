#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "rvflow/core.hpp"

namespace rvflow::quadrature {

/// Gauss-Legendre nodes/weights on [-1, 1], computed once per order by Newton
/// iteration on the Legendre recurrence.
struct GaussRule {
  std::vector<double> nodes, weights;
};

inline GaussRule gauss_legendre(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

inline const GaussRule& rule8() {
  static const GaussRule r = gauss_legendre(8);
  return r;
}
inline const GaussRule& rule16() {
  static const GaussRule r = gauss_legendre(16);
  return r;
}

struct QuadConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_evals = 2'000'000;
};

/// Value, error estimate and evaluation count of a quadrature run.
struct QuadOutcome {
  cx value{0.0, 0.0};
  double est_error = 0;
  std::size_t n_evals = 0;
};

/// Deterministic pairwise tree reduction; the panel sum is independent of how
/// many panels there are relative to machine ordering effects.
inline cx pairwise_sum(std::vector<cx> v) {
  if (v.empty()) return {0.0, 0.0};
  while (v.size() > 1) {
    std::size_t half = (v.size() + 1) / 2;
    for (std::size_t i = 0; i + half < v.size(); ++i) v[i] += v[i + half];
    v.resize(half);
  }
  return v[0];
}

template <class F>
cx fixed_gauss_1d(const F& f, double a, double b, const GaussRule& g, std::size_t& n_evals) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  cx acc{0.0, 0.0};
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    acc += g.weights[i] * cx(f(mid + half * g.nodes[i]));
  n_evals += g.nodes.size();
  return half * acc;
}

/// Adaptive 1D integration: compare GL8 vs GL16 per panel, bisect the worst
/// panel until the summed estimate meets tolerance. Panels are accumulated in
/// creation order and reduced pairwise.
template <class F>
QuadOutcome integrate_1d(const F& f, double a, double b, const QuadConfig& cfg = {},
                         const std::vector<double>& initial_splits = {}) {
  struct Panel {
    double a, b;
    cx value;
    double err;
  };
  QuadOutcome out;
  std::vector<Panel> panels;
  auto make_panel = [&](double pa, double pb) {
    const cx coarse = fixed_gauss_1d(f, pa, pb, rule8(), out.n_evals);
    const cx fine = fixed_gauss_1d(f, pa, pb, rule16(), out.n_evals);
    panels.push_back(Panel{pa, pb, fine, std::abs(fine - coarse)});
  };

  std::vector<double> cuts{a};
  for (double s : initial_splits)
    if (s > a && s < b) cuts.push_back(s);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) make_panel(cuts[i], cuts[i + 1]);

  while (true) {
    std::vector<cx> vals;
    vals.reserve(panels.size());
    double err = 0;
    for (const auto& p : panels) {
      vals.push_back(p.value);
      err += p.err;
    }
    out.value = pairwise_sum(std::move(vals));
    out.est_error = err;
    const double goal = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
    if (err <= goal || out.n_evals >= cfg.max_evals) break;
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const Panel& x, const Panel& y) { return x.err < y.err; });
    const Panel w = *worst;
    panels.erase(worst);
    const double mid = 0.5 * (w.a + w.b);
    make_panel(w.a, mid);
    make_panel(mid, w.b);
  }
  return out;
}

/// Adaptive 2D tensor-product integration over a rectangle. Each panel is
/// estimated with an 8x8 vs 16x16 Gauss tensor pair; the worst panel is split
/// across its longer side. initial_splits_y lets callers pre-refine toward
/// known steep zones (e.g. the strip-model density near y = 0 and y = pi).
template <class F>
QuadOutcome integrate_2d(const F& f, const Rect& box, const QuadConfig& cfg = {},
                         const std::vector<double>& initial_splits_y = {}) {
  struct Panel {
    Rect r;
    cx value;
    double err;
  };
  QuadOutcome out;

  auto tensor = [&](const Rect& r, const GaussRule& g) {
    const double mx = 0.5 * (r.x0 + r.x1), hx = 0.5 * (r.x1 - r.x0);
    const double my = 0.5 * (r.y0 + r.y1), hy = 0.5 * (r.y1 - r.y0);
    cx acc{0.0, 0.0};
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      cx row{0.0, 0.0};
      const double x = mx + hx * g.nodes[i];
      for (std::size_t j = 0; j < g.nodes.size(); ++j)
        row += g.weights[j] * cx(f(x, my + hy * g.nodes[j]));
      acc += g.weights[i] * row;
    }
    out.n_evals += g.nodes.size() * g.nodes.size();
    return hx * hy * acc;
  };

  std::vector<Panel> panels;
  auto make_panel = [&](const Rect& r) {
    const cx coarse = tensor(r, rule8());
    const cx fine = tensor(r, rule16());
    panels.push_back(Panel{r, fine, std::abs(fine - coarse)});
  };

  std::vector<double> ycuts{box.y0};
  for (double s : initial_splits_y)
    if (s > box.y0 && s < box.y1) ycuts.push_back(s);
  ycuts.push_back(box.y1);
  std::sort(ycuts.begin(), ycuts.end());
  for (std::size_t j = 0; j + 1 < ycuts.size(); ++j)
    make_panel(Rect{box.x0, box.x1, ycuts[j], ycuts[j + 1]});

  while (true) {
    std::vector<cx> vals;
    vals.reserve(panels.size());
    double err = 0;
    for (const auto& p : panels) {
      vals.push_back(p.value);
      err += p.err;
    }
    out.value = pairwise_sum(std::move(vals));
    out.est_error = err;
    const double goal = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
    if (err <= goal || out.n_evals >= cfg.max_evals) break;
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const Panel& x, const Panel& y) { return x.err < y.err; });
    const Panel w = *worst;
    panels.erase(worst);
    if (w.r.width() >= w.r.height()) {
      const double mx = 0.5 * (w.r.x0 + w.r.x1);
      make_panel(Rect{w.r.x0, mx, w.r.y0, w.r.y1});
      make_panel(Rect{mx, w.r.x1, w.r.y0, w.r.y1});
    } else {
      const double my = 0.5 * (w.r.y0 + w.r.y1);
      make_panel(Rect{w.r.x0, w.r.x1, w.r.y0, my});
      make_panel(Rect{w.r.x0, w.r.x1, my, w.r.y1});
    }
  }
  return out;
}

}  // namespace rvflow::quadrature
