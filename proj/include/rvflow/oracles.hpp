#pragma once

#include <functional>

#include "rvflow/core.hpp"
#include "rvflow/hyperbolic.hpp"
#include "rvflow/model_flow.hpp"

// Independent reference routes for cross-checking the closed-form paths.
// Everything here deliberately avoids the formulas it is used to validate:
// derivatives come from central differences, the displacement from an
// explicit isometry action, integrals from adaptive Simpson.

namespace rvflow::oracles {

/// Central-difference Wirtinger derivatives of the model field,
/// a = (f_x - i f_y)/2, b = (f_x + i f_y)/2.
inline model_flow::Wirtinger fd_wirtinger(cx z, double h = 1e-5) {
  const cx fx = (model_flow::eval_v(z + h) - model_flow::eval_v(z - h)) / (2.0 * h);
  const cx fy = (model_flow::eval_v(z + cx(0, h)) - model_flow::eval_v(z - cx(0, h))) / (2.0 * h);
  return {(fx - cx(0, 1) * fy) / 2.0, (fx + cx(0, 1) * fy) / 2.0};
}

/// Central-difference Jacobian of the real 2D field (Re v, Im v).
inline model_flow::Mat2 fd_jacobian(cx z, double h = 1e-5) {
  const cx fx = (model_flow::eval_v(z + h) - model_flow::eval_v(z - h)) / (2.0 * h);
  const cx fy = (model_flow::eval_v(z + cx(0, h)) - model_flow::eval_v(z - cx(0, h))) / (2.0 * h);
  return {fx.real(), fy.real(), fx.imag(), fy.imag()};
}

/// Displacement of the point at distance r from the vertical axis under the
/// n-th power of z -> e^{t + i theta} z, computed by moving the point with
/// the isometry in the upper half-space model and applying
/// cosh d = 1 + (|p - q|^2 + (h_p - h_q)^2) / (2 h_p h_q).
inline double displacement_matrix_oracle(const hyperbolic_estimates::LoxodromicCyclicGroup& g,
                                         long long n, double r) {
  const cx p = std::tanh(r);  // boundary-plane coordinate
  const double hp = 1.0 / std::cosh(r);
  const cx factor = std::exp(cx(double(n) * g.t, double(n) * g.theta));
  const cx q = factor * p;
  const double hq = std::exp(double(n) * g.t) * hp;
  const double num = std::norm(p - q) + (hp - hq) * (hp - hq);
  const double ch = 1.0 + num / (2.0 * hp * hq);
  return std::acosh(std::max(1.0, ch));
}

/// Adaptive Simpson quadrature, the oracle for closed-form integrals.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12, int depth = 40) {
  struct Impl {
    const std::function<double(double)>& f;
    double run(double a, double m, double b, double fa, double fm, double fb, double whole,
               double tol, int depth) {
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
      return run(a, lm, m, fa, flm, fm, left, tol / 2, depth - 1) +
             run(m, rm, b, fm, frm, fb, right, tol / 2, depth - 1);
    }
  };
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  Impl impl{f};
  return impl.run(a, m, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace rvflow::oracles
