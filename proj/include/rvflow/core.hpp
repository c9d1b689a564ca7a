#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace rvflow {

using cx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Failure conditions surfaced by the numeric operations. Precondition
/// violations on plain argument types throw std::invalid_argument instead.
enum class errc {
  not_a_zero,
  no_convergence,
  stencil_out_of_domain,
  quadrature_not_converged,
  hypothesis_violated,
  out_of_domain,
  not_contractive,
  max_iters,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::not_a_zero: return "NOT_A_ZERO";
    case errc::no_convergence: return "NO_CONVERGENCE";
    case errc::stencil_out_of_domain: return "STENCIL_OUT_OF_DOMAIN";
    case errc::quadrature_not_converged: return "QUADRATURE_NOT_CONVERGED";
    case errc::hypothesis_violated: return "HYPOTHESIS_VIOLATED";
    case errc::out_of_domain: return "OUT_OF_DOMAIN";
    case errc::not_contractive: return "NOT_CONTRACTIVE";
    case errc::max_iters: return "MAX_ITERS";
  }
  return "UNKNOWN";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(cx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite(cx z, const char* who) {
  if (!is_finite(z)) throw std::invalid_argument(std::string(who) + ": non-finite argument");
}

/// Axis-aligned rectangle in the plane, [x0,x1] x [y0,y1].
struct Rect {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(cx z) const {
    return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
  }
};

/// Sampling grid over a rectangle, nx x ny cell centers.
struct GridSpec {
  Rect box;
  int nx = 2, ny = 2;
  cx point(int i, int j) const {
    const double fx = nx > 1 ? double(i) / (nx - 1) : 0.5;
    const double fy = ny > 1 ? double(j) / (ny - 1) : 0.5;
    return {box.x0 + fx * box.width(), box.y0 + fy * box.height()};
  }
};

}  // namespace rvflow
