#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "rvflow/model_flow.hpp"

namespace rvflow::io {

using nlohmann::json;

/// Shortest-faithful decimal with 17 significant digits.
inline std::string num17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json complex_json(cx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

/// CSV schema: header `t,re,im`, one sample per line, 17 significant digits.
inline void write_trajectory_csv(const ode::Trajectory& traj, std::ostream& os) {
  os << "t,re,im\n";
  for (const auto& s : traj.samples)
    os << num17(s.t) << ',' << num17(s.z.real()) << ',' << num17(s.z.imag()) << '\n';
}

inline json trajectory_meta_json(const ode::Trajectory& traj) {
  return json{{"integrator_id", traj.integrator_id},
              {"terminal_status", ode::status_name(traj.terminal_status)},
              {"step_stats",
               {{"min_dt", traj.step_stats.min_dt},
                {"max_dt", traj.step_stats.max_dt},
                {"n_steps", traj.step_stats.n_steps}}}};
}

inline json fixed_point_report_json(const model_flow::FixedPointReport& rep) {
  return json{{"location", complex_json(rep.location)},
              {"dz", complex_json(rep.dz)},
              {"dzbar", complex_json(rep.dzbar)},
              {"jacobian", {{rep.jacobian.a, rep.jacobian.b}, {rep.jacobian.c, rep.jacobian.d}}},
              {"eigenvalues", {complex_json(rep.eigenvalues[0]), complex_json(rep.eigenvalues[1])}},
              {"class", model_flow::stability_name(rep.cls)}};
}

/// CSV raster of basin labels: `re,im,label` per grid point, row-major.
inline void write_basin_csv(const model_flow::BasinRaster& raster, std::ostream& os) {
  os << "re,im,label\n";
  for (int j = 0; j < raster.grid.ny; ++j)
    for (int i = 0; i < raster.grid.nx; ++i) {
      const cx z = raster.grid.point(i, j);
      os << num17(z.real()) << ',' << num17(z.imag()) << ','
         << model_flow::basin_label_name(raster.at(i, j)) << '\n';
    }
}

/// Arrow-field SVG of the model field over a grid, with the invariant circle
/// |z - 1| = 1 overlaid.
inline void write_portrait_svg(const GridSpec& grid, std::ostream& os) {
  const double w = 720.0, h = 560.0;
  const Rect& box = grid.box;
  auto X = [&](double x) { return (x - box.x0) / box.width() * w; };
  auto Y = [&](double y) { return h - (y - box.y0) / box.height() * h; };
  const double scale_per_unit = w / box.width();

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<circle cx=\"" << X(1.0) << "\" cy=\"" << Y(0.0) << "\" r=\"" << scale_per_unit
     << "\" fill=\"none\" stroke=\"#c03030\" stroke-width=\"1.5\"/>\n";

  const double arrow_len = 0.4 * std::min(box.width() / std::max(1, grid.nx - 1),
                                          box.height() / std::max(1, grid.ny - 1));
  os << "<g stroke=\"#1a237e\" stroke-width=\"1\">\n";
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j) {
      const cx z = grid.point(i, j);
      const cx v = model_flow::eval_v(z);
      const double mag = std::abs(v);
      if (mag < 1e-14) {
        os << "<circle cx=\"" << X(z.real()) << "\" cy=\"" << Y(z.imag())
           << "\" r=\"2.5\" fill=\"#1a237e\"/>\n";
        continue;
      }
      const cx dir = v / mag;
      const cx tip = z + arrow_len * dir;
      const cx left = tip - 0.3 * arrow_len * dir * cx(std::cos(0.5), std::sin(0.5));
      const cx right = tip - 0.3 * arrow_len * dir * cx(std::cos(0.5), -std::sin(0.5));
      os << "<line x1=\"" << X(z.real()) << "\" y1=\"" << Y(z.imag()) << "\" x2=\""
         << X(tip.real()) << "\" y2=\"" << Y(tip.imag()) << "\"/>\n";
      os << "<line x1=\"" << X(tip.real()) << "\" y1=\"" << Y(tip.imag()) << "\" x2=\""
         << X(left.real()) << "\" y2=\"" << Y(left.imag()) << "\"/>\n";
      os << "<line x1=\"" << X(tip.real()) << "\" y1=\"" << Y(tip.imag()) << "\" x2=\""
         << X(right.real()) << "\" y2=\"" << Y(right.imag()) << "\"/>\n";
    }
  os << "</g>\n</svg>\n";
}

}  // namespace rvflow::io
