#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rvflow/convergence.hpp"
#include "rvflow/hyperbolic.hpp"
#include "rvflow/io.hpp"
#include "rvflow/model_flow.hpp"
#include "rvflow/pairing.hpp"
#include "rvflow/schwarzian.hpp"
#include "rvflow/verify.hpp"

namespace rvflow::cli {

using nlohmann::json;

/// Complex literals on the command line: `a`, `a+bi`, `a-bi` (no spaces),
/// scientific notation allowed in both parts.
inline cx parse_complex(const std::string& s) {
  auto fail = [&]() -> cx {
    throw std::invalid_argument("cannot parse complex number '" + s + "' (want a+bi)");
  };
  if (s.empty()) return fail();
  auto parse_real = [&](const std::string& part) {
    std::size_t used = 0;
    double val = 0;
    try {
      val = std::stod(part, &used);
    } catch (...) {
      fail();
    }
    if (used != part.size()) fail();
    return val;
  };
  if (s.back() == 'i' || s.back() == 'I') {
    const std::string body = s.substr(0, s.size() - 1);
    // split at the last +/- that is not an exponent sign and not leading
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    if (split == std::string::npos) {
      if (body.empty() || body == "+" || body == "-")
        return {0.0, body == "-" ? -1.0 : 1.0};
      return {0.0, parse_real(body)};
    }
    const std::string re_part = body.substr(0, split);
    std::string im_part = body.substr(split);
    if (im_part == "+") im_part = "1";
    if (im_part == "-") im_part = "-1";
    return {parse_real(re_part), parse_real(im_part)};
  }
  return {parse_real(s), 0.0};
}

inline std::string format_complex(cx z) {
  return io::num17(z.real()) + (std::signbit(z.imag()) ? "" : "+") + io::num17(z.imag()) + "i";
}

/// Relative paths resolve against $RVFLOW_OUT_DIR when it is set.
inline std::filesystem::path resolve_out_path(const std::string& name) {
  std::filesystem::path p(name);
  if (p.is_absolute()) return p;
  if (const char* dir = std::getenv("RVFLOW_OUT_DIR")) return std::filesystem::path(dir) / p;
  return p;
}

namespace detail {

struct ConfigEcho {
  std::ostringstream line;
  explicit ConfigEcho(const std::string& cmd) { line << "config: cmd=" << cmd; }
  template <class T>
  ConfigEcho& kv(const std::string& key, const T& value) {
    line << ' ' << key << '=' << value;
    return *this;
  }
  void emit(std::ostream& err) const { err << line.str() << '\n'; }
};

inline ode::IntegratorConfig integrator_from(const std::string& method, double dt,
                                             double abs_tol, double rel_tol, double t_max,
                                             double conv_radius, double div_radius) {
  ode::IntegratorConfig cfg;
  if (method == "rk4")
    cfg.method = ode::Method::RK4_FIXED;
  else if (method == "rk45")
    cfg.method = ode::Method::RK45_ADAPTIVE;
  else
    throw std::invalid_argument("method must be rk4 or rk45");
  cfg.dt = dt;
  cfg.abs_tol = abs_tol;
  cfg.rel_tol = rel_tol;
  cfg.t_max = t_max;
  cfg.convergence_radius = conv_radius;
  cfg.divergence_radius = div_radius;
  cfg.validate();
  return cfg;
}

inline void print_scalar(std::ostream& out, const std::string& format, const std::string& name,
                         double value, const json& inputs) {
  if (format == "json")
    out << json{{"op", name}, {"inputs", inputs}, {"value", value}}.dump(2) << '\n';
  else
    out << io::num17(value) << '\n';
}

}  // namespace detail

inline verify::VerifyReport cli_suite_report(std::uint64_t seed);

/// Front-end entry: parses argv (program name excluded), dispatches, writes
/// results on `out` and diagnostics on `err`. Exit codes: 0 success, 1 any
/// check/invariant failure, 2 argument errors.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"numerical laboratory for the length-ratio model flow"};
  app.require_subcommand(1);
  app.set_config("--config", "", "line-oriented key=value config file; flags override");

  // ---- flow ------------------------------------------------------------
  auto* flow = app.add_subcommand("flow", "integrate z' = v(z), emit the trajectory");
  std::string flow_z0, flow_target, flow_method = "rk45", flow_format = "csv", flow_out;
  double flow_dt = 1e-2, flow_abs = 1e-9, flow_rel = 1e-9, flow_tmax = 200.0;
  double flow_conv = 1e-7, flow_div = 50.0;
  flow->add_option("--z0", flow_z0, "start point a+bi")->required();
  flow->add_option("--target", flow_target, "convergence target a+bi");
  flow->add_option("--method", flow_method, "rk4 | rk45 (default rk45)");
  flow->add_option("--dt", flow_dt, "fixed step size for rk4");
  flow->add_option("--abs-tol", flow_abs, "adaptive absolute tolerance");
  flow->add_option("--rel-tol", flow_rel, "adaptive relative tolerance");
  flow->add_option("--t-max", flow_tmax, "time horizon");
  flow->add_option("--conv-radius", flow_conv, "convergence radius around target");
  flow->add_option("--div-radius", flow_div, "divergence abort radius");
  flow->add_option("--format", flow_format, "csv | json");
  flow->add_option("--out", flow_out, "output file (default stdout)");

  // ---- portrait ---------------------------------------------------------
  auto* portrait = app.add_subcommand("portrait", "emit SVG arrow field + CSV basin raster");
  double po_x0 = -2, po_x1 = 3, po_y0 = -2, po_y1 = 2;
  int po_nx = 25, po_ny = 21, po_threads = 1;
  double po_tmax = 60.0;
  std::string po_svg = "portrait.svg", po_csv = "portrait.csv";
  portrait->add_option("--xmin", po_x0);
  portrait->add_option("--xmax", po_x1);
  portrait->add_option("--ymin", po_y0);
  portrait->add_option("--ymax", po_y1);
  portrait->add_option("--nx", po_nx, "grid columns");
  portrait->add_option("--ny", po_ny, "grid rows");
  portrait->add_option("--t-max", po_tmax, "basin integration horizon");
  portrait->add_option("--threads", po_threads, "parallel rows for the basin raster");
  portrait->add_option("--svg", po_svg, "arrow-field file name");
  portrait->add_option("--csv", po_csv, "basin raster file name");

  // ---- fixed-points -----------------------------------------------------
  auto* fixed = app.add_subcommand("fixed-points", "Newton search + classification");
  double fx_x0 = -2, fx_x1 = 3, fx_y0 = -2, fx_y1 = 2;
  int fx_grid = 40;
  fixed->add_option("--xmin", fx_x0);
  fixed->add_option("--xmax", fx_x1);
  fixed->add_option("--ymin", fx_y0);
  fixed->add_option("--ymax", fx_y1);
  fixed->add_option("--grid-n", fx_grid, "Newton seeds per axis (>= 8)");

  // ---- schwarzian ---------------------------------------------------------
  auto* schw = app.add_subcommand("schwarzian", "power-map schwarzian + univalence verdicts");
  std::string sc_c, sc_z = "0+1i";
  int sc_samples = 2000;
  std::uint64_t sc_seed = 0;
  double sc_margin = 0.05, sc_h = 1e-3;
  schw->add_option("--c", sc_c, "exponent a+bi")->required();
  schw->add_option("--z", sc_z, "evaluation point (Im z > 0)");
  schw->add_option("--samples", sc_samples, "injectivity sample count");
  schw->add_option("--seed", sc_seed, "injectivity sampling seed");
  schw->add_option("--margin", sc_margin, "injectivity pair margin");
  schw->add_option("--stencil-h", sc_h, "stencil spacing factor");

  // ---- pair ---------------------------------------------------------------
  auto* pair = app.add_subcommand("pair", "strip-model pairing quadrature");
  std::string pa_c;
  double pa_s = 1.0;
  bool pa_pullback = false;
  pair->add_option("--c", pa_c, "length ratio a+bi")->required();
  pair->add_option("--s", pa_s, "annulus modulus (> 0)");
  pair->add_flag("--pullback", pa_pullback, "pair against the pulled-back differential");

  // ---- geom ---------------------------------------------------------------
  auto* geom = app.add_subcommand("geom", "hyperbolic-geometry calculators");
  geom->require_subcommand(1);
  geom->fallthrough();  // lets --format ride after the verb
  std::string geom_format = "plain";
  geom->add_option("--format", geom_format, "plain | json");

  struct GeomArgs {
    double R = 1.0, ReL = 0.01, epsilon = 0.1, r = 0.5, d = 1.0, d1 = 1.0;
    double ell_u = 0.0, t = 1.0, theta = 0.0, radius = 0.0, tail_tol = 1e-12;
    double D = 0.0, P = 1.0, chi = 2.0, bending = 0.0, offset = 1.0, delta = 0.5;
    double A = 1.0, B = 1.0;
    long long n = 1, N = 1;
  } ga;
  auto* g_tube = geom->add_subcommand("tube-area", "pi sinh(2R) Re L");
  g_tube->add_option("--R", ga.R)->required();
  g_tube->add_option("--ReL", ga.ReL)->required();
  auto* g_minlen = geom->add_subcommand("min-length", "eps^2 / sinh(2R)");
  g_minlen->add_option("--epsilon", ga.epsilon)->required();
  g_minlen->add_option("--R", ga.R)->required();
  auto* g_diskq = geom->add_subcommand("disk-area", "quadrature of the cylinder-metric disk");
  g_diskq->add_option("--r", ga.r)->required();
  auto* g_diskc = geom->add_subcommand("disk-closed", "closed form 4 pi atanh(r^2)");
  g_diskc->add_option("--r", ga.r)->required();
  auto* g_diskb = geom->add_subcommand("disk-bound", "ceiling pi / sinh^2(d)");
  g_diskb->add_option("--d", ga.d)->required();
  auto* g_visual = geom->add_subcommand("visual-area", "2 pi (1 - tanh d)");
  g_visual->add_option("--d", ga.d)->required();
  auto* g_proj = geom->add_subcommand("proj-distance", "log(2 coth eps)");
  g_proj->add_option("--epsilon", ga.epsilon)->required();
  auto* g_lambert = geom->add_subcommand("lambert", "asinh(1 / sinh d1)");
  g_lambert->add_option("--d1", ga.d1)->required();
  auto* g_shdist = geom->add_subcommand("shadow-distance", "R + ell(u) - log(1+sqrt2)");
  g_shdist->add_option("--R-eps3", ga.R)->required();
  g_shdist->add_option("--ell-u", ga.ell_u)->required();
  auto* g_sharea = geom->add_subcommand("shadow-area", "16 pi e^{-2d}");
  g_sharea->add_option("--R-eps3", ga.R)->required();
  g_sharea->add_option("--ell-u", ga.ell_u)->required();
  auto* g_disp = geom->add_subcommand("displacement", "loxodromic displacement");
  g_disp->add_option("--t", ga.t)->required();
  g_disp->add_option("--theta", ga.theta);
  g_disp->add_option("--n", ga.n);
  g_disp->add_option("--r", ga.radius);
  auto* g_poinc = geom->add_subcommand("poincare", "cyclic-group Poincare series");
  g_poinc->add_option("--t", ga.t)->required();
  g_poinc->add_option("--theta", ga.theta);
  g_poinc->add_option("--r", ga.radius);
  g_poinc->add_option("--tail-tol", ga.tail_tol);
  auto* g_ortho = geom->add_subcommand("orthosum", "N e^{2D} P");
  g_ortho->add_option("--N", ga.N)->required();
  g_ortho->add_option("--D", ga.D)->required();
  g_ortho->add_option("--P", ga.P)->required();
  auto* g_narea = geom->add_subcommand("nbhd-area", "core neighborhood boundary area");
  g_narea->add_option("--chi", ga.chi)->required();
  g_narea->add_option("--bending", ga.bending);
  g_narea->add_option("--t", ga.offset)->required();
  auto* g_nvol = geom->add_subcommand("nbhd-volume", "core neighborhood volume");
  g_nvol->add_option("--chi", ga.chi)->required();
  g_nvol->add_option("--bending", ga.bending);
  g_nvol->add_option("--epsilon", ga.offset)->required();
  auto* g_bend = geom->add_subcommand("bending-bound", "(A + B/delta) |chi|");
  g_bend->add_option("--chi", ga.chi)->required();
  g_bend->add_option("--delta", ga.delta)->required();
  g_bend->add_option("--A", ga.A);
  g_bend->add_option("--B", ga.B);

  // ---- converge -------------------------------------------------------------
  auto* conv = app.add_subcommand("converge", "contraction endgame certificates");
  conv->require_subcommand(1);
  double cv_k = 0.1, cv_d = 0.0, cv_c = 0.5, cv_sup = 0.1;
  double cv_wc = 1.0, cv_deriv = 0.0, cv_l2 = 0.0, cv_tol = 1e-10;
  std::string cv_fixed = "1+0i", cv_lambda = "0.4+0i", cv_x0 = "1.9+0i";
  std::uint64_t cv_seed = 0;
  auto* c_aw = conv->add_subcommand("aw", "Ahlfors-Weill distance bound");
  c_aw->add_option("--k", cv_k, "sup norm, in [0, 1/2)")->required();
  auto* c_tail = conv->add_subcommand("tail", "first-step contraction tail bound");
  c_tail->add_option("--d", cv_d)->required();
  c_tail->add_option("--c", cv_c)->required();
  auto* c_chain = conv->add_subcommand("chain", "sup norm -> AW -> tail");
  c_chain->add_option("--sup", cv_sup)->required();
  c_chain->add_option("--c", cv_c)->required();
  auto* c_wolpert = conv->add_subcommand("wolpert", "sup-norm certificate");
  double cv_chain_c = 0.0;
  c_wolpert->add_option("--wolpert-c", cv_wc);
  c_wolpert->add_option("--deriv", cv_deriv, "max |d log ell (mu)|")->required();
  c_wolpert->add_option("--l2", cv_l2)->required();
  c_wolpert->add_option("--chain-c", cv_chain_c,
                        "also chain through AW + tail with this contraction factor");
  auto* c_banach = conv->add_subcommand("banach", "certified iteration of an affine map");
  c_banach->add_option("--fixed", cv_fixed, "fixed point a+bi");
  c_banach->add_option("--lambda", cv_lambda, "multiplier a+bi, |lambda| < 1");
  c_banach->add_option("--x0", cv_x0, "start a+bi");
  c_banach->add_option("--tol", cv_tol);
  c_banach->add_option("--seed", cv_seed);

  // ---- verify ------------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "run the invariant suites");
  std::string vf_suite = "all";
  std::uint64_t vf_seed = 0;
  verify_cmd->add_option("suite", vf_suite, "all | module name");
  verify_cmd->add_option("--seed", vf_seed, "seed for randomized checks");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "argument error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*flow) {
      const cx z0 = parse_complex(flow_z0);
      std::optional<cx> target;
      if (!flow_target.empty()) target = parse_complex(flow_target);
      const auto cfg = detail::integrator_from(flow_method, flow_dt, flow_abs, flow_rel,
                                               flow_tmax, flow_conv, flow_div);
      detail::ConfigEcho echo("flow");
      echo.kv("z0", format_complex(z0))
          .kv("target", target ? format_complex(*target) : "none")
          .kv("method", flow_method)
          .kv("dt", io::num17(flow_dt))
          .kv("abs_tol", io::num17(flow_abs))
          .kv("rel_tol", io::num17(flow_rel))
          .kv("t_max", io::num17(flow_tmax))
          .kv("conv_radius", io::num17(flow_conv))
          .kv("div_radius", io::num17(flow_div))
          .kv("format", flow_format)
          .kv("out", flow_out.empty() ? "-" : flow_out);
      echo.emit(err);
      const auto traj = model_flow::integrate(z0, cfg, target);
      std::ostringstream body;
      if (flow_format == "json") {
        json samples = json::array();
        for (const auto& s : traj.samples)
          samples.push_back({{"t", s.t}, {"re", s.z.real()}, {"im", s.z.imag()}});
        json doc = io::trajectory_meta_json(traj);
        doc["samples"] = std::move(samples);
        body << doc.dump(2) << '\n';
      } else if (flow_format == "csv") {
        io::write_trajectory_csv(traj, body);
      } else {
        throw std::invalid_argument("flow --format must be csv or json");
      }
      if (flow_out.empty()) {
        out << body.str();
      } else {
        std::ofstream f(resolve_out_path(flow_out));
        if (!f) throw std::invalid_argument("cannot open output file " + flow_out);
        f << body.str();
        err << "wrote " << resolve_out_path(flow_out).string() << '\n';
      }
      return 0;
    }

    if (*portrait) {
      GridSpec grid{Rect{po_x0, po_x1, po_y0, po_y1}, po_nx, po_ny};
      if (grid.nx < 1 || grid.ny < 1 || grid.box.width() < 0 || grid.box.height() < 0)
        throw std::invalid_argument("portrait: degenerate grid");
      detail::ConfigEcho echo("portrait");
      echo.kv("box", "[" + io::num17(po_x0) + "," + io::num17(po_x1) + "]x[" +
                         io::num17(po_y0) + "," + io::num17(po_y1) + "]")
          .kv("nx", po_nx)
          .kv("ny", po_ny)
          .kv("t_max", io::num17(po_tmax))
          .kv("threads", po_threads)
          .kv("svg", po_svg)
          .kv("csv", po_csv);
      echo.emit(err);
      const auto svg_path = resolve_out_path(po_svg);
      const auto csv_path = resolve_out_path(po_csv);
      {
        std::ofstream svg(svg_path);
        if (!svg) throw std::invalid_argument("cannot open " + svg_path.string());
        io::write_portrait_svg(grid, svg);
      }
      {
        ode::IntegratorConfig cfg;
        cfg.t_max = po_tmax;
        cfg.convergence_radius = 1e-6;
        GridSpec raster_grid = grid;
        raster_grid.nx = std::max(2, grid.nx);
        raster_grid.ny = std::max(2, grid.ny);
        if (raster_grid.nx != grid.nx || raster_grid.ny != grid.ny)
          err << "note: basin raster needs >= 2 points per axis, using " << raster_grid.nx
              << "x" << raster_grid.ny << '\n';
        const auto raster = model_flow::basin_sample(raster_grid, cfg, po_threads);
        std::ofstream csv(csv_path);
        if (!csv) throw std::invalid_argument("cannot open " + csv_path.string());
        io::write_basin_csv(raster, csv);
      }
      out << "wrote " << svg_path.string() << " and " << csv_path.string() << '\n';
      return 0;
    }

    if (*fixed) {
      detail::ConfigEcho echo("fixed-points");
      echo.kv("box", "[" + io::num17(fx_x0) + "," + io::num17(fx_x1) + "]x[" +
                         io::num17(fx_y0) + "," + io::num17(fx_y1) + "]")
          .kv("grid_n", fx_grid);
      echo.emit(err);
      const auto reports = model_flow::find_fixed_points({fx_x0, fx_x1, fx_y0, fx_y1}, fx_grid);
      json arr = json::array();
      for (const auto& r : reports) arr.push_back(io::fixed_point_report_json(r));
      out << arr.dump(2) << '\n';
      return 0;
    }

    if (*schw) {
      const cx c = parse_complex(sc_c);
      const cx z = parse_complex(sc_z);
      detail::ConfigEcho echo("schwarzian");
      echo.kv("c", format_complex(c))
          .kv("z", format_complex(z))
          .kv("samples", sc_samples)
          .kv("seed", sc_seed)
          .kv("margin", io::num17(sc_margin))
          .kv("h", io::num17(sc_h));
      echo.emit(err);
      using namespace schwarzian_lab;
      const cx C = schwarzian_closed_form(c).C;
      const cx numeric = schwarzian_numeric(PowerMap{c}, z, sc_h * std::abs(z));
      const double strip = strip_intersection_length(c);
      json doc{{"c", io::complex_json(c)},
               {"closed_form_coefficient", io::complex_json(C)},
               {"schwarzian_at_z", io::complex_json(numeric)},
               {"closed_form_at_z", io::complex_json(C / (z * z))},
               {"univalent_disk", univalence_criterion(c)},
               {"strip_length", std::isinf(strip) ? json("INFINITE") : json(strip)},
               {"strip_univalent", strip <= 2 * pi},
               {"empirical_injectivity",
                empirical_injectivity(c, sc_samples, sc_seed, sc_margin)},
               {"seed", sc_seed}};
      out << doc.dump(2) << '\n';
      return 0;
    }

    if (*pair) {
      const cx c = parse_complex(pa_c);
      detail::ConfigEcho echo("pair");
      echo.kv("c", format_complex(c)).kv("s", io::num17(pa_s)).kv("pullback", pa_pullback);
      echo.emit(err);
      using namespace pairing_functionals;
      const auto res = pa_pullback ? pair_strip_pullback(c, {pa_s}) : pair_strip(c, {pa_s});
      json doc{{"value_re", res.value.real()},
               {"value_im", res.value.imag()},
               {"est_error", res.est_error},
               {"n_evals", res.n_evals}};
      if (pa_pullback) doc["normalization"] = "F_L";
      out << doc.dump(2) << '\n';
      return 0;
    }

    if (*geom) {
      using namespace hyperbolic_estimates;
      auto emit = [&](const std::string& name, double value, json inputs) {
        detail::ConfigEcho echo("geom " + name);
        echo.kv("format", geom_format).kv("inputs", inputs.dump());
        echo.emit(err);
        detail::print_scalar(out, geom_format, name, value, inputs);
      };
      if (*g_tube)
        emit("tube-area", tube_boundary_area(ga.R, ga.ReL), {{"R", ga.R}, {"ReL", ga.ReL}});
      else if (*g_minlen)
        emit("min-length", min_length_bound(ga.epsilon, ga.R),
             {{"epsilon", ga.epsilon}, {"R", ga.R}});
      else if (*g_diskq)
        emit("disk-area", quotient_disk_area_exact(ga.r), {{"r", ga.r}});
      else if (*g_diskc)
        emit("disk-closed", quotient_disk_area_closed_form(ga.r), {{"r", ga.r}});
      else if (*g_diskb)
        emit("disk-bound", quotient_disk_area_bound(ga.d), {{"d", ga.d}});
      else if (*g_visual)
        emit("visual-area", visual_area_exact(ga.d), {{"d", ga.d}});
      else if (*g_proj)
        emit("proj-distance", projection_halfspace_distance_bound(ga.epsilon),
             {{"epsilon", ga.epsilon}});
      else if (*g_lambert)
        emit("lambert", lambert_quadrilateral(ga.d1), {{"d1", ga.d1}});
      else if (*g_shdist)
        emit("shadow-distance", halfspace_shadow_distance(ga.R, ga.ell_u),
             {{"R_eps3", ga.R}, {"ell_u", ga.ell_u}});
      else if (*g_sharea)
        emit("shadow-area", shadow_area_bound(ga.R, ga.ell_u),
             {{"R_eps3", ga.R}, {"ell_u", ga.ell_u}});
      else if (*g_disp)
        emit("displacement", loxodromic_displacement({ga.t, ga.theta}, ga.n, ga.radius),
             {{"t", ga.t}, {"theta", ga.theta}, {"n", ga.n}, {"r", ga.radius}});
      else if (*g_poinc)
        emit("poincare", poincare_series_cyclic({ga.t, ga.theta}, ga.radius, ga.tail_tol),
             {{"t", ga.t}, {"theta", ga.theta}, {"r", ga.radius}, {"tail_tol", ga.tail_tol}});
      else if (*g_ortho)
        emit("orthosum", orthosum_bound(ga.N, ga.D, ga.P),
             {{"N", ga.N}, {"D", ga.D}, {"P", ga.P}});
      else if (*g_narea)
        emit("nbhd-area", neighborhood_boundary_area({ga.chi, ga.bending, ga.offset}),
             {{"chi", ga.chi}, {"bending", ga.bending}, {"t", ga.offset}});
      else if (*g_nvol)
        emit("nbhd-volume", neighborhood_volume({ga.chi, ga.bending, ga.offset}),
             {{"chi", ga.chi}, {"bending", ga.bending}, {"epsilon", ga.offset}});
      else if (*g_bend)
        emit("bending-bound", bending_length_bound(ga.chi, ga.delta, ga.A, ga.B),
             {{"chi", ga.chi}, {"delta", ga.delta}, {"A", ga.A}, {"B", ga.B}});
      return 0;
    }

    if (*conv) {
      using namespace convergence_bounds;
      auto certificate = [&](const std::string& formula_id, double bound, json inputs) {
        detail::ConfigEcho echo("converge " + formula_id);
        echo.kv("inputs", inputs.dump());
        echo.emit(err);
        out << json{{"formula_id", formula_id}, {"inputs", inputs}, {"bound", bound}}.dump(2)
            << '\n';
      };
      if (*c_aw)
        certificate("ahlfors_weill", ahlfors_weill_bound(cv_k), {{"k", cv_k}});
      else if (*c_tail)
        certificate("contraction_tail", contraction_tail_bound(cv_d, cv_c),
                    {{"d_first_step", cv_d}, {"c", cv_c}});
      else if (*c_chain)
        certificate("chained_tail", chained_tail_bound(cv_sup, cv_c),
                    {{"sup_norm", cv_sup}, {"c", cv_c}});
      else if (*c_wolpert) {
        NormBudget budget;
        budget.wolpert_c = cv_wc;
        budget.max_log_length_deriv = cv_deriv;
        budget.l2_norm = cv_l2;
        const json inputs{{"wolpert_c", cv_wc}, {"deriv", cv_deriv}, {"l2", cv_l2}};
        if (cv_chain_c > 0)
          certificate("wolpert_chained_tail", chained_tail_from_budget(budget, cv_chain_c),
                      json{{"wolpert_c", cv_wc},
                           {"deriv", cv_deriv},
                           {"l2", cv_l2},
                           {"chain_c", cv_chain_c}});
        else
          certificate("wolpert_sup", wolpert_sup_bound(budget), inputs);
      } else if (*c_banach) {
        const cx fixed_pt = parse_complex(cv_fixed);
        const cx lambda = parse_complex(cv_lambda);
        ContractionSpec<cx> spec;
        spec.factor = std::abs(lambda);
        spec.map = [=](const cx& w) { return fixed_pt + lambda * (w - fixed_pt); };
        spec.metric = [](const cx& a, const cx& b) { return std::abs(a - b); };
        spec.sample = [=](SplitMix64& r) { return r.in_disk(fixed_pt, 3.0); };
        BanachOptions opts;
        opts.seed = cv_seed;
        const auto res = banach_iterate(spec, parse_complex(cv_x0), cv_tol, opts);
        detail::ConfigEcho echo("converge banach");
        echo.kv("fixed", format_complex(fixed_pt))
            .kv("lambda", format_complex(lambda))
            .kv("x0", cv_x0)
            .kv("tol", io::num17(cv_tol))
            .kv("seed", cv_seed);
        echo.emit(err);
        out << json{{"formula_id", "banach_iterate"},
                    {"inputs",
                     {{"fixed", io::complex_json(fixed_pt)},
                      {"lambda", io::complex_json(lambda)},
                      {"tol", cv_tol},
                      {"seed", cv_seed}}},
                    {"fixed_point", io::complex_json(res.fixed_point)},
                    {"n_iters", res.n_iters},
                    {"certified_radius", res.certified_radius}}
                   .dump(2)
            << '\n';
      }
      return 0;
    }

    if (*verify_cmd) {
      detail::ConfigEcho echo("verify");
      echo.kv("suite", vf_suite).kv("seed", vf_seed);
      echo.emit(err);
      std::vector<verify::VerifyReport> reports;
      if (vf_suite == "all") {
        for (const auto& name : verify::suite_names())
          reports.push_back(verify::run_suite(name, vf_seed));
        reports.push_back(cli_suite_report(vf_seed));
        std::sort(reports.begin(), reports.end(),
                  [](const auto& a, const auto& b) { return a.suite < b.suite; });
      } else if (vf_suite == "cli") {
        reports.push_back(cli_suite_report(vf_seed));
      } else {
        reports.push_back(verify::run_suite(vf_suite, vf_seed));
      }
      json arr = json::array();
      int failed = 0;
      for (const auto& r : reports) {
        arr.push_back(verify::report_json(r));
        failed += r.n_failed;
      }
      out << json{{"seed", vf_seed}, {"suites", arr}, {"n_failed_total", failed}}.dump(2)
          << '\n';
      return failed == 0 ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    err << "argument error: " << e.what() << '\n';
    return 2;
  } catch (const error& e) {
    err << "check failed: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

/// The cli module's own invariants: deterministic reruns and complex-literal
/// round-trips.
inline verify::VerifyReport cli_suite_report(std::uint64_t seed) {
  verify::VerifyReport report;
  report.suite = "cli";

  auto record = [&](const verify::CheckResult& res) {
    ++report.n_checks;
    if (!res.pass) {
      ++report.n_failed;
      report.failures.push_back(res);
    }
  };

  {  // cli.1: byte-identical reruns for identical flags and seed
    verify::CheckResult res;
    res.check_id = "cli.1";
    auto run_once = [&](std::vector<std::string> args) {
      std::ostringstream out, err2;
      run(std::move(args), out, err2);
      return out.str() + "\x1f" + err2.str();
    };
    const std::vector<std::string> cmd{"geom", "--format", "json", "poincare",
                                       "--t", "1", "--r", "0.3"};
    const std::string a = run_once(cmd), b = run_once(cmd);
    res.pass = a == b && !a.empty();
    res.expected = "identical bytes";
    res.got = res.pass ? "identical bytes" : "outputs differ";
    record(res);
  }
  {  // cli.2: complex literal round trip
    verify::CheckResult res;
    res.check_id = "cli.2";
    SplitMix64 rng(seed);
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i) {
      const cx z = rng.in_rect({-10, 10, -10, 10});
      ok = std::abs(parse_complex(format_complex(z)) - z) == 0.0;
    }
    ok = ok && parse_complex("2") == cx(2, 0) && parse_complex("-1.5-2i") == cx(-1.5, -2) &&
         parse_complex("1e-3+2e-4i") == cx(1e-3, 2e-4);
    res.pass = ok;
    res.expected = "round-trip exact";
    res.got = ok ? "round-trip exact" : "mismatch";
    record(res);
  }
  return report;
}

}  // namespace rvflow::cli
