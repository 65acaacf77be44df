// tangenta: verification CLI for the geometric fundamental theorem of
// calculus. Emits quadratrix tables (CSV), theorem reports (JSON), device
// traces (CSV), and figure renderings (SVG). All runs are deterministic;
// exit 0 = verdict holds, 1 = verdict fails, 2 = usage, 3 = bad input.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tangenta/curve.hpp"
#include "tangenta/diagram.hpp"
#include "tangenta/error.hpp"
#include "tangenta/quadrature.hpp"
#include "tangenta/tractional.hpp"

namespace {

using nlohmann::json;
using namespace tangenta;

// Frozen defaults (also shown in --help).
constexpr double kDefaultTol = 1e-6;
constexpr int kDefaultProbes = 50;
constexpr double kDefaultStep = 1e-4;

std::string resolve_out(const std::string& path) {
  const char* base = std::getenv("TANGENTA_OUT");
  if (base && *base && !std::filesystem::path(path).is_absolute())
    return (std::filesystem::path(base) / path).string();
  return path;
}

void emit(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::string resolved = resolve_out(out_path);
  std::ofstream f(resolved, std::ios::binary);
  if (!f) throw precondition_error("cannot open output file '" + resolved + "'");
  f << payload;
}

struct CurveArgs {
  std::string expr;
  std::string json_path;
  double lo = 0, hi = 1;
  bool domain_set = false;

  void attach(CLI::App* cmd, bool required = true) {
    auto* e = cmd->add_option("--curve", expr, "inline curve expression, e.g. \"x^2\"");
    auto* j = cmd->add_option("--curve-json", json_path, "curve JSON file (PlaneCurve format)");
    e->excludes(j);
    cmd->add_option("--domain", [this](const std::vector<std::string>& vals) {
         lo = std::stod(vals[0]);
         hi = std::stod(vals[1]);
         domain_set = true;
         return true;
       },
       "curve domain: two numbers a b")
        ->expected(2);
    if (required) {
      // exactly one source, checked in build()
    }
  }

  PlaneCurve build() const {
    if (!expr.empty() && !json_path.empty())
      throw precondition_error("give exactly one of --curve / --curve-json");
    if (!expr.empty()) {
      if (!domain_set) throw precondition_error("--curve requires --domain a b");
      return PlaneCurve::analytic(expr, lo, hi);
    }
    if (!json_path.empty()) {
      std::ifstream f(json_path);
      if (!f) throw precondition_error("cannot read curve file '" + json_path + "'");
      return PlaneCurve::from_json(json::parse(f));
    }
    throw precondition_error("a curve is required (--curve or --curve-json)");
  }
};

int report_exit(const TheoremReport& rep, const std::string& out, bool leibniz_frame) {
  TheoremReport final_rep = leibniz_frame ? to_leibniz_frame(rep) : rep;
  emit(out, final_rep.to_json().dump(2) + "\n");
  return final_rep.holds ? 0 : 1;
}

// Expands --config file.json into command-line tokens inserted after the
// subcommand names, so explicitly given flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string cfg_path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") {
      cfg_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
  if (cfg_path.empty()) return args;
  std::ifstream f(cfg_path);
  if (!f) throw precondition_error("cannot read config file '" + cfg_path + "'");
  json cfg = json::parse(f);
  if (!cfg.is_object()) throw precondition_error("config must be a JSON object of flag values");

  std::vector<std::string> tokens;
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    std::string flag = "--" + it.key();
    const json& v = it.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) tokens.push_back(flag);
    } else if (v.is_array()) {
      tokens.push_back(flag);
      for (const auto& e : v) tokens.push_back(e.is_string() ? e.get<std::string>() : e.dump());
    } else {
      tokens.push_back(flag);
      tokens.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
  }
  // Insert after the leading subcommand words.
  std::size_t pos = 0;
  while (pos < args.size() && !args[pos].empty() && args[pos][0] != '-') ++pos;
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(pos), tokens.begin(), tokens.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tangenta: certified quadrature and tangency-theorem verification"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string out_path;
  app.add_option("--out", out_path, "output file (default stdout); relative paths resolve under $TANGENTA_OUT")
      ->capture_default_str();

  // quadratrix ------------------------------------------------------------
  auto* q_cmd = app.add_subcommand("quadratrix", "emit the area curve node table (CSV)");
  CurveArgs q_curve;
  q_curve.attach(q_cmd);
  double q_r = 1, q_tol = kDefaultTol;
  int q_nodes = kDefaultProbes;
  q_cmd->add_option("--R", q_r, "scale length R > 0")->capture_default_str();
  q_cmd->add_option("--nodes", q_nodes, "node count")->capture_default_str();
  q_cmd->add_option("--tol", q_tol, "total certification tolerance")->capture_default_str();

  // riemann ---------------------------------------------------------------
  auto* r_cmd = app.add_subcommand("riemann", "Darboux sums, tagged sum, oscillation (JSON)");
  CurveArgs r_curve;
  r_curve.attach(r_cmd);
  int r_cells = 10;
  double r_tag = 0;
  r_cmd->add_option("--cells", r_cells, "uniform cell count")->capture_default_str();
  r_cmd->add_option("--tag", r_tag, "tag in [0,1] for the tagged sum")->capture_default_str();

  // verify ----------------------------------------------------------------
  auto* v_cmd = app.add_subcommand("verify", "machine-check one theorem; exit 0 iff it holds");
  v_cmd->require_subcommand(1);
  bool leibniz_frame = false;
  v_cmd->add_flag("--leibniz-frame", leibniz_frame, "report in Leibniz's symbols");

  CurveArgs v11_curve, v19_curve, vlt_curve, vsn_curve, vftc_curve;
  double v11_r = 1, v11_x0 = 1, v11_cert = 1e-5;
  int v11_probes = kDefaultProbes;
  auto* v11 = v_cmd->add_subcommand("prop11", "tangent line vs quadratrix inequality");
  v11_curve.attach(v11);
  v11->add_option("--R", v11_r)->capture_default_str();
  v11->add_option("--x0", v11_x0, "tangency abscissa")->capture_default_str();
  v11->add_option("--probes", v11_probes)->capture_default_str();
  v11->add_option("--cert-tol", v11_cert)->capture_default_str();

  double v19_r = 1, v19_cert = kDefaultTol;
  int v19_cells = 10;
  auto* v19 = v_cmd->add_subcommand("prop19", "left-rectangle sum vs R*(z(b)-z(a)) bound");
  v19_curve.attach(v19);
  v19->add_option("--R", v19_r)->capture_default_str();
  v19->add_option("--cells", v19_cells)->capture_default_str();
  v19->add_option("--cert-tol", v19_cert)->capture_default_str();

  double vlt_a = 1, vlt_x0 = 1, vlt_delta = 0.5, vlt_cert = kDefaultTol;
  auto* vlt = v_cmd->add_subcommand("leibniz", "tangent increment vs area increment");
  vlt_curve.attach(vlt);
  vlt->add_option("--a", vlt_a, "Leibniz's constant a")->capture_default_str();
  vlt->add_option("--x0", vlt_x0)->capture_default_str();
  vlt->add_option("--delta", vlt_delta)->capture_default_str();
  vlt->add_option("--cert-tol", vlt_cert)->capture_default_str();

  int vsn_cells = 16;
  double vsn_cert = kDefaultTol;
  auto* vsn = v_cmd->add_subcommand("subnormal", "subnormal rectangle sums vs half squared ordinate");
  vsn_curve.attach(vsn);
  vsn->add_option("--cells", vsn_cells)->capture_default_str();
  vsn->add_option("--cert-tol", vsn_cert)->capture_default_str();

  double vftc_r = 1, vftc_tol = 1e-4, vftc_eta = 0;
  int vftc_grid = kDefaultProbes;
  auto* vftc = v_cmd->add_subcommand("ftc", "R * z'(x) = y(x) on a grid");
  vftc_curve.attach(vftc);
  vftc->add_option("--R", vftc_r)->capture_default_str();
  vftc->add_option("--grid", vftc_grid, "interior grid point count")->capture_default_str();
  vftc->add_option("--tol", vftc_tol)->capture_default_str();
  vftc->add_option("--eta", vftc_eta, "finite-difference half-width (0 = 1e-3 of the span)")
      ->capture_default_str();

  // device ----------------------------------------------------------------
  auto* d_cmd = app.add_subcommand("device", "string-and-cam integrator simulation");
  d_cmd->require_subcommand(1);

  std::string dc_w;
  double dc_u = 10, dc_lo = 0.1, dc_hi = 1;
  auto* d_cam = d_cmd->add_subcommand("cam", "synthesize cam curve from a slope law (JSON)");
  d_cam->add_option("--w", dc_w, "slope law expression w(x)")->required();
  d_cam->add_option("--U", dc_u, "total string length")->capture_default_str();
  d_cam->add_option("--domain", [&dc_lo, &dc_hi](const std::vector<std::string>& vals) {
         dc_lo = std::stod(vals[0]);
         dc_hi = std::stod(vals[1]);
         return true;
       },
       "cam domain a b")
      ->expected(2);

  std::string ds_w;
  double ds_u = 10, ds_from = 0.1, ds_to = 1, ds_step = kDefaultStep, ds_z0 = 0;
  int ds_sign = -1;
  auto* d_sim = d_cmd->add_subcommand("simulate", "integrate the pen trace (CSV)");
  d_sim->add_option("--w", ds_w, "slope law expression w(x)")->required();
  d_sim->add_option("--U", ds_u)->capture_default_str();
  d_sim->add_option("--from", ds_from)->capture_default_str();
  d_sim->add_option("--to", ds_to)->capture_default_str();
  d_sim->add_option("--step", ds_step)->capture_default_str();
  d_sim->add_option("--z0", ds_z0)->capture_default_str();
  d_sim->add_option("--sign", ds_sign, "+1 or -1")->capture_default_str();

  double dt_a = 1, dt_from = 0.1, dt_to = 0.99, dt_step = kDefaultStep;
  auto* d_tr = d_cmd->add_subcommand("tractrix", "constant-cam trace (CSV)");
  d_tr->add_option("--a", dt_a)->capture_default_str();
  d_tr->add_option("--from", dt_from)->capture_default_str();
  d_tr->add_option("--to", dt_to)->capture_default_str();
  d_tr->add_option("--step", dt_step)->capture_default_str();

  CurveArgs drt_curve;
  double drt_a = 1, drt_u = 10, drt_tol = 1e-5;
  auto* d_rt = d_cmd->add_subcommand("roundtrip", "device quadrature vs quadratrix (JSON report)");
  drt_curve.attach(d_rt);
  d_rt->add_option("--a", drt_a)->capture_default_str();
  d_rt->add_option("--U", drt_u)->capture_default_str();
  d_rt->add_option("--tol", drt_tol)->capture_default_str();

  // render ----------------------------------------------------------------
  auto* rd_cmd = app.add_subcommand("render", "emit corrected figure SVG");
  rd_cmd->require_subcommand(1);
  int rd_width = 640;
  bool rd_rotated = false;
  rd_cmd->add_option("--width", rd_width, "pixel width >= 64")->capture_default_str();
  rd_cmd->add_flag("--rotated", rd_rotated, "render the 180-degree-turned orientation");

  CurveArgs rb_curve, rl_curve;
  double rb_r = 1, rb_x0 = 1, rb_delta = 0.25;
  auto* rd_b = rd_cmd->add_subcommand("barrow", "Fig. 1 layout with triangle I L K");
  rb_curve.attach(rd_b);
  rd_b->add_option("--R", rb_r)->capture_default_str();
  rd_b->add_option("--x0", rb_x0)->capture_default_str();
  rd_b->add_option("--delta", rb_delta)->capture_default_str();

  double rl_a = 1, rl_x0 = 1, rl_delta = 0.5;
  auto* rd_l = rd_cmd->add_subcommand("leibniz", "Fig. 2 layout with C-bar and (C)");
  rl_curve.attach(rd_l);
  rd_l->add_option("--a", rl_a)->capture_default_str();
  rd_l->add_option("--x0", rl_x0)->capture_default_str();
  rd_l->add_option("--delta", rl_delta)->capture_default_str();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    // CLI11 parses reversed vectors.
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    json err = {{"error", "usage"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const Error& e) {
    json err = {{"error", "precondition"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  }

  try {
    if (*q_cmd) {
      QuadratrixCurve q = quadratrix(q_curve.build(), q_r, static_cast<std::size_t>(q_nodes), q_tol);
      emit(out_path, q.csv());
      return 0;
    }
    if (*r_cmd) {
      PlaneCurve c = r_curve.build();
      Partition p = Partition::uniform(c.domain_lo(), c.domain_hi(),
                                       static_cast<std::size_t>(r_cells));
      auto [lower, upper] = darboux_sums(c, p);
      json out = {{"lower", lower}, {"upper", upper},
                  {"tagged", tagged_sum(c, p.with_tags(r_tag))},
                  {"oscillation", oscillation_sum(c, p)}, {"cells", r_cells}, {"tag", r_tag}};
      emit(out_path, out.dump(2) + "\n");
      return 0;
    }
    if (*v11) {
      PlaneCurve c = v11_curve.build();
      double lo = c.domain_lo(), hi = c.domain_hi();
      std::vector<double> probes(static_cast<std::size_t>(v11_probes));
      for (int i = 0; i < v11_probes; ++i)
        probes[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * (i + 1) / static_cast<double>(v11_probes + 1);
      return report_exit(verify_prop11(c, v11_r, v11_x0, probes, v11_cert), out_path,
                         leibniz_frame);
    }
    if (*v19) {
      PlaneCurve c = v19_curve.build();
      Partition p = Partition::uniform(c.domain_lo(), c.domain_hi(),
                                       static_cast<std::size_t>(v19_cells));
      return report_exit(verify_prop19(c, v19_r, p, v19_cert), out_path, leibniz_frame);
    }
    if (*vlt)
      return report_exit(verify_leibniz_tangency(vlt_curve.build(), vlt_a, vlt_x0, vlt_delta,
                                                 vlt_cert),
                         out_path, leibniz_frame);
    if (*vsn) {
      PlaneCurve c = vsn_curve.build();
      Partition p = Partition::uniform(c.domain_lo(), c.domain_hi(),
                                       static_cast<std::size_t>(vsn_cells));
      return report_exit(verify_subnormal_area(c, p, vsn_cert), out_path, leibniz_frame);
    }
    if (*vftc) {
      PlaneCurve c = vftc_curve.build();
      double lo = c.domain_lo(), hi = c.domain_hi();
      double eta = vftc_eta > 0 ? vftc_eta : 1e-3 * (hi - lo);
      std::vector<double> grid(static_cast<std::size_t>(vftc_grid));
      for (int i = 0; i < vftc_grid; ++i)
        grid[static_cast<std::size_t>(i)] =
            (lo + eta) + (hi - lo - 2 * eta) * (i + 1) / static_cast<double>(vftc_grid + 1);
      return report_exit(ftc_check(c, vftc_r, grid, vftc_tol, vftc_eta), out_path, leibniz_frame);
    }
    if (*d_cam) {
      CamCurve cam = cam_from_slope_law(PlaneCurve::analytic(dc_w, dc_lo, dc_hi), dc_u);
      json out = {{"U", cam.U}, {"et", cam.et.to_json()}};
      emit(out_path, out.dump(2) + "\n");
      return 0;
    }
    if (*d_sim) {
      CamCurve cam = cam_from_slope_law(PlaneCurve::analytic(ds_w, ds_from, ds_to), ds_u);
      DeviceConfig cfg;
      cfg.U = ds_u;
      cfg.h = ds_step;
      cfg.sign = ds_sign;
      cfg.x0 = ds_from;
      cfg.z0 = ds_z0;
      cfg.x1 = ds_to;
      emit(out_path, simulate_device(cam, cfg).csv());
      return 0;
    }
    if (*d_tr) {
      emit(out_path, simulate_tractrix(dt_a, dt_from, dt_to, dt_step).csv());
      return 0;
    }
    if (*d_rt) {
      PlaneCurve c = drt_curve.build();
      return report_exit(verify_device_quadrature(c, drt_a, drt_u, c.domain_lo(), c.domain_hi(),
                                                  drt_tol),
                         out_path, leibniz_frame);
    }
    if (*rd_b) {
      Scene s = barrow_figure(rb_curve.build(), rb_r, rb_x0, rb_delta);
      emit(out_path, render_svg(s, rd_width, rd_rotated));
      return 0;
    }
    if (*rd_l) {
      Scene s = leibniz_figure(rl_curve.build(), rl_a, rl_x0, rl_delta);
      emit(out_path, render_svg(s, rd_width, rd_rotated));
      return 0;
    }
    json err = {{"error", "usage"}, {"message", "no subcommand selected"}};
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const SyntaxError& e) {
    json err = {{"error", "syntax"}, {"message", e.what()}, {"offset", e.offset()}};
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const Error& e) {
    const char* kind = "error";
    switch (e.kind()) {
      case ErrKind::syntax: kind = "syntax"; break;
      case ErrKind::unknown_name: kind = "unknown_name"; break;
      case ErrKind::domain: kind = "domain"; break;
      case ErrKind::precondition: kind = "precondition"; break;
      case ErrKind::accuracy: kind = "accuracy"; break;
    }
    json err = {{"error", kind}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return (e.kind() == ErrKind::syntax || e.kind() == ErrKind::unknown_name) ? 2 : 3;
  } catch (const std::exception& e) {
    json err = {{"error", "internal"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 3;
  }
}
