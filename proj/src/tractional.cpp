#include "tangenta/tractional.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tangenta/error.hpp"

namespace tangenta {

namespace {

void check_feasible(const PlaneCurve& et, double U, double lo, double hi) {
  const int n = 257;
  double slack = 1e-9 * std::max(std::abs(U), 1.0);
  for (int i = 0; i < n; ++i) {
    double x = lo + (hi - lo) * i / (n - 1);
    double e = et.value(x);
    if (e < -slack)
      throw precondition_error("infeasible cam: ET < 0 at x = " + std::to_string(x));
    (void)U;
  }
}

}  // namespace

CamCurve cam_from_slope_law(const PlaneCurve& w, double U) {
  double lo = w.domain_lo(), hi = w.domain_hi();
  if (w.is_analytic()) {
    const auto& an = w.as_analytic();
    Expression et = Expression::difference(
        Expression::constant(U),
        Expression::product(Expression::variable(an.var),
                            Expression::apply(NodeKind::sqrt_fn,
                                              Expression::sum(Expression::constant(Rational(1)),
                                                              Expression::power(an.expr, 2)))));
    PlaneCurve cam(AnalyticCurve{et, an.var, lo, hi});
    check_feasible(cam, U, lo, hi);
    return CamCurve{std::move(cam), U};
  }
  const auto& s = w.as_sampled();
  std::vector<double> et(s.x.size());
  for (std::size_t i = 0; i < s.x.size(); ++i)
    et[i] = U - s.x[i] * std::sqrt(1 + s.y[i] * s.y[i]);
  PlaneCurve cam = PlaneCurve::sampled(s.x, std::move(et));
  check_feasible(cam, U, lo, hi);
  return CamCurve{std::move(cam), U};
}

CamCurve constant_cam(double U, double et, double lo, double hi) {
  PlaneCurve cam(AnalyticCurve{Expression::constant(et), "x", lo, hi});
  check_feasible(cam, U, lo, hi);
  return CamCurve{std::move(cam), U};
}

namespace {

struct SlopeEval {
  const CamCurve& cam;

  // cr^2 may round slightly negative right at the feasibility boundary;
  // clamp within rounding slack so a grazing cam still traces.
  double cr2(double x) const {
    double tc = cam.U - cam.et.value(x);
    double c2 = tc * tc - x * x;
    double slack = 64 * std::numeric_limits<double>::epsilon() * (tc * tc + x * x);
    if (std::abs(c2) <= slack) return 0;
    return c2;
  }

  double operator()(double x) const {
    double c2 = cr2(x);
    if (c2 < 0) throw domain_error("string cannot reach the pen: CR^2 < 0");
    if (x <= 0) throw domain_error("slope singular at TR = 0");
    return std::sqrt(c2) / x;
  }
};

double rk4_step(const SlopeEval& slope, int sign, double x, double h) {
  double k1 = slope(x);
  double k2 = slope(x + h / 2);
  double k3 = k2;  // dz/dx depends on x only, so the two middle stages agree
  double k4 = slope(x + h);
  return sign * h * (k1 + 2 * k2 + 2 * k3 + k4) / 6;
}

DeviceState make_state(const SlopeEval& slope, int sign, double x, double z, double U,
                       const PlaneCurve& et_curve) {
  DeviceState s;
  s.x = x;
  s.z = z;
  s.et = et_curve.value(x);
  s.tc = U - s.et;
  s.cr = std::sqrt(std::max(slope.cr2(x), 0.0));
  s.slope = sign * s.cr / x;
  return s;
}

}  // namespace

DeviceTrace simulate_device(const CamCurve& cam, const DeviceConfig& cfg) {
  if (!(cfg.h > 0)) throw precondition_error("device step h must be positive");
  if (!(cfg.x0 > 0)) throw precondition_error("device start x0 must be positive");
  if (!(cfg.x0 < cfg.x1)) throw precondition_error("device domain needs x0 < x1");
  if (cfg.sign != 1 && cfg.sign != -1) throw precondition_error("slope sign must be +1 or -1");
  if (cfg.x0 < cam.et.domain_lo() || cfg.x1 > cam.et.domain_hi())
    throw domain_error("device domain outside cam domain");

  SlopeEval slope{cam};
  if (slope.cr2(cfg.x0) < 0)
    throw precondition_error("infeasible start: string segment TC shorter than TR at x0");
  DeviceTrace trace;
  double x = cfg.x0, z = cfg.z0;
  trace.states.push_back(make_state(slope, cfg.sign, x, z, cam.U, cam.et));

  double richardson_scale = std::max(1.0, std::abs(cam.U));
  std::size_t step_no = 0;
  while (x < cfg.x1 - 1e-12 * std::max(1.0, std::abs(cfg.x1))) {
    double h = std::min(cfg.h, cfg.x1 - x);

    // Stop 10 h short of the feasibility boundary instead of integrating
    // into the singularity.
    double lookahead = std::min(x + 10 * cfg.h, cam.et.domain_hi());
    if (slope.cr2(lookahead) < 0 || slope.cr2(x + h) < 0) {
      trace.truncated = true;
      trace.stop_reason = "feasibility boundary (CR -> 0) within 10 h of x = " + std::to_string(x);
      break;
    }

    double dz = rk4_step(slope, cfg.sign, x, h);
    if (++step_no % 100 == 0) {
      double half = rk4_step(slope, cfg.sign, x, h / 2);
      half += rk4_step(slope, cfg.sign, x + h / 2, h / 2);
      if (std::abs(dz - half) > 1e-6 * std::max(richardson_scale, std::abs(z)))
        throw Error(ErrKind::accuracy,
                    "step-halving check failed at x = " + std::to_string(x) +
                        ": discrepancy " + std::to_string(std::abs(dz - half)));
    }
    x += h;
    z += dz;
    trace.states.push_back(make_state(slope, cfg.sign, x, z, cam.U, cam.et));
  }
  return trace;
}

std::string DeviceTrace::csv() const {
  std::string out = "x,z,ET,TC,CR,slope\n";
  char buf[240];
  for (const auto& s : states) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.x, s.z, s.et, s.tc,
                  s.cr, s.slope);
    out += buf;
  }
  return out;
}

double tractrix_closed_form(double a, double x) {
  if (!(a > 0)) throw precondition_error("tractrix parameter a must be positive");
  if (!(x > 0) || x > a) throw domain_error("tractrix requires 0 < x <= a");
  double s = std::sqrt(a * a - x * x);
  return a * std::log((a + s) / x) - s;
}

DeviceTrace simulate_tractrix(double a, double from, double to, double h) {
  CamCurve cam = constant_cam(2 * a, a, from, std::min(to + 10 * h, a));
  DeviceConfig cfg;
  cfg.U = 2 * a;
  cfg.h = h;
  cfg.sign = -1;
  cfg.x0 = from;
  cfg.z0 = tractrix_closed_form(a, from);
  cfg.x1 = to;
  return simulate_device(cam, cfg);
}

TheoremReport verify_device_quadrature(const PlaneCurve& f, double a_const, double U, double lo,
                                       double hi, double tol, double h) {
  if (!(a_const > 0)) throw precondition_error("verify_device_quadrature needs a > 0");
  // w = f / a, so the trace integrates dz/dx = f/a — the quadratrix law.
  PlaneCurve w = [&] {
    if (f.is_analytic()) {
      const auto& an = f.as_analytic();
      return PlaneCurve(AnalyticCurve{
          Expression::quotient(an.expr, Expression::constant(a_const)), an.var, lo, hi});
    }
    const auto& s = f.as_sampled();
    std::vector<double> y(s.y.size());
    for (std::size_t i = 0; i < s.y.size(); ++i) y[i] = s.y[i] / a_const;
    return PlaneCurve::sampled(s.x, std::move(y));
  }();
  for (int i = 0; i < 65; ++i)
    if (f.value(lo + (hi - lo) * i / 64.0) < 0)
      throw precondition_error("quadrature target must be nonnegative");

  CamCurve cam = cam_from_slope_law(w, U);
  DeviceConfig cfg;
  cfg.U = U;
  cfg.h = h;
  cfg.sign = +1;
  cfg.x0 = lo;
  cfg.z0 = 0;
  cfg.x1 = hi;
  DeviceTrace trace = simulate_device(cam, cfg);

  std::vector<double> nodes;
  std::size_t stride = std::max<std::size_t>(1, trace.states.size() / 64);
  for (std::size_t i = 0; i < trace.states.size(); i += stride) nodes.push_back(trace.states[i].x);
  if (nodes.back() != trace.states.back().x) nodes.push_back(trace.states.back().x);
  QuadratrixCurve q = quadratrix_at_nodes(f, a_const, nodes, tol / 10);

  TheoremReport rep;
  rep.theorem = "device_quadrature";
  rep.inputs = {{"curve", f.to_json()}, {"a", a_const}, {"U", U}, {"domain", {lo, hi}},
                {"tol", tol}, {"h", h}};
  rep.probes = static_cast<int>(nodes.size());
  if (trace.truncated) rep.notes.push_back("trace truncated: " + trace.stop_reason);

  double sup = 0, radius = 0;
  for (std::size_t i = 0; i < trace.states.size(); i += stride) {
    const auto& s = trace.states[i];
    double gap = std::abs(s.z - q.z_at(s.x));
    sup = std::max(sup, gap);
    radius = std::max(radius, q.radius_at(s.x));
    if (rep.details.size() < 16)
      rep.details.push_back({{"x", s.x}, {"trace_z", s.z}, {"quadratrix_z", q.z_at(s.x)},
                             {"gap", gap}});
  }
  rep.max_violation = sup;
  rep.tolerance = tol + radius;
  rep.holds = sup <= tol + radius && !trace.truncated;
  return rep;
}

}  // namespace tangenta
