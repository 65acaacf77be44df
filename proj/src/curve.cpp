#include "tangenta/curve.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "tangenta/error.hpp"

namespace tangenta {

PlaneCurve::PlaneCurve(AnalyticCurve analytic) : rep_(std::move(analytic)) {
  const auto& a = std::get<AnalyticCurve>(rep_);
  if (!(a.lo < a.hi)) throw precondition_error("curve domain must satisfy lo < hi");
  deriv_ = a.expr.derivative(a.var);
}

PlaneCurve::PlaneCurve(SampledCurve sampled) : rep_(std::move(sampled)) {
  const auto& s = std::get<SampledCurve>(rep_);
  if (s.x.size() < 2 || s.x.size() != s.y.size())
    throw precondition_error("sampled curve needs at least 2 matching samples");
  for (std::size_t i = 1; i < s.x.size(); ++i)
    if (!(s.x[i - 1] < s.x[i]))
      throw precondition_error("sampled abscissas must be strictly increasing");
}

PlaneCurve PlaneCurve::analytic(const std::string& expr_text, double lo, double hi,
                                const std::string& var) {
  return PlaneCurve(AnalyticCurve{Expression::parse(expr_text), var, lo, hi});
}

PlaneCurve PlaneCurve::sampled(std::vector<double> x, std::vector<double> y) {
  return PlaneCurve(SampledCurve{std::move(x), std::move(y)});
}

double PlaneCurve::domain_lo() const {
  return is_analytic() ? as_analytic().lo : as_sampled().x.front();
}

double PlaneCurve::domain_hi() const {
  return is_analytic() ? as_analytic().hi : as_sampled().x.back();
}

namespace {

void check_domain(const PlaneCurve& c, double x) {
  if (x < c.domain_lo() || x > c.domain_hi())
    throw domain_error("x = " + std::to_string(x) + " outside curve domain [" +
                       std::to_string(c.domain_lo()) + ", " + std::to_string(c.domain_hi()) + "]");
}

// Index of the segment [x[i], x[i+1]] containing x.
std::size_t segment_index(const SampledCurve& s, double x) {
  auto it = std::upper_bound(s.x.begin(), s.x.end(), x);
  std::size_t i = it == s.x.begin() ? 0 : std::size_t(it - s.x.begin()) - 1;
  return std::min(i, s.x.size() - 2);
}

}  // namespace

double PlaneCurve::value(double x) const {
  check_domain(*this, x);
  if (is_analytic()) {
    const auto& a = as_analytic();
    return a.expr.eval({{a.var, x}});
  }
  const auto& s = as_sampled();
  std::size_t i = segment_index(s, x);
  double w = (x - s.x[i]) / (s.x[i + 1] - s.x[i]);
  return s.y[i] + w * (s.y[i + 1] - s.y[i]);
}

double PlaneCurve::slope(double x) const {
  check_domain(*this, x);
  if (is_analytic()) {
    const auto& a = as_analytic();
    try {
      return deriv_.eval({{a.var, x}});
    } catch (const Error& e) {
      throw domain_error(std::string("derivative undefined: ") + e.what());
    }
  }
  const auto& s = as_sampled();
  std::size_t n = s.x.size();
  // At an interior sample node: central difference on the neighbors.
  auto it = std::lower_bound(s.x.begin(), s.x.end(), x);
  if (it != s.x.end() && *it == x) {
    std::size_t i = std::size_t(it - s.x.begin());
    if (i == 0) return (s.y[1] - s.y[0]) / (s.x[1] - s.x[0]);
    if (i == n - 1) return (s.y[n - 1] - s.y[n - 2]) / (s.x[n - 1] - s.x[n - 2]);
    return (s.y[i + 1] - s.y[i - 1]) / (s.x[i + 1] - s.x[i - 1]);
  }
  std::size_t i = segment_index(s, x);
  return (s.y[i + 1] - s.y[i]) / (s.x[i + 1] - s.x[i]);
}

double eval_curve(const PlaneCurve& c, double x) { return c.value(x); }
double slope_at(const PlaneCurve& c, double x) { return c.slope(x); }

TangentData tangent_data_at(const PlaneCurve& c, double x) {
  TangentData td;
  td.x = x;
  td.ordinate = c.value(x);
  td.slope = c.slope(x);  // throws Error(domain) when undefined
  if (td.slope == 0)
    throw Error(ErrKind::precondition, "zero slope: subtangent is infinite at x = " +
                                           std::to_string(x));
  td.subtangent = td.ordinate / td.slope;
  td.subnormal = td.ordinate * td.slope;
  td.foot = x - td.subtangent;
  td.zero_ordinate = td.ordinate == 0;
  return td;
}

CharacteristicTriangle characteristic_triangle(const PlaneCurve& c, double x, double dx) {
  if (dx == 0) throw precondition_error("characteristic triangle needs dx != 0");
  check_domain(c, x);
  check_domain(c, x + dx);
  CharacteristicTriangle tri;
  tri.dx = dx;
  tri.dc = c.value(x + dx) - c.value(x);
  tri.chord = std::hypot(tri.dx, tri.dc);
  return tri;
}

Shape convexity_probe(const PlaneCurve& c, double a, double b, int n_probes) {
  if (n_probes < 3) throw precondition_error("convexity probe needs at least 3 probes");
  std::vector<double> ys(n_probes);
  double scale = 0;
  for (int i = 0; i < n_probes; ++i) {
    double x = a + (b - a) * i / (n_probes - 1);
    ys[i] = c.value(std::clamp(x, c.domain_lo(), c.domain_hi()));
    scale = std::max(scale, std::abs(ys[i]));
  }
  double tol = 1e-12 * std::max(scale, 1.0);
  bool any_pos = false, any_neg = false;
  for (int i = 1; i + 1 < n_probes; ++i) {
    double d2 = ys[i + 1] - 2 * ys[i] + ys[i - 1];
    if (d2 > tol) any_pos = true;
    if (d2 < -tol) any_neg = true;
  }
  if (any_pos && any_neg) return Shape::neither;
  if (any_pos) return Shape::convex;
  if (any_neg) return Shape::concave;
  return Shape::convex;  // straight line counts as (degenerate) convex
}

const char* shape_name(Shape s) {
  switch (s) {
    case Shape::convex: return "convex";
    case Shape::concave: return "concave";
    default: return "neither";
  }
}

nlohmann::json PlaneCurve::to_json() const {
  if (is_analytic()) {
    const auto& a = as_analytic();
    return {{"kind", "analytic"}, {"expr", a.expr.str()}, {"domain", {a.lo, a.hi}}};
  }
  const auto& s = as_sampled();
  return {{"kind", "sampled"}, {"x", s.x}, {"y", s.y}};
}

PlaneCurve PlaneCurve::from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind");
  if (kind == "analytic") {
    auto dom = j.at("domain");
    return analytic(j.at("expr"), dom.at(0), dom.at(1));
  }
  if (kind == "sampled")
    return sampled(j.at("x").get<std::vector<double>>(), j.at("y").get<std::vector<double>>());
  throw precondition_error("unknown curve kind '" + kind + "'");
}

}  // namespace tangenta
