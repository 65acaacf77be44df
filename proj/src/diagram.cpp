#include "tangenta/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tangenta/error.hpp"
#include "tangenta/quadrature.hpp"

namespace tangenta {

namespace {

constexpr int kCurveSamples = 129;

ScenePolyline sample_polyline(const PlaneCurve& c, double lo, double hi, SceneStyle style) {
  ScenePolyline pl;
  pl.style = std::move(style);
  pl.pts.reserve(kCurveSamples);
  for (int i = 0; i < kCurveSamples; ++i) {
    double x = lo + (hi - lo) * i / (kCurveSamples - 1);
    pl.pts.push_back({x, c.value(x)});
  }
  return pl;
}

ScenePolyline quadratrix_polyline(const QuadratrixCurve& q, SceneStyle style) {
  ScenePolyline pl;
  pl.style = std::move(style);
  for (std::size_t i = 0; i < q.size(); ++i) pl.pts.push_back({q.xs()[i], q.z_mid(i)});
  return pl;
}

std::vector<double> dense_nodes(double lo, double hi) {
  std::vector<double> nodes(kCurveSamples);
  for (int i = 0; i < kCurveSamples; ++i)
    nodes[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (kCurveSamples - 1);
  nodes.front() = lo;
  nodes.back() = hi;
  return nodes;
}

const SceneStyle kCurveStyle{"black", 1.5, ""};
const SceneStyle kAreaStyle{"#1f4e9c", 1.5, ""};
const SceneStyle kTangentStyle{"#b03030", 1.0, ""};
const SceneStyle kAuxStyle{"#777777", 0.75, "4 3"};

}  // namespace

Scene barrow_figure(const PlaneCurve& y, double scale_r, double x0, double delta) {
  if (delta == 0) throw precondition_error("barrow_figure needs delta != 0");
  double lo = y.domain_lo(), hi = y.domain_hi();
  if (x0 <= lo || x0 >= hi || x0 - delta < lo || x0 - delta > hi)
    throw domain_error("x0 and x0 - delta must lie inside the curve domain");

  QuadratrixCurve q = quadratrix_at_nodes(y, scale_r, dense_nodes(lo, hi), 1e-5);
  double y0 = y.value(x0);
  if (y0 == 0) throw domain_error("zero ordinate at x0: subtangent undefined");
  double z0 = q.z_at(x0);
  double slope = y0 / scale_r;
  double subtangent = scale_r * z0 / y0;
  double foot = x0 - subtangent;

  // I sits on the quadratrix below F (toward the foot T); the horizontal cut
  // through I meets the ordinate of F at L and the tangent at K.
  double xi = x0 - delta;
  double zi = q.z_at(xi);
  double xk = slope != 0 ? x0 + (zi - z0) / slope : x0;
  double lk = std::abs(xk - x0), li = std::abs(xi - x0);
  double scale = std::max({std::abs(z0), std::abs(y0), hi - lo});
  double slack = (q.radius_at(xi) + q.radius_at(x0)) / std::max(std::abs(slope), 1e-12) +
                 1e-9 * scale;
  if (lk > li + slack)
    throw Error(ErrKind::accuracy, "triangle point K fell outside the tangent bound (LK > LI)");

  Scene s;
  s.add(SceneSegment{{lo, 0}, {hi, 0}, kAuxStyle});  // axis
  s.add(sample_polyline(y, lo, hi, kCurveStyle));
  s.add(quadratrix_polyline(q, kAreaStyle));

  double tangent_hi = std::min(hi, x0 + 1.5 * std::abs(delta));
  s.add(SceneSegment{{foot, 0}, {tangent_hi, z0 + (tangent_hi - x0) * slope}, kTangentStyle});
  s.add(SceneSegment{{x0, 0}, {x0, std::max(y0, z0)}, kAuxStyle});  // ordinate DF/DE
  s.add(SceneSegment{{x0, zi}, {xi, zi}, kAuxStyle});               // the cut L-I

  s.add(SceneMarker{{x0, 0}, "D"});
  s.add(SceneMarker{{x0, y0}, "E"});
  s.add(SceneMarker{{x0, z0}, "F"});
  s.add(SceneMarker{{foot, 0}, "T"});
  s.add(SceneMarker{{xi, zi}, "I"});
  s.add(SceneMarker{{x0, zi}, "L"});
  s.add(SceneMarker{{xk, zi}, "K"});

  s.metadata = {{"figure", "barrow"}, {"x0", x0}, {"delta", delta}, {"R", scale_r},
                {"subtangent", subtangent}, {"LK", lk}, {"LI", li}};
  return s;
}

Scene leibniz_figure(const PlaneCurve& y, double a_const, double x0, double delta) {
  if (delta == 0) throw precondition_error("leibniz_figure needs delta != 0");
  if (delta < 0) throw precondition_error("leibniz_figure needs delta > 0");
  double lo = y.domain_lo(), hi = y.domain_hi();
  if (x0 <= lo || x0 >= hi || x0 + delta > hi)
    throw domain_error("x0 and x0 + delta must lie inside the curve domain");

  QuadratrixCurve q = quadratrix_at_nodes(y, a_const, dense_nodes(lo, hi), 1e-5);
  double y0 = y.value(x0);
  if (y0 <= 0) throw precondition_error("leibniz_figure needs y > 0 at x0");
  double z0 = q.z_at(x0);
  double slope = y0 / a_const;

  double xe = x0 + delta;
  double z_bar = z0 + delta * slope;   // C-bar: tangent meets the extended ordinate
  double z_curve = q.z_at(xe);         // (C): the curve point itself

  Scene s;
  s.add(SceneSegment{{lo, 0}, {hi, 0}, kAuxStyle});
  s.add(sample_polyline(y, lo, hi, kCurveStyle));
  s.add(quadratrix_polyline(q, kAreaStyle));

  double foot = x0 - a_const * z0 / y0;  // t = z y / a in Leibniz's names
  s.add(SceneSegment{{foot, 0}, {xe, z_bar}, kTangentStyle});
  s.add(SceneSegment{{xe, z0}, {xe, z_curve}, kAuxStyle});  // extended ordinate through E

  s.add(SceneMarker{{x0, z0}, "C"});
  s.add(SceneMarker{{xe, z0}, "E"});
  s.add(SceneMarker{{xe, z_bar}, "C-bar"});
  s.add(SceneMarker{{xe, z_curve}, "(C)"});
  s.add(SceneMarker{{foot, 0}, "T"});

  bool coincide = std::abs(z_bar - z_curve) <= q.radius_at(xe) + 1e-12;
  s.metadata = {{"figure", "leibniz"}, {"x0", x0}, {"delta", delta}, {"a", a_const},
                {"ec_bar", z_bar - z0}, {"e_c", z_curve - z0},
                {"boundary_case", coincide},
                {"omitted", {"G", "GL"}}};  // placement not derivable from the text
  return s;
}

// ---------------------------------------------------------------------------
// SVG rendering
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Bounds {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();
  void take(const ScenePoint& p) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  bool empty() const { return !(min_x <= max_x); }
};

std::string style_attrs(const SceneStyle& st) {
  std::string out = "stroke=\"" + st.stroke + "\" stroke-width=\"" + fmt(st.width) +
                    "\" fill=\"none\"";
  if (!st.dash.empty()) out += " stroke-dasharray=\"" + st.dash + "\"";
  return out;
}

}  // namespace

std::string render_svg(const Scene& s, int width_px, bool rotated) {
  if (width_px < 64) throw precondition_error("render_svg needs width_px >= 64");

  auto world = [&](const ScenePoint& p) {
    return rotated ? ScenePoint{-p.x, -p.y} : p;
  };

  Bounds b;
  for (const auto& prim : s.prims)
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ScenePolyline>) {
            for (const auto& pt : p.pts) b.take(world(pt));
          } else if constexpr (std::is_same_v<T, SceneSegment>) {
            b.take(world(p.p));
            b.take(world(p.q));
          } else {
            b.take(world(p.p));
          }
        },
        prim);
  if (b.empty()) b = Bounds{0, 0, 1, 1};
  double span_x = std::max(b.max_x - b.min_x, 1e-9);
  double span_y = std::max(b.max_y - b.min_y, 1e-9);
  double pad_x = 0.05 * span_x, pad_y = 0.05 * span_y;
  b.min_x -= pad_x;
  b.max_x += pad_x;
  b.min_y -= pad_y;
  b.max_y += pad_y;
  span_x = b.max_x - b.min_x;
  span_y = b.max_y - b.min_y;

  double scale = width_px / span_x;
  double height_px = span_y * scale;
  auto px = [&](const ScenePoint& wp) {
    ScenePoint p = world(wp);
    return ScenePoint{(p.x - b.min_x) * scale, (b.max_y - p.y) * scale};
  };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
                    fmt(width_px) + "\" height=\"" + fmt(height_px) + "\" viewBox=\"0 0 " +
                    fmt(width_px) + " " + fmt(height_px) + "\">\n";
  for (const auto& prim : s.prims)
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ScenePolyline>) {
            svg += "  <polyline points=\"";
            for (std::size_t i = 0; i < p.pts.size(); ++i) {
              ScenePoint q = px(p.pts[i]);
              if (i) svg += " ";
              svg += fmt(q.x) + "," + fmt(q.y);
            }
            svg += "\" " + style_attrs(p.style) + "/>\n";
          } else if constexpr (std::is_same_v<T, SceneSegment>) {
            ScenePoint a = px(p.p), c = px(p.q);
            svg += "  <line x1=\"" + fmt(a.x) + "\" y1=\"" + fmt(a.y) + "\" x2=\"" + fmt(c.x) +
                   "\" y2=\"" + fmt(c.y) + "\" " + style_attrs(p.style) + "/>\n";
          } else {
            ScenePoint a = px(p.p);
            svg += "  <circle cx=\"" + fmt(a.x) + "\" cy=\"" + fmt(a.y) +
                   "\" r=\"2.5\" fill=\"black\"/>\n";
            svg += "  <text x=\"" + fmt(a.x + 8) + "\" y=\"" + fmt(a.y - 8) +
                   "\" font-size=\"10\" font-family=\"sans-serif\">" + p.label + "</text>\n";
          }
        },
        prim);
  svg += "</svg>\n";
  return svg;
}

}  // namespace tangenta
