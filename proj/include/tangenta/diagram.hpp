#ifndef TANGENTA_DIAGRAM_HPP
#define TANGENTA_DIAGRAM_HPP

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "tangenta/curve.hpp"

namespace tangenta {

struct ScenePoint {
  double x = 0, y = 0;
};

struct SceneStyle {
  std::string stroke = "black";
  double width = 1.0;
  std::string dash;  // SVG dasharray, empty for solid
};

struct ScenePolyline {
  std::vector<ScenePoint> pts;
  SceneStyle style;
};

struct SceneSegment {
  ScenePoint p, q;
  SceneStyle style;
};

struct SceneMarker {
  ScenePoint p;
  std::string label;
};

// Draw-ordered primitive list in world coordinates (ordinate upward),
// with free-form metadata describing the construction.
struct Scene {
  std::vector<std::variant<ScenePolyline, SceneSegment, SceneMarker>> prims;
  nlohmann::json metadata = nlohmann::json::object();

  void add(ScenePolyline p) { prims.push_back(std::move(p)); }
  void add(SceneSegment s) { prims.push_back(std::move(s)); }
  void add(SceneMarker m) { prims.push_back(std::move(m)); }
};

// Fig. 1 layout: base curve, area curve, tangent through (x0, z(x0)) with
// its foot T, and the finite triangle I, L, K at offset delta. Checks that
// K stays on the tangent side of the area curve (LK <= LI up to
// certification slack) and records both lengths in the metadata.
Scene barrow_figure(const PlaneCurve& y, double scale_r, double x0, double delta);

// Fig. 2 layout with the corrected geometry: both the tangent point
// C-bar and the curve point (C) at abscissa x0 + delta are drawn, with
// ordinate(C-bar) < ordinate((C)) for strictly increasing curves.
Scene leibniz_figure(const PlaneCurve& y, double a_const, double x0, double delta);

// Deterministic SVG 1.1: fixed 6-significant-digit formatting, viewBox =
// bounding box padded 5%, labels offset 8 px NE. rotated renders the
// 180-degree-turned orientation.
std::string render_svg(const Scene& s, int width_px, bool rotated = false);

}  // namespace tangenta

#endif
