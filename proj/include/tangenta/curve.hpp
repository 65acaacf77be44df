#ifndef TANGENTA_CURVE_HPP
#define TANGENTA_CURVE_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tangenta/expr.hpp"

namespace tangenta {

enum class Shape { convex, concave, neither };

struct AnalyticCurve {
  Expression expr;
  std::string var = "x";
  double lo = 0, hi = 1;
};

// Piecewise-linear interpolant through strictly increasing abscissas.
struct SampledCurve {
  std::vector<double> x;
  std::vector<double> y;
};

// A plane curve over a closed interval, with ordinate and slope access in
// the canonical frame (abscissa rightward, ordinate upward).
class PlaneCurve {
public:
  explicit PlaneCurve(AnalyticCurve analytic);
  explicit PlaneCurve(SampledCurve sampled);

  static PlaneCurve analytic(const std::string& expr_text, double lo, double hi,
                             const std::string& var = "x");
  static PlaneCurve sampled(std::vector<double> x, std::vector<double> y);

  double domain_lo() const;
  double domain_hi() const;
  bool is_analytic() const { return std::holds_alternative<AnalyticCurve>(rep_); }
  const AnalyticCurve& as_analytic() const { return std::get<AnalyticCurve>(rep_); }
  const SampledCurve& as_sampled() const { return std::get<SampledCurve>(rep_); }

  // Ordinate at x; throws Error(domain) outside [lo, hi].
  double value(double x) const;

  // Slope at x: symbolic derivative for analytic curves, neighbor central
  // difference at interior sample nodes, segment slope elsewhere.
  double slope(double x) const;

  nlohmann::json to_json() const;
  static PlaneCurve from_json(const nlohmann::json& j);

private:
  std::variant<AnalyticCurve, SampledCurve> rep_;
  Expression deriv_;  // cached symbolic derivative (analytic only)
};

// Classical tangent quantities at one point of a curve.
struct TangentData {
  double x = 0;           // abscissa
  double ordinate = 0;    // c
  double slope = 0;       // c'
  double subtangent = 0;  // t = c / c', signed
  double subnormal = 0;   // n = c * c', signed
  double foot = 0;        // T = x - t
  bool zero_ordinate = false;  // curve through the axis; t reported as 0
};

// Finite right triangle with legs dx, dc and the chord as hypotenuse.
struct CharacteristicTriangle {
  double dx = 0;
  double dc = 0;
  double chord = 0;
};

double eval_curve(const PlaneCurve& c, double x);
double slope_at(const PlaneCurve& c, double x);

// Throws Error(domain) for an undefined slope and Error(precondition)
// ("zero slope") when the subtangent would be infinite.
TangentData tangent_data_at(const PlaneCurve& c, double x);

CharacteristicTriangle characteristic_triangle(const PlaneCurve& c, double x, double dx);

// Classifies by second differences on a uniform probe grid; mixed signs
// beyond 1e-12 * scale give Shape::neither.
Shape convexity_probe(const PlaneCurve& c, double a, double b, int n_probes);

const char* shape_name(Shape s);

}  // namespace tangenta

#endif
