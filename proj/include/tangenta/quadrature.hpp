#ifndef TANGENTA_QUADRATURE_HPP
#define TANGENTA_QUADRATURE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tangenta/curve.hpp"

namespace tangenta {

// Nodes a = x0 < x1 < ... < xn = b, with optional per-cell tags in [0, 1]
// selecting the evaluation point of the tagged sum.
class Partition {
public:
  Partition(std::vector<double> nodes, std::optional<std::vector<double>> tags = std::nullopt);

  static Partition uniform(double a, double b, std::size_t cells);
  Partition with_tags(double tag) const;           // same tag in every cell
  Partition with_tags(std::vector<double>) const;  // one per cell

  const std::vector<double>& nodes() const { return nodes_; }
  const std::optional<std::vector<double>>& tags() const { return tags_; }
  std::size_t cells() const { return nodes_.size() - 1; }
  double lo() const { return nodes_.front(); }
  double hi() const { return nodes_.back(); }
  double width(std::size_t i) const { return nodes_[i + 1] - nodes_[i]; }

  // New partition with cell i bisected (refinement for the property tests).
  Partition split_cell(std::size_t i) const;

private:
  std::vector<double> nodes_;
  std::optional<std::vector<double>> tags_;
};

// Interval-bounded area value: lower/upper Darboux sums over the final
// partition, certified within their oscillation sum.
struct CertifiedArea {
  double lower = 0;
  double upper = 0;
  std::size_t cells = 0;
  double value() const { return lower + (upper - lower) / 2; }
  double radius() const { return (upper - lower) / 2; }
  nlohmann::json to_json() const;
};

// Area curve z(x) = area(a..x) / R with per-node certified bounds.
class QuadratrixCurve {
public:
  QuadratrixCurve(PlaneCurve base, double scale_r, std::vector<double> xs,
                  std::vector<double> z_lo, std::vector<double> z_hi);

  const PlaneCurve& base() const { return base_; }
  double scale_r() const { return r_; }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& z_lo() const { return zlo_; }
  const std::vector<double>& z_hi() const { return zhi_; }
  std::size_t size() const { return xs_.size(); }

  double z_mid(std::size_t i) const { return zlo_[i] + (zhi_[i] - zlo_[i]) / 2; }
  double radius(std::size_t i) const { return (zhi_[i] - zlo_[i]) / 2; }

  // Linear interpolation of midpoints / conservative radius between nodes.
  double z_at(double x) const;
  double radius_at(double x) const;

  std::string csv() const;  // header "x,z_lo,z_hi,z_mid"

private:
  PlaneCurve base_;
  double r_;
  std::vector<double> xs_, zlo_, zhi_;
};

// Machine verdict for one theorem check.
struct TheoremReport {
  std::string theorem;
  nlohmann::json inputs = nlohmann::json::object();
  int probes = 0;
  double max_violation = 0;
  double tolerance = 0;
  bool holds = false;
  nlohmann::json details = nlohmann::json::array();
  std::string frame = "barrow";
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
};

// Renaming between the canonical (Barrow) symbols and Leibniz's: the
// forward direction sends (x, y, z, R) to (y, z, x, a).
struct LeibnizFrame {
  static std::string rename(const std::string& symbol, bool to_leibniz);
  // Eq. form of the subtangent relation in each frame.
  static const char* subtangent_relation(bool leibniz);
};

// Toggles the frame of a report; applying twice is the identity.
TheoremReport to_leibniz_frame(TheoremReport report);

// --- Riemann / Darboux machinery ------------------------------------------

// (lower, upper) with cell infima/suprema from endpoints plus interior
// critical points located by slope sign-change bisection.
std::pair<double, double> darboux_sums(const PlaneCurve& c, const Partition& p);

// S = sum delta_i f(x_{i-1} + eps_i delta_i); requires tags.
double tagged_sum(const PlaneCurve& c, const Partition& p);

// upper - lower, computed from the same sums (bit-identical by
// construction).
double oscillation_sum(const PlaneCurve& c, const Partition& p);

inline constexpr std::size_t kDefaultCellCap = 1'000'000;

// Adaptive refinement: always bisect the cell with the largest
// delta_i * D_i (ties toward smaller x) until the oscillation sum is
// within tol. Throws Error(accuracy) when the cell cap is exceeded.
CertifiedArea certify_area(const PlaneCurve& c, double a, double b, double tol,
                           std::size_t max_cells = kDefaultCellCap);

QuadratrixCurve quadratrix(const PlaneCurve& y, double scale_r, std::size_t node_count, double tol,
                           std::size_t max_cells = kDefaultCellCap);
QuadratrixCurve quadratrix_at_nodes(const PlaneCurve& y, double scale_r, std::vector<double> nodes,
                                    double tol, std::size_t max_cells = kDefaultCellCap);

// t = R z(x) / y(x), z taken as the certified midpoint.
double barrow_subtangent(const QuadratrixCurve& q, double x);

// --- Theorem verifiers ------------------------------------------------------

TheoremReport verify_prop11(const PlaneCurve& y, double scale_r, double x0,
                            const std::vector<double>& probes, double cert_tol = 1e-5);

TheoremReport verify_prop19(const PlaneCurve& y, double scale_r, const Partition& p,
                            double cert_tol = 1e-6);

TheoremReport verify_leibniz_tangency(const PlaneCurve& y, double a_const, double x0, double delta,
                                      double cert_tol = 1e-6);

TheoremReport verify_subnormal_area(const PlaneCurve& y, const Partition& p,
                                    double cert_tol = 1e-6);

TheoremReport ftc_check(const PlaneCurve& y, double scale_r, const std::vector<double>& grid,
                        double tol, double eta = 0);

}  // namespace tangenta

#endif
