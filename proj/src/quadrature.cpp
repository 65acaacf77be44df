#include "tangenta/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <set>

#include "tangenta/error.hpp"

namespace tangenta {

// ---------------------------------------------------------------------------
// Partition
// ---------------------------------------------------------------------------

Partition::Partition(std::vector<double> nodes, std::optional<std::vector<double>> tags)
    : nodes_(std::move(nodes)), tags_(std::move(tags)) {
  if (nodes_.size() < 2) throw precondition_error("partition needs at least 2 nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i - 1] < nodes_[i]))
      throw precondition_error("partition nodes must be strictly increasing");
  if (tags_) {
    if (tags_->size() != cells()) throw precondition_error("one tag per cell required");
    for (double t : *tags_)
      if (t < 0 || t > 1) throw precondition_error("tags must lie in [0, 1]");
  }
}

Partition Partition::uniform(double a, double b, std::size_t cells) {
  if (!(a < b) || cells == 0) throw precondition_error("uniform partition needs a < b, cells > 0");
  std::vector<double> nodes(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i)
    nodes[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(cells);
  nodes.front() = a;
  nodes.back() = b;
  return Partition(std::move(nodes));
}

Partition Partition::with_tags(double tag) const {
  return Partition(nodes_, std::vector<double>(cells(), tag));
}

Partition Partition::with_tags(std::vector<double> tags) const {
  return Partition(nodes_, std::move(tags));
}

Partition Partition::split_cell(std::size_t i) const {
  if (i >= cells()) throw precondition_error("split_cell index out of range");
  std::vector<double> nodes = nodes_;
  nodes.insert(nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1,
               nodes_[i] + (nodes_[i + 1] - nodes_[i]) / 2);
  std::optional<std::vector<double>> tags = tags_;
  if (tags) tags->insert(tags->begin() + static_cast<std::ptrdiff_t>(i), (*tags_)[i]);
  return Partition(std::move(nodes), std::move(tags));
}

// ---------------------------------------------------------------------------
// Cell extrema
// ---------------------------------------------------------------------------

namespace {

struct Extrema {
  double m, M;
};

// Infimum/supremum of the curve over [lo, hi]: endpoints, sample
// breakpoints for piecewise-linear curves, and interior critical points
// located by slope sign-change bisection for analytic curves.
Extrema cell_extrema(const PlaneCurve& c, double lo, double hi) {
  double flo = c.value(lo), fhi = c.value(hi);
  Extrema ex{std::min(flo, fhi), std::max(flo, fhi)};

  if (!c.is_analytic()) {
    const auto& s = c.as_sampled();
    auto first = std::upper_bound(s.x.begin(), s.x.end(), lo);
    for (auto it = first; it != s.x.end() && *it < hi; ++it) {
      double v = s.y[static_cast<std::size_t>(it - s.x.begin())];
      ex.m = std::min(ex.m, v);
      ex.M = std::max(ex.M, v);
    }
    return ex;
  }

  // Probe the slope at both ends and the midpoint; a sign change brackets
  // a critical point.
  double probes[3] = {lo, lo + (hi - lo) / 2, hi};
  std::optional<double> slopes[3];
  int known = 0;
  for (int i = 0; i < 3; ++i) {
    try {
      slopes[i] = c.slope(probes[i]);
      ++known;
    } catch (const Error&) {
      // slope undefined at this probe (domain boundary of the derivative)
    }
  }

  if (known == 0) {
    // No slope information at all; fall back to a dense value sample.
    for (int i = 1; i < 16; ++i) {
      double v = c.value(lo + (hi - lo) * i / 16.0);
      ex.m = std::min(ex.m, v);
      ex.M = std::max(ex.M, v);
    }
    return ex;
  }

  auto consider = [&](double x) {
    double v = c.value(x);
    ex.m = std::min(ex.m, v);
    ex.M = std::max(ex.M, v);
  };

  double xtol = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  std::optional<double> prev_s;
  double prev_x = 0;
  for (int i = 0; i < 3; ++i) {
    if (!slopes[i]) continue;
    if (*slopes[i] == 0) consider(probes[i]);
    if (prev_s && ((*prev_s < 0 && *slopes[i] > 0) || (*prev_s > 0 && *slopes[i] < 0))) {
      double a = prev_x, b = probes[i];
      double sa = *prev_s;
      while (b - a > xtol) {
        double mid = a + (b - a) / 2;
        double sm;
        try {
          sm = c.slope(mid);
        } catch (const Error&) {
          break;
        }
        if (sm == 0) break;
        if ((sa < 0) == (sm < 0)) {
          a = mid;
          sa = sm;
        } else {
          b = mid;
        }
      }
      consider(a + (b - a) / 2);
    }
    prev_s = slopes[i];
    prev_x = probes[i];
  }
  return ex;
}

}  // namespace

// ---------------------------------------------------------------------------
// Darboux / tagged / oscillation sums
// ---------------------------------------------------------------------------

std::pair<double, double> darboux_sums(const PlaneCurve& c, const Partition& p) {
  long double lower = 0, upper = 0;
  const auto& xs = p.nodes();
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    Extrema ex = cell_extrema(c, xs[i], xs[i + 1]);
    long double w = static_cast<long double>(xs[i + 1]) - xs[i];
    lower += w * ex.m;
    upper += w * ex.M;
  }
  return {static_cast<double>(lower), static_cast<double>(upper)};
}

double tagged_sum(const PlaneCurve& c, const Partition& p) {
  if (!p.tags()) throw precondition_error("tagged sum requires partition tags");
  long double s = 0;
  const auto& xs = p.nodes();
  const auto& tags = *p.tags();
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    double w = xs[i + 1] - xs[i];
    s += static_cast<long double>(w) * c.value(xs[i] + tags[i] * w);
  }
  return static_cast<double>(s);
}

double oscillation_sum(const PlaneCurve& c, const Partition& p) {
  auto [lower, upper] = darboux_sums(c, p);
  return upper - lower;
}

// ---------------------------------------------------------------------------
// Certified area
// ---------------------------------------------------------------------------

namespace {

struct AdaptiveCell {
  double lo, hi, m, M;
  double key() const { return (hi - lo) * (M - m); }
};

// Uniform nodes over [a, b], unioned with sample breakpoints so
// piecewise-linear cells keep exact endpoint extrema.
std::vector<double> seed_nodes(const PlaneCurve& c, double a, double b, std::size_t cells) {
  std::vector<double> nodes;
  nodes.reserve(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i)
    nodes.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(cells));
  nodes.front() = a;
  nodes.back() = b;
  if (!c.is_analytic()) {
    for (double bp : c.as_sampled().x)
      if (bp > a && bp < b) nodes.push_back(bp);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  }
  return nodes;
}

std::vector<AdaptiveCell> build_cells(const PlaneCurve& c, const std::vector<double>& nodes) {
  std::vector<AdaptiveCell> cells;
  cells.reserve(nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    Extrema ex = cell_extrema(c, nodes[i], nodes[i + 1]);
    cells.push_back({nodes[i], nodes[i + 1], ex.m, ex.M});
  }
  return cells;
}

long double total_oscillation(const std::vector<AdaptiveCell>& cells) {
  long double osc = 0;
  for (const auto& cell : cells)
    osc += static_cast<long double>(cell.hi - cell.lo) * (cell.M - cell.m);
  return osc;
}

CertifiedArea finalize(std::vector<AdaptiveCell> cells) {
  std::sort(cells.begin(), cells.end(),
            [](const AdaptiveCell& a, const AdaptiveCell& b) { return a.lo < b.lo; });
  long double lower = 0, upper = 0;
  for (const auto& cell : cells) {
    long double w = static_cast<long double>(cell.hi) - cell.lo;
    lower += w * cell.m;
    upper += w * cell.M;
  }
  CertifiedArea out;
  out.lower = static_cast<double>(lower);
  out.upper = static_cast<double>(upper);
  out.cells = cells.size();
  return out;
}

}  // namespace

CertifiedArea certify_area(const PlaneCurve& c, double a, double b, double tol,
                           std::size_t max_cells) {
  if (!(tol > 0)) throw precondition_error("certify_area needs tol > 0");
  if (a > b) throw precondition_error("certify_area needs a <= b");
  if (a == b) return CertifiedArea{0, 0, 0};
  if (a < c.domain_lo() || b > c.domain_hi())
    throw domain_error("integration interval outside curve domain");

  // Coarse probe, then a uniform seed sized from the first-order scaling
  // osc ~ 1/n; greedy worst-cell bisection finishes the job.
  // A few-ulp cushion on the target: uniform grids on monotone curves hit
  // the tolerance exactly, and the comparison must not flip on rounding.
  const long double goal =
      static_cast<long double>(tol) * (1 + 8 * std::numeric_limits<double>::epsilon());

  std::vector<AdaptiveCell> cells = build_cells(c, seed_nodes(c, a, b, 64));
  long double osc = total_oscillation(cells);
  if (osc > goal && cells.size() < max_cells) {
    double factor = static_cast<double>(osc) / tol;
    std::size_t target = static_cast<std::size_t>(
        std::min(static_cast<double>(max_cells), std::ceil(cells.size() * factor)));
    if (target > 2 * cells.size()) {
      cells = build_cells(c, seed_nodes(c, a, b, target));
      osc = total_oscillation(cells);
    }
  }

  struct Entry {
    double key, lo;
    std::size_t idx;
    bool operator<(const Entry& other) const {
      if (key != other.key) return key < other.key;
      return lo > other.lo;  // tie-break toward smaller x
    }
  };
  std::priority_queue<Entry> heap;
  for (std::size_t i = 0; i < cells.size(); ++i) heap.push({cells[i].key(), cells[i].lo, i});

  std::size_t splits_since_recount = 0;
  while (osc > goal) {
    if (cells.size() >= max_cells)
      throw Error(ErrKind::accuracy, "cell cap (" + std::to_string(max_cells) +
                                         ") exceeded before reaching tolerance");
    if (heap.empty()) break;
    Entry top = heap.top();
    heap.pop();
    const AdaptiveCell cur = cells[top.idx];
    if (top.lo != cur.lo || top.key != cur.key()) continue;  // stale
    double mid = cur.lo + (cur.hi - cur.lo) / 2;
    if (mid <= cur.lo || mid >= cur.hi) continue;  // cannot split further
    Extrema exl = cell_extrema(c, cur.lo, mid);
    Extrema exr = cell_extrema(c, mid, cur.hi);
    AdaptiveCell left{cur.lo, mid, exl.m, exl.M};
    AdaptiveCell right{mid, cur.hi, exr.m, exr.M};
    osc += static_cast<long double>(left.key()) + right.key() - cur.key();
    cells[top.idx] = left;
    heap.push({left.key(), left.lo, top.idx});
    cells.push_back(right);
    heap.push({right.key(), right.lo, cells.size() - 1});

    if (++splits_since_recount == 65536) {
      osc = total_oscillation(cells);  // shed incremental rounding drift
      splits_since_recount = 0;
    }
  }

  CertifiedArea out = finalize(std::move(cells));
  return out;
}

// ---------------------------------------------------------------------------
// Quadratrix
// ---------------------------------------------------------------------------

QuadratrixCurve::QuadratrixCurve(PlaneCurve base, double scale_r, std::vector<double> xs,
                                 std::vector<double> z_lo, std::vector<double> z_hi)
    : base_(std::move(base)), r_(scale_r), xs_(std::move(xs)), zlo_(std::move(z_lo)),
      zhi_(std::move(z_hi)) {
  if (!(r_ > 0)) throw precondition_error("quadratrix needs R > 0");
  if (xs_.size() < 2 || xs_.size() != zlo_.size() || xs_.size() != zhi_.size())
    throw precondition_error("quadratrix node table is malformed");
}

QuadratrixCurve quadratrix_at_nodes(const PlaneCurve& y, double scale_r,
                                    std::vector<double> nodes, double tol,
                                    std::size_t max_cells) {
  if (!(scale_r > 0)) throw precondition_error("quadratrix needs R > 0");
  if (nodes.size() < 2) throw precondition_error("quadratrix needs at least 2 nodes");
  // Tolerance split proportional to segment width: every node's
  // accumulated radius stays within tol, at the cell cost of a single
  // whole-interval certification.
  double span = nodes.back() - nodes.front();
  std::vector<double> zlo(nodes.size()), zhi(nodes.size());
  long double lo_acc = 0, hi_acc = 0;
  zlo[0] = zhi[0] = 0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    double seg_tol = tol * (nodes[i] - nodes[i - 1]) / span;
    CertifiedArea seg = certify_area(y, nodes[i - 1], nodes[i], seg_tol, max_cells);
    lo_acc += seg.lower;
    hi_acc += seg.upper;
    zlo[i] = static_cast<double>(lo_acc) / scale_r;
    zhi[i] = static_cast<double>(hi_acc) / scale_r;
  }
  return QuadratrixCurve(y, scale_r, std::move(nodes), std::move(zlo), std::move(zhi));
}

QuadratrixCurve quadratrix(const PlaneCurve& y, double scale_r, std::size_t node_count, double tol,
                           std::size_t max_cells) {
  if (node_count < 2) throw precondition_error("quadratrix needs at least 2 nodes");
  double a = y.domain_lo(), b = y.domain_hi();
  std::vector<double> nodes(node_count);
  for (std::size_t i = 0; i < node_count; ++i)
    nodes[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(node_count - 1);
  nodes.front() = a;
  nodes.back() = b;
  return quadratrix_at_nodes(y, scale_r, std::move(nodes), tol, max_cells);
}

namespace {

std::size_t quadratrix_segment(const std::vector<double>& xs, double x) {
  if (x < xs.front() || x > xs.back()) throw domain_error("x outside quadratrix node range");
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  return std::min(i, xs.size() - 2);
}

}  // namespace

double QuadratrixCurve::z_at(double x) const {
  std::size_t i = quadratrix_segment(xs_, x);
  double w = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
  return z_mid(i) + w * (z_mid(i + 1) - z_mid(i));
}

double QuadratrixCurve::radius_at(double x) const {
  std::size_t i = quadratrix_segment(xs_, x);
  return std::max(radius(i), radius(i + 1));
}

std::string QuadratrixCurve::csv() const {
  std::string out = "x,z_lo,z_hi,z_mid\n";
  char buf[160];
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", xs_[i], zlo_[i], zhi_[i],
                  z_mid(i));
    out += buf;
  }
  return out;
}

double barrow_subtangent(const QuadratrixCurve& q, double x) {
  double y = q.base().value(x);
  if (y == 0) throw domain_error("zero ordinate: subtangent undefined at x = " + std::to_string(x));
  return q.scale_r() * q.z_at(x) / y;
}

// ---------------------------------------------------------------------------
// Reports and frames
// ---------------------------------------------------------------------------

nlohmann::json CertifiedArea::to_json() const {
  return {{"lower", lower}, {"upper", upper}, {"value", value()}, {"radius", radius()}};
}

nlohmann::json TheoremReport::to_json() const {
  return {{"theorem", theorem},
          {"inputs", inputs},
          {"probes", probes},
          {"max_violation", max_violation},
          {"tolerance", tolerance},
          {"verdict", holds ? "holds" : "fails"},
          {"details", details},
          {"frame", frame},
          {"notes", notes}};
}

std::string LeibnizFrame::rename(const std::string& symbol, bool to_leibniz) {
  static const std::map<std::string, std::string> fwd = {
      {"x", "y"}, {"y", "z"}, {"z", "x"}, {"R", "a"}};
  static const std::map<std::string, std::string> rev = {
      {"y", "x"}, {"z", "y"}, {"x", "z"}, {"a", "R"}};
  std::size_t head = 0;
  while (head < symbol.size() && std::isalpha(static_cast<unsigned char>(symbol[head]))) ++head;
  std::string prefix = symbol.substr(0, head);
  const auto& table = to_leibniz ? fwd : rev;
  auto it = table.find(prefix);
  if (it == table.end()) return symbol;
  return it->second + symbol.substr(head);
}

const char* LeibnizFrame::subtangent_relation(bool leibniz) {
  // Eq. 2 against the abscissa axis; in Leibniz's frame the subtangent is
  // taken against the conjugate axis, giving his t = zy/a.
  return leibniz ? "t = z*y/a" : "t = R*z/y";
}

namespace {

nlohmann::json rename_keys(const nlohmann::json& obj, bool to_leibniz) {
  if (obj.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (auto it = obj.begin(); it != obj.end(); ++it)
      out[LeibnizFrame::rename(it.key(), to_leibniz)] = rename_keys(it.value(), to_leibniz);
    return out;
  }
  if (obj.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : obj) out.push_back(rename_keys(v, to_leibniz));
    return out;
  }
  return obj;
}

}  // namespace

TheoremReport to_leibniz_frame(TheoremReport report) {
  bool to_leibniz = report.frame == "barrow";
  report.inputs = rename_keys(report.inputs, to_leibniz);
  report.details = rename_keys(report.details, to_leibniz);
  report.frame = to_leibniz ? "leibniz" : "barrow";
  return report;
}

// ---------------------------------------------------------------------------
// Theorem verifiers
// ---------------------------------------------------------------------------

namespace {

enum class Trend { increasing, decreasing, constant, mixed };

Trend probe_trend(const PlaneCurve& c, double a, double b, int n = 65) {
  double scale = 0;
  std::vector<double> ys(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ys[static_cast<std::size_t>(i)] = c.value(a + (b - a) * i / (n - 1));
    scale = std::max(scale, std::abs(ys[static_cast<std::size_t>(i)]));
  }
  double tiny = 1e-12 * std::max(scale, 1.0);
  bool up = false, down = false;
  for (int i = 1; i < n; ++i) {
    double d = ys[static_cast<std::size_t>(i)] - ys[static_cast<std::size_t>(i - 1)];
    if (d > tiny) up = true;
    if (d < -tiny) down = true;
  }
  if (up && down) return Trend::mixed;
  if (up) return Trend::increasing;
  if (down) return Trend::decreasing;
  return Trend::constant;
}

double min_value(const PlaneCurve& c, double a, double b, int n = 65) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) m = std::min(m, c.value(a + (b - a) * i / (n - 1)));
  return m;
}

}  // namespace

TheoremReport verify_prop11(const PlaneCurve& y, double scale_r, double x0,
                            const std::vector<double>& probes, double cert_tol) {
  double lo = y.domain_lo(), hi = y.domain_hi();
  if (!(x0 > lo && x0 < hi)) throw precondition_error("tangency point must be interior");
  if (probes.empty()) throw precondition_error("verify_prop11 needs probes");

  Trend trend = probe_trend(y, lo, hi);
  if (trend == Trend::mixed)
    throw precondition_error("ordinates must continually increase or decrease on the interval");
  if (min_value(y, lo, hi) < 0)
    throw precondition_error("verify_prop11 requires a nonnegative curve");
  bool convex = trend != Trend::decreasing;  // constant degenerates to equality

  std::set<double> node_set(probes.begin(), probes.end());
  node_set.insert(lo);
  node_set.insert(x0);
  for (double p : node_set)
    if (p < lo || p > hi) throw domain_error("probe outside curve domain");
  QuadratrixCurve q =
      quadratrix_at_nodes(y, scale_r, std::vector<double>(node_set.begin(), node_set.end()),
                          cert_tol);

  double z0 = q.z_at(x0);
  double r0 = q.radius_at(x0);
  double slope = y.value(x0) / scale_r;

  double y_scale = 0, z_scale = 0;
  for (std::size_t i = 0; i < q.size(); ++i) z_scale = std::max(z_scale, std::abs(q.z_mid(i)));
  for (double p : probes) y_scale = std::max(y_scale, std::abs(y.value(p)));
  double scale = std::max({y_scale, z_scale, hi - lo});

  TheoremReport rep;
  rep.theorem = "barrow_prop11";
  rep.inputs = {{"curve", y.to_json()}, {"R", scale_r}, {"x0", x0},
                {"case", convex ? "convex" : "concave"}, {"cert_tol", cert_tol}};
  rep.probes = static_cast<int>(probes.size());
  if (trend == Trend::constant)
    rep.notes.push_back("constant ordinates: tangent coincides with the straight quadratrix");

  double max_viol = -std::numeric_limits<double>::infinity();
  double max_slack = 0;
  bool all_ok = true;
  for (double p : probes) {
    double line = z0 + (p - x0) * slope;
    double z = q.z_at(p);
    double slack = q.radius_at(p) + r0 + 1e-9 * scale;
    double viol = convex ? line - z : z - line;
    max_viol = std::max(max_viol, viol);
    max_slack = std::max(max_slack, slack);
    if (viol > slack) all_ok = false;
    rep.details.push_back({{"x", p}, {"line", line}, {"z", z}, {"violation", viol},
                           {"slack", slack}});
  }
  rep.max_violation = max_viol;
  rep.tolerance = max_slack;
  rep.holds = all_ok;
  return rep;
}

TheoremReport verify_prop19(const PlaneCurve& y, double scale_r, const Partition& p,
                            double cert_tol) {
  const Partition tagged = p.tags() ? p : p.with_tags(0.0);  // Barrow's left-edge rectangles
  double sum = tagged_sum(y, tagged);
  double osc = oscillation_sum(y, p);
  CertifiedArea area = certify_area(y, p.lo(), p.hi(), cert_tol);
  double gap = std::abs(sum - area.value());
  double bound = osc + area.radius();

  TheoremReport rep;
  rep.theorem = "barrow_prop19";
  rep.inputs = {{"curve", y.to_json()}, {"R", scale_r}, {"cells", p.cells()},
                {"cert_tol", cert_tol}};
  rep.probes = static_cast<int>(p.cells());
  rep.max_violation = gap - bound;
  rep.tolerance = 0;
  rep.holds = gap <= bound;
  rep.details.push_back({{"rectangle_sum", sum}, {"area", area.to_json()}, {"gap", gap},
                         {"oscillation_sum", osc}, {"bound", bound},
                         {"gap_to_bound_ratio", bound > 0 ? gap / bound : 0.0}});
  return rep;
}

TheoremReport verify_leibniz_tangency(const PlaneCurve& y, double a_const, double x0, double delta,
                                      double cert_tol) {
  if (!(delta > 0)) throw precondition_error("verify_leibniz_tangency needs delta > 0");
  if (!(a_const > 0)) throw precondition_error("verify_leibniz_tangency needs a > 0");
  double hi = y.domain_hi();
  if (x0 < y.domain_lo() || x0 + delta > hi)
    throw domain_error("x0 + delta must stay inside the curve domain");
  Trend trend = probe_trend(y, x0, x0 + delta);
  if (trend == Trend::decreasing || trend == Trend::mixed)
    throw precondition_error("verify_leibniz_tangency needs y increasing near x0");
  if (min_value(y, x0, x0 + delta) <= 0 && trend != Trend::constant)
    throw precondition_error("verify_leibniz_tangency needs y > 0 near x0");

  double y0 = y.value(x0);
  double slope = y0 / a_const;

  TheoremReport rep;
  rep.theorem = "leibniz_tangency";
  rep.inputs = {{"curve", y.to_json()}, {"a", a_const}, {"x0", x0}, {"delta", delta},
                {"cert_tol", cert_tol}};
  rep.probes = 3;
  if (trend == Trend::constant)
    rep.notes.push_back("boundary case: constant ordinates give EC-bar = E(C) exactly");

  bool all_ok = true;
  double max_viol = -std::numeric_limits<double>::infinity();
  double max_slack = 0;
  std::vector<double> ratios;
  double d = delta;
  for (int level = 0; level < 3; ++level, d /= 2) {
    // The tangent-line increment, computed through the line geometry.
    double z_base = 0.0;
    double ec_bar = (z_base + d * slope) - z_base;
    double exact_lhs = a_const * ec_bar;
    double exact_rhs = d * y0;
    double rel = std::abs(exact_lhs - exact_rhs) / std::max(std::abs(exact_rhs), 1e-300);
    if (rel > 1e-12) all_ok = false;

    CertifiedArea inc = certify_area(y, x0, x0 + d, cert_tol);
    double e_c = inc.value() / a_const;
    double rad = inc.radius() / a_const;
    double scale = std::max({std::abs(y0), std::abs(e_c), y.domain_hi() - y.domain_lo()});
    double slack = rad + 1e-9 * scale;
    double viol = ec_bar - e_c;  // must be <= slack; strict < except boundary case
    if (viol > slack) all_ok = false;
    max_viol = std::max(max_viol, viol);
    max_slack = std::max(max_slack, slack);
    double ratio = e_c != 0 ? ec_bar / e_c : 1.0;
    ratios.push_back(ratio);
    rep.details.push_back({{"delta", d}, {"ec_bar", ec_bar}, {"e_c", e_c},
                           {"rectangle_identity_rel_err", rel}, {"violation", viol},
                           {"slack", slack}, {"ratio", ratio}});
  }
  // Under halving the ratio must approach 1 from below (first-order rate).
  for (std::size_t i = 1; i < ratios.size(); ++i)
    if (ratios[i] + 1e-9 < ratios[i - 1]) all_ok = false;

  rep.max_violation = max_viol;
  rep.tolerance = max_slack;
  rep.holds = all_ok;
  return rep;
}

TheoremReport verify_subnormal_area(const PlaneCurve& y, const Partition& p, double cert_tol) {
  double a = p.lo(), b = p.hi();
  double mean_w = (b - a) / static_cast<double>(p.cells());
  for (std::size_t i = 0; i < p.cells(); ++i)
    if (std::abs(p.width(i) - mean_w) > 1e-9 * mean_w)
      throw precondition_error("verify_subnormal_area needs a uniform partition");

  auto discrete_sums = [&](std::size_t cells) {
    std::vector<double> ys(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i)
      ys[i] = y.value(a + (b - a) * static_cast<double>(i) / static_cast<double>(cells));
    double dx = (b - a) / static_cast<double>(cells);
    long double s_rect = 0, s_ydy = 0, abs_scale = 0;
    for (std::size_t i = 1; i <= cells; ++i) {
      double dy = ys[i] - ys[i - 1];
      double subnormal = ys[i] * dy / dx;  // discrete n_i at the right endpoint
      s_rect += static_cast<long double>(dx) * subnormal;
      double term = ys[i] * dy;
      s_ydy += term;
      abs_scale += std::abs(term);
    }
    struct Out {
      double rect, ydy, scale;
    };
    return Out{static_cast<double>(s_rect), static_cast<double>(s_ydy),
               static_cast<double>(abs_scale)};
  };

  double target = 0.5 * (y.value(b) * y.value(b) - y.value(a) * y.value(a));

  TheoremReport rep;
  rep.theorem = "subnormal_area";
  rep.inputs = {{"curve", y.to_json()}, {"cells", p.cells()}, {"target", target},
                {"cert_tol", cert_tol}};
  rep.probes = static_cast<int>(p.cells());

  bool all_ok = true;

  // (i) The two sums are an algebraic rearrangement of each other.
  auto base = discrete_sums(p.cells());
  double identity_gap = std::abs(base.rect - base.ydy);
  double identity_tol = 4 * std::numeric_limits<double>::epsilon() * std::max(base.scale, 1e-300);
  if (identity_gap > identity_tol) all_ok = false;
  rep.details.push_back({{"check", "discrete_identity"}, {"rect_sum", base.rect},
                         {"ydy_sum", base.ydy}, {"gap", identity_gap},
                         {"tolerance", identity_tol}});

  // (ii) Refinement drives the sum to half the squared-ordinate difference.
  double err_n = std::abs(base.rect - target);
  auto twice = discrete_sums(2 * p.cells());
  auto quad = discrete_sums(4 * p.cells());
  double err_2n = std::abs(twice.rect - target);
  double err_4n = std::abs(quad.rect - target);
  double conv_floor = 1e-12 * std::max(std::abs(target), 1.0);
  bool converges = (err_2n <= err_n + conv_floor) && (err_4n <= err_2n + conv_floor);
  if (!converges) all_ok = false;
  rep.details.push_back({{"check", "refinement"}, {"errors", {err_n, err_2n, err_4n}}});

  // (iii) Analytic cross-check: the area under n(x) = y y' itself.
  if (y.is_analytic()) {
    const auto& an = y.as_analytic();
    Expression subnormal_expr =
        Expression::product(an.expr, an.expr.derivative(an.var));
    PlaneCurve nc(AnalyticCurve{subnormal_expr, an.var, an.lo, an.hi});
    // y y' can have a removable singularity at an endpoint (e.g. sqrt curves
    // at y = 0); nudge the endpoint inward and adjust the target to match.
    double ca = a, cb = b;
    for (double step = 1e-12 * (b - a); ca < cb; step *= 10) {
      try {
        nc.value(ca);
        break;
      } catch (const Error&) {
        ca = a + step;
      }
    }
    for (double step = 1e-12 * (b - a); cb > ca; step *= 10) {
      try {
        nc.value(cb);
        break;
      } catch (const Error&) {
        cb = b - step;
      }
    }
    double cert_target = 0.5 * (y.value(cb) * y.value(cb) - y.value(ca) * y.value(ca));
    CertifiedArea area = certify_area(nc, ca, cb, cert_tol);
    double analytic_err = std::abs(area.value() - cert_target);
    if (analytic_err > cert_tol + area.radius()) all_ok = false;
    rep.details.push_back({{"check", "analytic_subnormal_area"}, {"area", area.to_json()},
                           {"error", analytic_err}});
    rep.max_violation = std::max(identity_gap - identity_tol, analytic_err - cert_tol);
  } else {
    rep.notes.push_back("sampled curve: analytic subnormal cross-check skipped");
    rep.max_violation = identity_gap - identity_tol;
  }
  rep.tolerance = 0;
  rep.holds = all_ok;
  return rep;
}

TheoremReport ftc_check(const PlaneCurve& y, double scale_r, const std::vector<double>& grid,
                        double tol, double eta) {
  if (grid.empty()) throw precondition_error("ftc_check needs a grid");
  if (!(tol > 0)) throw precondition_error("ftc_check needs tol > 0");
  double lo = y.domain_lo(), hi = y.domain_hi();
  if (eta <= 0) eta = 1e-3 * (hi - lo);
  std::set<double> node_set{lo};
  for (double g : grid) {
    if (g - eta < lo || g + eta > hi)
      throw domain_error("grid point too close to domain edge for step " + std::to_string(eta));
    node_set.insert(g - eta);
    node_set.insert(g);
    node_set.insert(g + eta);
  }
  QuadratrixCurve q = quadratrix_at_nodes(
      y, scale_r, std::vector<double>(node_set.begin(), node_set.end()), tol / 10);

  TheoremReport rep;
  rep.theorem = "ftc";
  rep.inputs = {{"curve", y.to_json()}, {"R", scale_r}, {"grid_points", grid.size()},
                {"tol", tol}, {"eta", eta}};
  rep.probes = static_cast<int>(grid.size());

  double sup = 0;
  for (double g : grid) {
    double dz = (q.z_at(g + eta) - q.z_at(g - eta)) / (2 * eta);
    double residual = std::abs(scale_r * dz - y.value(g));
    sup = std::max(sup, residual);
    rep.details.push_back({{"x", g}, {"Rz_prime", scale_r * dz}, {"y", y.value(g)},
                           {"residual", residual}});
  }
  rep.max_violation = sup;
  rep.tolerance = tol;
  rep.holds = sup <= tol;
  return rep;
}

}  // namespace tangenta
