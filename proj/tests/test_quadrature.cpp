#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tangenta/error.hpp"
#include "tangenta/quadrature.hpp"

using namespace tangenta;

namespace {

PlaneCurve analytic(const char* text, double lo, double hi) {
  return PlaneCurve::analytic(text, lo, hi);
}

}  // namespace

TEST_CASE("partition construction and invariants") {
  Partition p = Partition::uniform(0, 1, 4);
  CHECK(p.cells() == 4);
  CHECK(p.lo() == 0);
  CHECK(p.hi() == 1);
  double total = 0;
  for (std::size_t i = 0; i < p.cells(); ++i) total += p.width(i);
  CHECK(total == doctest::Approx(1).epsilon(1e-15));

  CHECK_THROWS_AS(Partition({1.0, 0.5}), Error);
  CHECK_THROWS_AS(Partition({0.0}), Error);
  CHECK_THROWS_AS(Partition::uniform(0, 1, 4).with_tags(1.5), Error);
  CHECK(Partition::uniform(0, 1, 4).split_cell(0).cells() == 5);
}

TEST_CASE("darboux sums on the hand examples") {
  auto [l1, u1] = darboux_sums(analytic("x", 0, 1), Partition::uniform(0, 1, 2));
  CHECK(l1 == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(u1 == doctest::Approx(0.75).epsilon(1e-15));

  auto [l2, u2] = darboux_sums(analytic("1", 0, 1), Partition::uniform(0, 1, 7));
  CHECK(l2 == doctest::Approx(1).epsilon(1e-15));
  CHECK(u2 == doctest::Approx(1).epsilon(1e-15));

  auto [l3, u3] = darboux_sums(analytic("x^2", 0, 1), Partition::uniform(0, 1, 4));
  CHECK(l3 == doctest::Approx(0.21875).epsilon(1e-15));
  CHECK(u3 == doctest::Approx(0.46875).epsilon(1e-15));
}

TEST_CASE("interior critical points are found") {
  // sup of sin over a cell containing pi/2 must be 1, not an endpoint value
  auto [lower, upper] = darboux_sums(analytic("sin(x)", 0, 3.2), Partition({1.0, 2.0}));
  CHECK(upper == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(lower == doctest::Approx(std::sin(1.0)).epsilon(1e-12));
}

TEST_CASE("tagged sums") {
  Partition p = Partition::uniform(0, 1, 4);
  CHECK(tagged_sum(analytic("x", 0, 1), p.with_tags(0.0)) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(tagged_sum(analytic("x", 0, 1), p.with_tags(1.0)) == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(tagged_sum(analytic("3", 0, 1), p.with_tags(0.37)) == doctest::Approx(3).epsilon(1e-15));
  CHECK_THROWS_AS(tagged_sum(analytic("x", 0, 1), p), Error);  // no tags
}

TEST_CASE("oscillation sums") {
  CHECK(oscillation_sum(analytic("x", 0, 1), Partition::uniform(0, 1, 4)) ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK(oscillation_sum(analytic("5", 0, 1), Partition::uniform(0, 1, 9)) == 0);
  CHECK(oscillation_sum(analytic("x^2", 0, 1), Partition::uniform(0, 1, 4)) ==
        doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("property: lower <= tagged <= upper and osc = upper - lower, bit-identical") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> tag(0, 1);
  const char* curves[] = {"x^2 - x", "sin(x)", "exp(x)/3", "x^3 - 2*x^2 + 1"};
  for (const char* text : curves) {
    PlaneCurve c = analytic(text, 0, 2);
    for (std::size_t n : {3u, 7u, 16u}) {
      Partition p = Partition::uniform(0, 2, n);
      std::vector<double> tags(n);
      for (auto& t : tags) t = tag(rng);
      auto [lower, upper] = darboux_sums(c, p);
      double s = tagged_sum(c, p.with_tags(tags));
      CAPTURE(text);
      CHECK(lower <= s + 1e-12);
      CHECK(s <= upper + 1e-12);
      CHECK(oscillation_sum(c, p) == upper - lower);  // exact, same computation
    }
  }
}

TEST_CASE("property: splitting a cell tightens the bounds") {
  std::mt19937 rng(7);
  const char* curves[] = {"sin(x)*x", "x^2", "2 - x"};
  for (const char* text : curves) {
    PlaneCurve c = analytic(text, 0, 2);
    Partition p = Partition::uniform(0, 2, 5);
    for (int step = 0; step < 10; ++step) {
      auto [l0, u0] = darboux_sums(c, p);
      Partition q = p.split_cell(rng() % p.cells());
      auto [l1, u1] = darboux_sums(c, q);
      CAPTURE(text);
      CHECK(l1 >= l0 - 1e-13);
      CHECK(u1 <= u0 + 1e-13);
      p = q;
    }
  }
}

TEST_CASE("monotone oscillation identity on uniform partitions") {
  // |f(b) - f(a)| * d, exactly (dyadic widths, dyadic-exact values)
  struct Case {
    const char* f;
    double a, b;
  } cases[] = {{"x", 0, 1}, {"x^2", 0, 1}, {"2 - x", 0, 2}};
  for (const auto& cs : cases) {
    PlaneCurve c = analytic(cs.f, cs.a, cs.b);
    for (std::size_t n : {4u, 8u, 32u}) {
      double d = (cs.b - cs.a) / static_cast<double>(n);
      double expect = std::abs(c.value(cs.b) - c.value(cs.a)) * d;
      CAPTURE(cs.f);
      CHECK(oscillation_sum(c, Partition::uniform(cs.a, cs.b, n)) ==
            doctest::Approx(expect).epsilon(4e-16));
    }
  }
}

TEST_CASE("certify_area on the oracle values") {
  CertifiedArea a = certify_area(analytic("x", 0, 1), 0, 1, 1e-6);
  CHECK(a.radius() <= 5.0000001e-7);
  CHECK(std::abs(a.value() - 0.5) <= a.radius() + 1e-15);

  CertifiedArea b = certify_area(analytic("x^2", 0, 1), 0, 1, 1e-4);
  CHECK(std::abs(b.value() - 1.0 / 3.0) <= b.radius() + 1e-15);

  // tol tighter than the default cell cap allows; widen the cap
  CertifiedArea s = certify_area(analytic("sin(x)", 0, 3.14159265358979324), 0,
                                 3.14159265358979324, 1e-6, 8'000'000);
  CHECK(s.radius() <= 5.0000001e-7);
  CHECK(std::abs(s.value() - 2.0) <= 1e-6);
}

TEST_CASE("certify_area edge cases") {
  CHECK(certify_area(analytic("x", 0, 1), 0.5, 0.5, 1e-6).value() == 0);
  CHECK_THROWS_AS(certify_area(analytic("x", 0, 1), 0, 1, 0.0), Error);
  CHECK_THROWS_AS(certify_area(analytic("x", 0, 1), 0, 2, 1e-6), Error);  // outside domain
  try {
    certify_area(analytic("sin(100*x)", 0, 3), 0, 3, 1e-9, 200);  // tiny cap
    FAIL("expected cap error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::accuracy);
  }
}

TEST_CASE("quadratrix on the spec examples") {
  QuadratrixCurve q1 = quadratrix(analytic("1", 0, 2), 1, 9, 1e-6);
  for (std::size_t i = 0; i < q1.size(); ++i)
    CHECK(q1.z_mid(i) == doctest::Approx(q1.xs()[i]).epsilon(1e-9));

  QuadratrixCurve qx = quadratrix(analytic("x", 0, 1), 1, 11, 1e-4);
  for (std::size_t i = 0; i < qx.size(); ++i) {
    double x = qx.xs()[i];
    CHECK(std::abs(qx.z_mid(i) - x * x / 2) <= 1e-4);
  }

  QuadratrixCurve qr2 = quadratrix(analytic("x", 0, 1), 2, 11, 1e-4);
  for (std::size_t i = 0; i < qx.size(); ++i)
    CHECK(qr2.z_mid(i) == doctest::Approx(qx.z_mid(i) / 2).epsilon(1e-9));

  CHECK(qx.z_mid(0) == 0);  // z(a) = 0
  // nondecreasing for y >= 0
  for (std::size_t i = 1; i < qx.size(); ++i) CHECK(qx.z_mid(i) >= qx.z_mid(i - 1));
}

TEST_CASE("quadratrix csv format") {
  QuadratrixCurve q = quadratrix(analytic("1", 0, 1), 1, 3, 1e-6);
  std::string csv = q.csv();
  CHECK(csv.rfind("x,z_lo,z_hi,z_mid\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 nodes
  CHECK(q.csv() == csv);  // deterministic
}

TEST_CASE("barrow_subtangent") {
  QuadratrixCurve q1 = quadratrix(analytic("1", 0, 2), 1, 17, 1e-8);
  CHECK(barrow_subtangent(q1, 1.5) == doctest::Approx(1.5).epsilon(1e-7));

  QuadratrixCurve qx = quadratrix(analytic("x", 0, 2), 1, 41, 1e-5);
  CHECK(barrow_subtangent(qx, 1.0) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK_THROWS_AS(barrow_subtangent(qx, 0.0), Error);  // zero ordinate
}

TEST_CASE("verify_prop11 on y = x (spec numbers)") {
  TheoremReport rep = verify_prop11(analytic("x", 0, 2), 1, 1, {0.5, 1.0, 1.5}, 1e-6);
  CHECK(rep.holds);
  CHECK(rep.frame == "barrow");
  // z = x^2/2; tangent z = x - 1/2: line {0, 0.5, 1} vs curve {0.125, 0.5, 1.125}
  CHECK(rep.details[0]["line"].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rep.details[0]["z"].get<double>() == doctest::Approx(0.125).epsilon(1e-4));
  CHECK(rep.details[1]["violation"].get<double>() <= rep.details[1]["slack"].get<double>());
  CHECK(rep.details[2]["z"].get<double>() == doctest::Approx(1.125).epsilon(1e-4));
}

TEST_CASE("verify_prop11 degenerate and refused cases") {
  TheoremReport flat = verify_prop11(analytic("1", 0, 2), 1, 1, {0.5, 1.5}, 1e-6);
  CHECK(flat.holds);
  CHECK_FALSE(flat.notes.empty());

  CHECK_THROWS_AS(verify_prop11(analytic("sin(x)", 0, 6), 1, 3, {1.0, 5.0}, 1e-6), Error);
}

TEST_CASE("verify_prop11 concave case for decreasing y") {
  TheoremReport rep = verify_prop11(analytic("2 - x", 0, 1.9), 1, 1, {0.5, 1.0, 1.5}, 1e-6);
  CHECK(rep.inputs["case"] == "concave");
  CHECK(rep.holds);
}

TEST_CASE("verify_prop19") {
  TheoremReport flat = verify_prop19(analytic("1", 0, 1), 1, Partition::uniform(0, 1, 7));
  CHECK(flat.holds);
  CHECK(flat.details[0]["gap"].get<double>() <= 1e-9);

  TheoremReport rep = verify_prop19(analytic("x", 0, 1), 1, Partition::uniform(0, 1, 10));
  CHECK(rep.holds);
  CHECK(rep.details[0]["rectangle_sum"].get<double>() == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(rep.details[0]["gap"].get<double>() == doctest::Approx(0.05).epsilon(1e-4));
  CHECK(rep.details[0]["oscillation_sum"].get<double>() == doctest::Approx(0.1).epsilon(1e-12));

  // gap halves when the partition is refined
  TheoremReport fine = verify_prop19(analytic("x", 0, 1), 1, Partition::uniform(0, 1, 20));
  double ratio = rep.details[0]["gap"].get<double>() / fine.details[0]["gap"].get<double>();
  CHECK(ratio > 1.8);
  CHECK(ratio < 2.2);
}

TEST_CASE("verify_leibniz_tangency on y = x (spec numbers)") {
  TheoremReport rep = verify_leibniz_tangency(analytic("x", 0, 2), 1, 1, 0.5);
  CHECK(rep.holds);
  CHECK(rep.details[0]["ec_bar"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.details[0]["e_c"].get<double>() == doctest::Approx(0.625).epsilon(1e-4));
  // ratios 1/(1 + delta/(2 x0)) increase toward 1 under halving
  double r0 = rep.details[0]["ratio"].get<double>();
  double r1 = rep.details[1]["ratio"].get<double>();
  double r2 = rep.details[2]["ratio"].get<double>();
  CHECK(r0 == doctest::Approx(0.8).epsilon(1e-3));
  CHECK(r1 > r0);
  CHECK(r2 > r1);
  CHECK(r2 < 1.0 + 1e-9);
}

TEST_CASE("verify_leibniz_tangency boundary and error cases") {
  TheoremReport flat = verify_leibniz_tangency(analytic("2", 0, 2), 1, 0.5, 0.5);
  CHECK(flat.holds);
  CHECK_FALSE(flat.notes.empty());  // boundary case note

  CHECK_THROWS_AS(verify_leibniz_tangency(analytic("x", 0, 2), 1, 1, -0.5), Error);
  CHECK_THROWS_AS(verify_leibniz_tangency(analytic("2 - x", 0, 1.9), 1, 1, 0.5), Error);
}

TEST_CASE("verify_subnormal_area on the spec examples") {
  TheoremReport rep = verify_subnormal_area(analytic("x", 0, 1), Partition::uniform(0, 1, 4));
  CHECK(rep.holds);
  CHECK(rep.details[0]["rect_sum"].get<double>() == doctest::Approx(0.625).epsilon(1e-15));

  // sums 1/2 + 1/(2n) at n in {4, 8, 16}
  for (std::size_t n : {4u, 8u, 16u}) {
    TheoremReport r = verify_subnormal_area(analytic("x", 0, 1), Partition::uniform(0, 1, n));
    double expect = 0.5 + 0.5 / static_cast<double>(n);
    CHECK(r.details[0]["rect_sum"].get<double>() == doctest::Approx(expect).epsilon(1e-14));
  }

  // constant-subnormal parabola: area of n(x) = 1 over [0,2] is 2
  TheoremReport par =
      verify_subnormal_area(analytic("sqrt(2*x)", 0, 2), Partition::uniform(0, 2, 64));
  CHECK(par.holds);
  CHECK(par.details[2]["check"] == "analytic_subnormal_area");
  CHECK(par.details[2]["area"]["value"].get<double>() == doctest::Approx(2).epsilon(1e-6));
}

TEST_CASE("subnormal discrete identity holds to 4 ulps on random sampled curves") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> val(-3, 3);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t n = 8 + rng() % 24;
    std::vector<double> xs(n + 1), ys(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      xs[i] = static_cast<double>(i) / static_cast<double>(n);
      ys[i] = val(rng);
    }
    PlaneCurve c = PlaneCurve::sampled(xs, ys);
    TheoremReport rep = verify_subnormal_area(c, Partition::uniform(0, 1, n));
    double gap = rep.details[0]["gap"].get<double>();
    double tol = rep.details[0]["tolerance"].get<double>();
    CHECK(gap <= tol);
  }
}

TEST_CASE("ftc_check") {
  TheoremReport flat = ftc_check(analytic("1", 0, 2), 1, {0.5, 1.0, 1.5}, 1e-9);
  CHECK(flat.holds);

  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) grid.push_back(0.98 * i / 51.0 + 0.01);
  TheoremReport lin = ftc_check(analytic("x", 0, 1), 1, grid, 1e-4);
  CHECK(lin.holds);

  std::vector<double> sgrid;
  for (int i = 1; i <= 30; ++i) sgrid.push_back(0.15 + 2.8 * i / 31.0);
  TheoremReport sine = ftc_check(analytic("sin(x)", 0.1, 3), 1, sgrid, 1e-4);
  CHECK(sine.holds);

  CHECK_THROWS_AS(ftc_check(analytic("x", 0, 1), 1, {0.0}, 1e-4), Error);  // edge point
  CHECK_THROWS_AS(ftc_check(analytic("x", 0, 1), 1, {}, 1e-4), Error);
}

TEST_CASE("ftc residual shrinks at second order under eta refinement") {
  std::vector<double> grid = {0.7, 1.1, 1.6};
  double prev = -1;
  for (double eta : {2e-2, 1e-2, 5e-3}) {
    TheoremReport rep = ftc_check(analytic("exp(x)", 0, 2), 1, grid, 1.0, eta);
    double sup = rep.max_violation;
    if (prev > 0) {
      double ratio = prev / sup;
      CHECK(ratio > 3.0);  // ~4x per halving
      CHECK(ratio < 5.5);
    }
    prev = sup;
  }
}

TEST_CASE("leibniz frame renaming") {
  CHECK(LeibnizFrame::rename("x", true) == "y");
  CHECK(LeibnizFrame::rename("y", true) == "z");
  CHECK(LeibnizFrame::rename("z", true) == "x");
  CHECK(LeibnizFrame::rename("R", true) == "a");
  CHECK(LeibnizFrame::rename("y", false) == "x");
  CHECK(LeibnizFrame::rename("x0", true) == "y0");
  CHECK(LeibnizFrame::rename("tol", true) == "tol");
  CHECK(std::string(LeibnizFrame::subtangent_relation(false)) == "t = R*z/y");
  CHECK(std::string(LeibnizFrame::subtangent_relation(true)) == "t = z*y/a");
}

TEST_CASE("to_leibniz_frame toggles and round-trips") {
  TheoremReport rep = verify_prop19(analytic("x", 0, 1), 1, Partition::uniform(0, 1, 10));
  TheoremReport leib = to_leibniz_frame(rep);
  CHECK(leib.frame == "leibniz");
  CHECK(leib.inputs.contains("a"));       // R renamed
  CHECK_FALSE(leib.inputs.contains("R"));
  TheoremReport back = to_leibniz_frame(leib);
  CHECK(back.frame == "barrow");
  CHECK(back.to_json() == rep.to_json());  // applying twice is the identity
}

TEST_CASE("theorem report JSON shape") {
  TheoremReport rep = verify_prop19(analytic("x", 0, 1), 1, Partition::uniform(0, 1, 10));
  nlohmann::json j = rep.to_json();
  for (const char* key : {"theorem", "inputs", "probes", "max_violation", "tolerance", "verdict",
                          "details", "frame"})
    CHECK(j.contains(key));
  CHECK(j["verdict"] == "holds");
}
