#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tangenta/error.hpp"
#include "tangenta/expr.hpp"

using namespace tangenta;

TEST_CASE("parse builds the expected tree shapes") {
  Expression e = Expression::parse("x^2 + 3*x");
  REQUIRE(e.root());
  CHECK(e.root()->kind == NodeKind::sum);
  CHECK(e.root()->lhs->kind == NodeKind::power);
  CHECK(e.root()->lhs->exponent == Rational(2));
  CHECK(e.root()->rhs->kind == NodeKind::product);

  Expression s = Expression::parse("sqrt(2*x)");
  CHECK(s.root()->kind == NodeKind::sqrt_fn);
  CHECK(s.root()->lhs->kind == NodeKind::product);
}

TEST_CASE("parse respects precedence and whitespace") {
  CHECK(Expression::parse("1+2*x^2").str() == Expression::parse(" 1 + 2 * x ^ 2 ").str());
  // power binds tighter than product, product tighter than sum
  Expression e = Expression::parse("1+2*x^2");
  CHECK(e.root()->kind == NodeKind::sum);
  CHECK(e.root()->rhs->kind == NodeKind::product);
  CHECK(e.root()->rhs->rhs->kind == NodeKind::power);
}

TEST_CASE("syntax errors carry byte offsets") {
  try {
    Expression::parse("x +");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 3);
  }
  CHECK_THROWS_AS(Expression::parse("(x"), SyntaxError);
  CHECK_THROWS_AS(Expression::parse(""), SyntaxError);
  try {
    Expression::parse("foo(x)");
    FAIL("expected unknown-name error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::unknown_name);
  }
}

TEST_CASE("eval basics") {
  CHECK(Expression::parse("x^2+3*x").eval({{"x", 2}}) == doctest::Approx(10).epsilon(1e-15));
  CHECK(Expression::parse("sqrt(2*x)").eval({{"x", 8}}) == doctest::Approx(4).epsilon(1e-15));
  CHECK(Expression::parse("sin(x)").eval({{"x", 0.5}}) == doctest::Approx(std::sin(0.5)));
  CHECK(Expression::parse("exp(ln(x))").eval({{"x", 3}}) == doctest::Approx(3));
}

TEST_CASE("eval domain errors") {
  auto kind_of = [](const char* text, double x) {
    try {
      Expression::parse(text).eval({{"x", x}});
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrKind::syntax;  // placeholder for "did not throw"
  };
  CHECK(kind_of("ln(x)", 0) == ErrKind::domain);
  CHECK(kind_of("ln(x)", -1) == ErrKind::domain);
  CHECK(kind_of("1/x", 0) == ErrKind::domain);
  CHECK(kind_of("sqrt(x)", -4) == ErrKind::domain);
  try {
    Expression::parse("x+y").eval({{"x", 1}});
    FAIL("expected unbound variable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::unknown_name);
  }
}

TEST_CASE("derivative matches hand results") {
  Expression d = Expression::parse("x^2 + 3*x").derivative("x");
  CHECK(d.eval({{"x", 5}}) == doctest::Approx(13).epsilon(1e-15));
  CHECK(Expression::parse("7").derivative("x").eval({}) == 0);
  // d/dx sqrt(2x) at x=8 -> 1/sqrt(2x)|_16 = 0.25
  CHECK(Expression::parse("sqrt(2*x)").derivative("x").eval({{"x", 8}}) ==
        doctest::Approx(0.25).epsilon(1e-12));
}

namespace {

// Random ASTs for the round-trip property.
Expression random_expr(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 8);
  switch (pick(rng)) {
    case 0: {
      std::uniform_int_distribution<int> num(-9, 9);
      std::uniform_int_distribution<int> den(1, 9);
      return Expression::constant(Rational(num(rng), den(rng)));
    }
    case 1:
      return Expression::variable("x");
    case 2:
      return Expression::sum(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 3:
      return Expression::difference(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 4:
      return Expression::product(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 5:
      return Expression::quotient(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 6: {
      std::uniform_int_distribution<int> ex(2, 5);
      return Expression::power(random_expr(rng, depth - 1), Rational(ex(rng)));
    }
    case 7: {
      std::uniform_int_distribution<int> fn(0, 4);
      NodeKind kinds[] = {NodeKind::sqrt_fn, NodeKind::ln_fn, NodeKind::exp_fn, NodeKind::sin_fn,
                          NodeKind::cos_fn};
      return Expression::apply(kinds[fn(rng)], random_expr(rng, depth - 1));
    }
    default:
      return Expression::sum(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("print-parse round trip is structurally identical (random ASTs, depth 6)") {
  std::mt19937 rng(20230817);
  for (int i = 0; i < 300; ++i) {
    Expression e = random_expr(rng, 6);
    Expression back = Expression::parse(e.str());
    CAPTURE(e.str());
    CHECK(back.identical_to(e));
  }
}

TEST_CASE("derivative matches central differences away from singularities") {
  const char* exprs[] = {"x^3 - 2*x", "sin(x)*cos(x)", "exp(x)/(1+x^2)", "ln(x)+sqrt(x)",
                         "x^2*sin(x)", "1/x"};
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pt(0.2, 2.5);
  const double h = 1e-6;
  for (const char* text : exprs) {
    Expression e = Expression::parse(text);
    Expression d = e.derivative("x");
    for (int i = 0; i < 20; ++i) {
      double x = pt(rng);
      double fd = (e.eval({{"x", x + h}}) - e.eval({{"x", x - h}})) / (2 * h);
      double sym = d.eval({{"x", x}});
      CAPTURE(text);
      CAPTURE(x);
      CHECK(sym == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("variables and structural equality") {
  Expression e = Expression::parse("x^2 + z*x - 1");
  CHECK(e.variables() == std::vector<std::string>{"x", "z"});
  CHECK(e.identical_to(Expression::parse("x^2+z*x-1")));
  CHECK_FALSE(e.identical_to(Expression::parse("x^2 + x*z - 1")));
}

TEST_CASE("exact rational evaluation") {
  auto v = Expression::parse("x^2/4 + 1/3").eval_exact({{"x", Rational(1, 2)}});
  REQUIRE(v.has_value());
  CHECK(*v == Rational(1, 16) + Rational(1, 3));
  CHECK_FALSE(Expression::parse("sin(x)").eval_exact({{"x", Rational(1)}}).has_value());
}

TEST_CASE("implicit relation validates polynomials") {
  CHECK_NOTHROW(ImplicitRelation(Expression::parse("z^2 - x^3"), "x", "z"));
  CHECK_THROWS_AS(ImplicitRelation(Expression::parse("sin(x) - z"), "x", "z"), Error);
  CHECK_THROWS_AS(ImplicitRelation(Expression::parse("z/x - 1"), "x", "z"), Error);
}

TEST_CASE("barrow_linearize on the spec curves") {
  // explicit parabola
  ImplicitRelation para(Expression::parse("z - x^2"), "x", "z");
  CHECK(barrow_linearize(para, Rational(1), Rational(1)) == Rational(2));
  // semicubical parabola, oracle 3x^2/(2z) = 48/16 = 3
  ImplicitRelation semi(Expression::parse("z^2 - x^3"), "x", "z");
  CHECK(barrow_linearize(semi, Rational(4), Rational(8)) == Rational(3));
  // circle, oracle -x/z = -3/4
  ImplicitRelation circ(Expression::parse("x^2 + z^2 - 25"), "x", "z");
  CHECK(barrow_linearize(circ, Rational(3), Rational(4)) == Rational(-3, 4));
}

TEST_CASE("barrow_linearize error cases") {
  ImplicitRelation circ(Expression::parse("x^2 + z^2 - 25"), "x", "z");
  CHECK_THROWS_AS(barrow_linearize(circ, Rational(1), Rational(1)), Error);  // off curve
  CHECK_THROWS_AS(barrow_linearize(circ, Rational(5), Rational(0)), Error);  // vertical
}

namespace {

// Random bivariate polynomial with rational coefficients, degree <= 4.
Poly2 random_poly(std::mt19937& rng) {
  Poly2 p;
  std::uniform_int_distribution<int> deg(0, 4);
  std::uniform_int_distribution<int> coef(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  int terms = 3 + static_cast<int>(rng() % 4);
  for (int t = 0; t < terms; ++t) {
    int i = deg(rng), j = deg(rng);
    if (i + j > 4) continue;
    int c = coef(rng);
    if (c == 0) c = 1;
    p[{i, j}] += Rational(c, den(rng));
  }
  return p;
}

Expression poly_to_expr(const Poly2& p) {
  Expression out = Expression::constant(Rational(0));
  for (const auto& [key, c] : p) {
    Expression term = Expression::constant(c);
    if (key.first > 0)
      term = Expression::product(term, Expression::power(Expression::variable("x"),
                                                         Rational(key.first)));
    if (key.second > 0)
      term = Expression::product(term, Expression::power(Expression::variable("z"),
                                                         Rational(key.second)));
    out = Expression::sum(out, term);
  }
  return out;
}

}  // namespace

TEST_CASE("barrow_linearize equals the implicit derivative on random relations") {
  // Force each random polynomial through a rational point by solving for
  // the constant term, then compare against -f_x/f_z via differentiate.
  std::mt19937 rng(424242);
  std::uniform_int_distribution<int> coord(1, 5);
  int done = 0;
  while (done < 60) {
    Poly2 p = random_poly(rng);
    Rational x0(coord(rng), coord(rng));
    Rational z0(coord(rng), coord(rng));
    p[{0, 0}] -= poly2_eval(p, x0, z0);
    Expression f = poly_to_expr(p);
    ImplicitRelation rel(f, "x", "z");

    Expression fx = f.derivative("x"), fz = f.derivative("z");
    auto fx_v = fx.eval_exact({{"x", x0}, {"z", z0}});
    auto fz_v = fz.eval_exact({{"x", x0}, {"z", z0}});
    REQUIRE(fx_v.has_value());
    REQUIRE(fz_v.has_value());
    if (*fz_v == 0) continue;  // vertical tangent, skip this draw

    Rational got = barrow_linearize(rel, x0, z0);
    Rational oracle = -*fx_v / *fz_v;
    CAPTURE(f.str());
    CHECK(got == oracle);  // exact rational equality
    ++done;
  }
}
