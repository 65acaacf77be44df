#ifndef TANGENTA_EXPR_HPP
#define TANGENTA_EXPR_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tangenta/rational.hpp"

namespace tangenta {

enum class NodeKind {
  constant,
  variable,
  sum,
  difference,
  product,
  quotient,
  power,  // child ^ rational exponent
  sqrt_fn,
  ln_fn,
  exp_fn,
  sin_fn,
  cos_fn,
};

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

// One AST node. Nodes are immutable and shared; an Expression is a pointer
// to the root of such a tree.
struct ExprNode {
  NodeKind kind;

  // constant: exact value when the input was rational, double otherwise
  std::optional<Rational> exact;
  double approx = 0.0;

  std::string name;  // variable
  NodePtr lhs, rhs;  // children (rhs null for unary functions)
  Rational exponent; // power
};

using Bindings = std::map<std::string, double>;
using ExactBindings = std::map<std::string, Rational>;

class Expression {
public:
  Expression() = default;
  explicit Expression(NodePtr root) : root_(std::move(root)) {}

  // Parses text in the CLI grammar. Throws SyntaxError with a byte offset,
  // or Error(unknown_name) for an unknown function name.
  static Expression parse(std::string_view text);

  // Prints to text that parses back to a structurally identical tree.
  std::string str() const;

  // IEEE-double evaluation; throws Error(domain) naming the offending
  // subexpression, Error(unknown_name) for an unbound variable.
  double eval(const Bindings& bindings) const;

  // Exact evaluation over the rationals. Empty when the tree contains a
  // transcendental node, an inexact constant, or a non-integer power.
  std::optional<Rational> eval_exact(const ExactBindings& bindings) const;

  // Symbolic derivative, lightly simplified (constant folding, 0/1
  // elimination). Correctness contract is numerical.
  Expression derivative(const std::string& var) const;

  // Free variables, sorted.
  std::vector<std::string> variables() const;

  // Structural equality (same shape, same constants).
  bool identical_to(const Expression& other) const;

  const NodePtr& root() const { return root_; }
  bool empty() const { return root_ == nullptr; }

  // Node factories.
  static Expression constant(Rational value);
  static Expression constant(double value);
  static Expression variable(std::string name);
  static Expression sum(Expression a, Expression b);
  static Expression difference(Expression a, Expression b);
  static Expression product(Expression a, Expression b);
  static Expression quotient(Expression a, Expression b);
  static Expression power(Expression base, Rational exponent);
  static Expression apply(NodeKind fn, Expression arg);

private:
  NodePtr root_;
};

// Sparse bivariate polynomial with exact coefficients, keyed by
// (degree in first var, degree in second var).
using Poly2 = std::map<std::pair<int, int>, Rational>;

Poly2 poly2_add(const Poly2& a, const Poly2& b);
Poly2 poly2_sub(const Poly2& a, const Poly2& b);
Poly2 poly2_mul(const Poly2& a, const Poly2& b);
Rational poly2_eval(const Poly2& p, const Rational& x, const Rational& z);

// f(x, z) = 0 with f polynomial in both variables; the carrier for the
// a-e linearization rules.
class ImplicitRelation {
public:
  // Validates that expr is polynomial in {abscissa, ordinate} with exact
  // rational coefficients; throws Error(precondition) otherwise.
  ImplicitRelation(Expression expr, std::string abscissa, std::string ordinate);

  const Expression& expr() const { return expr_; }
  const std::string& abscissa() const { return abscissa_; }
  const std::string& ordinate() const { return ordinate_; }
  const Poly2& poly() const { return poly_; }

private:
  Expression expr_;
  std::string abscissa_, ordinate_;
  Poly2 poly_;
};

// Barrow's three rules at the end of Lecture 10: substitute x0 - a and
// z0 - e, drop the constant term and every term of combined degree >= 2
// in (a, e), and solve the linear remainder for the slope e/a. Exact.
// Throws Error(precondition) if the point is off the relation (constant
// term larger than 1e-9) or the tangent is vertical.
Rational barrow_linearize(const ImplicitRelation& rel, const Rational& x0, const Rational& z0);
double barrow_linearize(const ImplicitRelation& rel, double x0, double z0);

}  // namespace tangenta

#endif
