#include "tangenta/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "tangenta/error.hpp"

namespace tangenta {

namespace {

NodePtr make_node(ExprNode node) { return std::make_shared<const ExprNode>(std::move(node)); }

bool is_const(const NodePtr& n) { return n && n->kind == NodeKind::constant; }

bool is_exact_const(const NodePtr& n, const Rational& v) {
  return is_const(n) && n->exact && *n->exact == v;
}

double const_value(const ExprNode& n) { return n.exact ? to_double(*n.exact) : n.approx; }

}  // namespace

Expression Expression::constant(Rational value) {
  ExprNode n{NodeKind::constant};
  n.approx = to_double(value);
  n.exact = std::move(value);
  return Expression(make_node(std::move(n)));
}

Expression Expression::constant(double value) {
  ExprNode n{NodeKind::constant};
  n.approx = value;
  return Expression(make_node(std::move(n)));
}

Expression Expression::variable(std::string name) {
  ExprNode n{NodeKind::variable};
  n.name = std::move(name);
  return Expression(make_node(std::move(n)));
}

static Expression binary(NodeKind kind, Expression a, Expression b) {
  ExprNode n{kind};
  n.lhs = a.root();
  n.rhs = b.root();
  return Expression(make_node(std::move(n)));
}

Expression Expression::sum(Expression a, Expression b) { return binary(NodeKind::sum, std::move(a), std::move(b)); }
Expression Expression::difference(Expression a, Expression b) { return binary(NodeKind::difference, std::move(a), std::move(b)); }
Expression Expression::product(Expression a, Expression b) { return binary(NodeKind::product, std::move(a), std::move(b)); }
Expression Expression::quotient(Expression a, Expression b) {
  // Exact-constant quotients fold to a single rational constant, so the AST
  // for "1/3" is canonical no matter how it was built.
  if (a.root() && b.root() && a.root()->kind == NodeKind::constant &&
      b.root()->kind == NodeKind::constant && a.root()->exact && b.root()->exact &&
      *b.root()->exact != 0) {
    return constant(Rational(*a.root()->exact / *b.root()->exact));
  }
  return binary(NodeKind::quotient, std::move(a), std::move(b));
}

Expression Expression::power(Expression base, Rational exponent) {
  ExprNode n{NodeKind::power};
  n.lhs = base.root();
  n.exponent = std::move(exponent);
  return Expression(make_node(std::move(n)));
}

Expression Expression::apply(NodeKind fn, Expression arg) {
  ExprNode n{fn};
  n.lhs = arg.root();
  return Expression(make_node(std::move(n)));
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) {
    skip_ws();
    throw SyntaxError(pos, what);
  }

  static Expression negate_literal(const Expression& e) {
    // Unary minus on a numeric literal folds into the constant, so that
    // printed negative constants parse back to the same node.
    const ExprNode& n = *e.root();
    if (n.exact) return Expression::constant(Rational(-*n.exact));
    return Expression::constant(-n.approx);
  }

  Expression parse_expression() {
    Expression lhs = parse_term();
    for (;;) {
      if (eat('+')) {
        lhs = Expression::sum(std::move(lhs), parse_term());
      } else if (eat('-')) {
        lhs = Expression::difference(std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expression parse_term() {
    Expression lhs = parse_unary();
    for (;;) {
      if (eat('*')) {
        lhs = combine_product(std::move(lhs), parse_unary());
      } else if (eat('/')) {
        lhs = combine_quotient(std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  static Expression combine_product(Expression a, Expression b) {
    return Expression::product(std::move(a), std::move(b));
  }

  // The quotient factory folds exact-literal quotients; this is what lets
  // the printer emit "1/3" for a non-terminating constant.
  static Expression combine_quotient(Expression a, Expression b) {
    return Expression::quotient(std::move(a), std::move(b));
  }

  Expression parse_unary() {
    if (eat('-')) {
      Expression inner = parse_unary();
      if (is_const(inner.root())) return negate_literal(inner);
      return Expression::product(Expression::constant(Rational(-1)), std::move(inner));
    }
    return parse_factor();
  }

  Expression parse_factor() {
    Expression base = parse_base();
    if (eat('^')) {
      Rational e = parse_exponent();
      return Expression::power(std::move(base), std::move(e));
    }
    return base;
  }

  Expression parse_base() {
    char c = peek();
    if (c == '(') {
      ++pos;
      Expression inner = parse_expression();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return Expression::constant(parse_number());
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      std::string ident = parse_ident();
      if (peek() == '(') {
        ++pos;
        Expression arg = parse_expression();
        if (!eat(')')) fail("expected ')'");
        if (ident == "sqrt") return Expression::apply(NodeKind::sqrt_fn, std::move(arg));
        if (ident == "ln") return Expression::apply(NodeKind::ln_fn, std::move(arg));
        if (ident == "exp") return Expression::apply(NodeKind::exp_fn, std::move(arg));
        if (ident == "sin") return Expression::apply(NodeKind::sin_fn, std::move(arg));
        if (ident == "cos") return Expression::apply(NodeKind::cos_fn, std::move(arg));
        throw Error(ErrKind::unknown_name,
                    "unknown function '" + ident + "' at offset " + std::to_string(start));
      }
      return Expression::variable(std::move(ident));
    }
    fail("expected a number, identifier or '('");
  }

  std::string parse_ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return std::string(text.substr(start, pos - start));
  }

  // number := digits ['.' digits] [('e'|'E') ['+'|'-'] digits], kept exact.
  Rational parse_number() {
    skip_ws();
    std::size_t start = pos;
    Integer mantissa = 0;
    int frac_digits = 0;
    bool any = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      mantissa = mantissa * 10 + (text[pos] - '0');
      ++pos;
      any = true;
    }
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        mantissa = mantissa * 10 + (text[pos] - '0');
        ++frac_digits;
        ++pos;
        any = true;
      }
    }
    if (!any) throw SyntaxError(start, "malformed number");
    long exp10 = 0;
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
      std::size_t mark = pos;
      ++pos;
      bool neg = false;
      if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        neg = text[pos] == '-';
        ++pos;
      }
      if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
        pos = mark;  // "2e" is "2" followed by a variable named e? no: reject via caller
        throw SyntaxError(pos, "malformed exponent");
      }
      long e = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        e = e * 10 + (text[pos] - '0');
        ++pos;
      }
      exp10 = neg ? -e : e;
    }
    Rational value(mantissa);
    long shift = exp10 - frac_digits;
    if (shift > 0) value *= Rational(pow(Integer(10), unsigned(shift)));
    if (shift < 0) value /= Rational(pow(Integer(10), unsigned(-shift)));
    return value;
  }

  // exponent := signed rational, optionally parenthesized: 2, -1, (3/2), (-1/2)
  Rational parse_exponent() {
    bool parens = eat('(');
    bool neg = eat('-');
    Rational num = parse_number();
    Rational result = neg ? Rational(-num) : num;
    if (parens && eat('/')) {
      Rational den = parse_number();
      if (den == 0) fail("zero denominator in exponent");
      result /= den;
    }
    if (parens && !eat(')')) fail("expected ')'");
    return result;
  }
};

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser p{text};
  Expression e = p.parse_expression();
  if (!p.at_end()) p.fail("unexpected trailing input");
  return e;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

// Precedence levels as required by context: 1 sum, 2 product, 3 power
// operand, 4 atom.
int node_precedence(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::sum:
    case NodeKind::difference:
      return 1;
    case NodeKind::product:
    case NodeKind::quotient:
      return 2;
    case NodeKind::power:
      return 3;
    case NodeKind::constant: {
      if (n.exact && *n.exact >= 0 && has_terminating_decimal(*n.exact)) return 4;
      if (!n.exact && n.approx >= 0) return 4;
      return 2;  // prints with '-' or '/', binds like a term
    }
    default:
      return 4;  // variables, function calls
  }
}

std::string exponent_text(const Rational& e) {
  std::string body = to_string(e);
  if (e < 0 || denominator(e) != 1) return "(" + body + ")";
  return body;
}

std::string constant_text(const ExprNode& n) {
  if (n.exact) {
    if (has_terminating_decimal(*n.exact)) return decimal_string(*n.exact);
    return to_string(*n.exact);  // "p/q", folded back by the parser
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", n.approx);
  return buf;
}

void print_node(const ExprNode& n, int min_prec, std::string& out) {
  int prec = node_precedence(n);
  bool wrap = prec < min_prec;
  if (wrap) out += '(';
  switch (n.kind) {
    case NodeKind::constant:
      out += constant_text(n);
      break;
    case NodeKind::variable:
      out += n.name;
      break;
    case NodeKind::sum:
      print_node(*n.lhs, 1, out);
      out += " + ";
      print_node(*n.rhs, 2, out);
      break;
    case NodeKind::difference:
      print_node(*n.lhs, 1, out);
      out += " - ";
      print_node(*n.rhs, 2, out);
      break;
    case NodeKind::product:
      print_node(*n.lhs, 2, out);
      out += "*";
      print_node(*n.rhs, 3, out);
      break;
    case NodeKind::quotient:
      print_node(*n.lhs, 2, out);
      out += "/";
      print_node(*n.rhs, 3, out);
      break;
    case NodeKind::power:
      print_node(*n.lhs, 4, out);
      out += "^";
      out += exponent_text(n.exponent);
      break;
    case NodeKind::sqrt_fn:
    case NodeKind::ln_fn:
    case NodeKind::exp_fn:
    case NodeKind::sin_fn:
    case NodeKind::cos_fn: {
      static const std::map<NodeKind, std::string> names = {
          {NodeKind::sqrt_fn, "sqrt"}, {NodeKind::ln_fn, "ln"},   {NodeKind::exp_fn, "exp"},
          {NodeKind::sin_fn, "sin"},   {NodeKind::cos_fn, "cos"},
      };
      out += names.at(n.kind);
      out += '(';
      print_node(*n.lhs, 1, out);
      out += ')';
      break;
    }
  }
  if (wrap) out += ')';
}

}  // namespace

std::string Expression::str() const {
  std::string out;
  if (root_) print_node(*root_, 1, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void eval_domain_error(const ExprNode& n, const std::string& what) {
  std::string text;
  print_node(n, 1, text);
  throw Error(ErrKind::domain, what + " in '" + text + "'");
}

double eval_node(const ExprNode& n, const Bindings& b) {
  switch (n.kind) {
    case NodeKind::constant:
      return const_value(n);
    case NodeKind::variable: {
      auto it = b.find(n.name);
      if (it == b.end()) throw Error(ErrKind::unknown_name, "unbound variable '" + n.name + "'");
      return it->second;
    }
    case NodeKind::sum:
      return eval_node(*n.lhs, b) + eval_node(*n.rhs, b);
    case NodeKind::difference:
      return eval_node(*n.lhs, b) - eval_node(*n.rhs, b);
    case NodeKind::product:
      return eval_node(*n.lhs, b) * eval_node(*n.rhs, b);
    case NodeKind::quotient: {
      double num = eval_node(*n.lhs, b);
      double den = eval_node(*n.rhs, b);
      if (den == 0) eval_domain_error(n, "division by zero");
      return num / den;
    }
    case NodeKind::power: {
      double base = eval_node(*n.lhs, b);
      const Rational& e = n.exponent;
      if (denominator(e) == 1) {
        double de = to_double(e);
        if (base == 0 && e < 0) eval_domain_error(n, "division by zero");
        return std::pow(base, de);
      }
      if (base < 0) {
        if (denominator(e) % 2 == 0) eval_domain_error(n, "even root of negative value");
        double mag = std::pow(-base, to_double(e));
        return numerator(e) % 2 == 0 ? mag : -mag;
      }
      if (base == 0 && e < 0) eval_domain_error(n, "division by zero");
      return std::pow(base, to_double(e));
    }
    case NodeKind::sqrt_fn: {
      double v = eval_node(*n.lhs, b);
      if (v < 0) eval_domain_error(n, "even root of negative value");
      return std::sqrt(v);
    }
    case NodeKind::ln_fn: {
      double v = eval_node(*n.lhs, b);
      if (v <= 0) eval_domain_error(n, "ln of non-positive value");
      return std::log(v);
    }
    case NodeKind::exp_fn:
      return std::exp(eval_node(*n.lhs, b));
    case NodeKind::sin_fn:
      return std::sin(eval_node(*n.lhs, b));
    case NodeKind::cos_fn:
      return std::cos(eval_node(*n.lhs, b));
  }
  throw Error(ErrKind::domain, "corrupt expression node");
}

std::optional<Rational> eval_exact_node(const ExprNode& n, const ExactBindings& b) {
  switch (n.kind) {
    case NodeKind::constant:
      return n.exact;
    case NodeKind::variable: {
      auto it = b.find(n.name);
      if (it == b.end()) throw Error(ErrKind::unknown_name, "unbound variable '" + n.name + "'");
      return it->second;
    }
    case NodeKind::sum: {
      auto l = eval_exact_node(*n.lhs, b), r = eval_exact_node(*n.rhs, b);
      if (!l || !r) return std::nullopt;
      return Rational(*l + *r);
    }
    case NodeKind::difference: {
      auto l = eval_exact_node(*n.lhs, b), r = eval_exact_node(*n.rhs, b);
      if (!l || !r) return std::nullopt;
      return Rational(*l - *r);
    }
    case NodeKind::product: {
      auto l = eval_exact_node(*n.lhs, b), r = eval_exact_node(*n.rhs, b);
      if (!l || !r) return std::nullopt;
      return Rational(*l * *r);
    }
    case NodeKind::quotient: {
      auto l = eval_exact_node(*n.lhs, b), r = eval_exact_node(*n.rhs, b);
      if (!l || !r) return std::nullopt;
      if (*r == 0) eval_domain_error(n, "division by zero");
      return Rational(*l / *r);
    }
    case NodeKind::power: {
      if (denominator(n.exponent) != 1) return std::nullopt;
      auto base = eval_exact_node(*n.lhs, b);
      if (!base) return std::nullopt;
      Integer e = numerator(n.exponent);
      bool invert = e < 0;
      if (invert) e = -e;
      Rational acc = 1, p = *base;
      for (Integer k = e; k > 0; k >>= 1) {
        if ((k & 1) != 0) acc *= p;
        p *= p;
      }
      if (invert) {
        if (acc == 0) eval_domain_error(n, "division by zero");
        acc = Rational(1) / acc;
      }
      return acc;
    }
    default:
      return std::nullopt;  // transcendental
  }
}

}  // namespace

double Expression::eval(const Bindings& bindings) const { return eval_node(*root_, bindings); }

std::optional<Rational> Expression::eval_exact(const ExactBindings& bindings) const {
  return eval_exact_node(*root_, bindings);
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

namespace {

using E = Expression;

E s_sum(E a, E b) {
  if (is_exact_const(a.root(), 0)) return b;
  if (is_exact_const(b.root(), 0)) return a;
  if (is_const(a.root()) && is_const(b.root()) && a.root()->exact && b.root()->exact)
    return E::constant(Rational(*a.root()->exact + *b.root()->exact));
  return E::sum(std::move(a), std::move(b));
}

E s_diff(E a, E b) {
  if (is_exact_const(b.root(), 0)) return a;
  if (is_const(a.root()) && is_const(b.root()) && a.root()->exact && b.root()->exact)
    return E::constant(Rational(*a.root()->exact - *b.root()->exact));
  if (is_exact_const(a.root(), 0)) return E::product(E::constant(Rational(-1)), std::move(b));
  return E::difference(std::move(a), std::move(b));
}

E s_prod(E a, E b) {
  if (is_exact_const(a.root(), 0) || is_exact_const(b.root(), 0)) return E::constant(Rational(0));
  if (is_exact_const(a.root(), 1)) return b;
  if (is_exact_const(b.root(), 1)) return a;
  if (is_const(a.root()) && is_const(b.root()) && a.root()->exact && b.root()->exact)
    return E::constant(Rational(*a.root()->exact * *b.root()->exact));
  return E::product(std::move(a), std::move(b));
}

E s_quot(E a, E b) {
  if (is_exact_const(a.root(), 0)) return E::constant(Rational(0));
  if (is_exact_const(b.root(), 1)) return a;
  if (is_const(a.root()) && is_const(b.root()) && a.root()->exact && b.root()->exact &&
      *b.root()->exact != 0)
    return E::constant(Rational(*a.root()->exact / *b.root()->exact));
  return E::quotient(std::move(a), std::move(b));
}

E s_pow(E base, Rational e) {
  if (e == 0) return E::constant(Rational(1));
  if (e == 1) return base;
  return E::power(std::move(base), std::move(e));
}

E diff_node(const NodePtr& n, const std::string& var) {
  E node(n);
  switch (n->kind) {
    case NodeKind::constant:
      return E::constant(Rational(0));
    case NodeKind::variable:
      return E::constant(Rational(n->name == var ? 1 : 0));
    case NodeKind::sum:
      return s_sum(diff_node(n->lhs, var), diff_node(n->rhs, var));
    case NodeKind::difference:
      return s_diff(diff_node(n->lhs, var), diff_node(n->rhs, var));
    case NodeKind::product:
      return s_sum(s_prod(diff_node(n->lhs, var), E(n->rhs)),
                   s_prod(E(n->lhs), diff_node(n->rhs, var)));
    case NodeKind::quotient:
      return s_quot(s_diff(s_prod(diff_node(n->lhs, var), E(n->rhs)),
                           s_prod(E(n->lhs), diff_node(n->rhs, var))),
                    s_pow(E(n->rhs), Rational(2)));
    case NodeKind::power: {
      E du = diff_node(n->lhs, var);
      E term = s_prod(E::constant(n->exponent), s_pow(E(n->lhs), Rational(n->exponent - 1)));
      return s_prod(std::move(term), std::move(du));
    }
    case NodeKind::sqrt_fn: {
      E du = diff_node(n->lhs, var);
      return s_quot(std::move(du), s_prod(E::constant(Rational(2)), node));
    }
    case NodeKind::ln_fn:
      return s_quot(diff_node(n->lhs, var), E(n->lhs));
    case NodeKind::exp_fn:
      return s_prod(node, diff_node(n->lhs, var));
    case NodeKind::sin_fn:
      return s_prod(E::apply(NodeKind::cos_fn, E(n->lhs)), diff_node(n->lhs, var));
    case NodeKind::cos_fn:
      return s_prod(E::constant(Rational(-1)),
                    s_prod(E::apply(NodeKind::sin_fn, E(n->lhs)), diff_node(n->lhs, var)));
  }
  throw Error(ErrKind::domain, "corrupt expression node");
}

}  // namespace

Expression Expression::derivative(const std::string& var) const { return diff_node(root_, var); }

namespace {

void collect_vars(const ExprNode& n, std::set<std::string>& out) {
  if (n.kind == NodeKind::variable) out.insert(n.name);
  if (n.lhs) collect_vars(*n.lhs, out);
  if (n.rhs) collect_vars(*n.rhs, out);
}

bool nodes_identical(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::constant:
      if (a.exact && b.exact) return *a.exact == *b.exact;
      // A constant written back through text may come back exact; values
      // compare bit-for-bit as doubles in the mixed case.
      return const_value(a) == const_value(b) &&
             std::signbit(const_value(a)) == std::signbit(const_value(b));
    case NodeKind::variable:
      return a.name == b.name;
    case NodeKind::power:
      return a.exponent == b.exponent && nodes_identical(*a.lhs, *b.lhs);
    default:
      if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
      if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
      if (a.lhs && !nodes_identical(*a.lhs, *b.lhs)) return false;
      if (a.rhs && !nodes_identical(*a.rhs, *b.rhs)) return false;
      return true;
  }
}

}  // namespace

std::vector<std::string> Expression::variables() const {
  std::set<std::string> vars;
  if (root_) collect_vars(*root_, vars);
  return {vars.begin(), vars.end()};
}

bool Expression::identical_to(const Expression& other) const {
  if (!root_ || !other.root_) return root_ == other.root_;
  return nodes_identical(*root_, *other.root_);
}

// ---------------------------------------------------------------------------
// Bivariate polynomials and the a-e rules
// ---------------------------------------------------------------------------

Poly2 poly2_add(const Poly2& a, const Poly2& b) {
  Poly2 out = a;
  for (const auto& [k, v] : b) {
    Rational& c = out[k];
    c += v;
    if (c == 0) out.erase(k);
  }
  return out;
}

Poly2 poly2_sub(const Poly2& a, const Poly2& b) {
  Poly2 out = a;
  for (const auto& [k, v] : b) {
    Rational& c = out[k];
    c -= v;
    if (c == 0) out.erase(k);
  }
  return out;
}

Poly2 poly2_mul(const Poly2& a, const Poly2& b) {
  Poly2 out;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b) {
      auto key = std::make_pair(ka.first + kb.first, ka.second + kb.second);
      Rational& c = out[key];
      c += va * vb;
      if (c == 0) out.erase(key);
    }
  return out;
}

Rational poly2_eval(const Poly2& p, const Rational& x, const Rational& z) {
  auto ipow = [](const Rational& base, int e) {
    Rational acc = 1;
    for (int i = 0; i < e; ++i) acc *= base;
    return acc;
  };
  Rational out = 0;
  for (const auto& [k, v] : p) out += v * ipow(x, k.first) * ipow(z, k.second);
  return out;
}

namespace {

Poly2 to_poly2(const ExprNode& n, const std::string& xname, const std::string& zname) {
  auto reject = [&](const std::string& why) -> Poly2 {
    throw Error(ErrKind::precondition, "relation is not polynomial in (" + xname + ", " + zname +
                                           "): " + why);
  };
  switch (n.kind) {
    case NodeKind::constant:
      if (!n.exact) return reject("inexact constant");
      if (*n.exact == 0) return {};
      return {{{0, 0}, *n.exact}};
    case NodeKind::variable:
      if (n.name == xname) return {{{1, 0}, Rational(1)}};
      if (n.name == zname) return {{{0, 1}, Rational(1)}};
      return reject("unexpected variable '" + n.name + "'");
    case NodeKind::sum:
      return poly2_add(to_poly2(*n.lhs, xname, zname), to_poly2(*n.rhs, xname, zname));
    case NodeKind::difference:
      return poly2_sub(to_poly2(*n.lhs, xname, zname), to_poly2(*n.rhs, xname, zname));
    case NodeKind::product:
      return poly2_mul(to_poly2(*n.lhs, xname, zname), to_poly2(*n.rhs, xname, zname));
    case NodeKind::quotient: {
      Poly2 den = to_poly2(*n.rhs, xname, zname);
      if (den.size() != 1 || den.begin()->first != std::make_pair(0, 0))
        return reject("division by a non-constant");
      Poly2 num = to_poly2(*n.lhs, xname, zname);
      for (auto& [k, v] : num) v /= den.begin()->second;
      return num;
    }
    case NodeKind::power: {
      if (denominator(n.exponent) != 1 || n.exponent < 0)
        return reject("non-integer or negative exponent");
      Poly2 base = to_poly2(*n.lhs, xname, zname);
      Poly2 acc = {{{0, 0}, Rational(1)}};
      long e = numerator(n.exponent).template convert_to<long>();
      for (long i = 0; i < e; ++i) acc = poly2_mul(acc, base);
      return acc;
    }
    default:
      return reject("transcendental node");
  }
}

}  // namespace

ImplicitRelation::ImplicitRelation(Expression expr, std::string abscissa, std::string ordinate)
    : expr_(std::move(expr)), abscissa_(std::move(abscissa)), ordinate_(std::move(ordinate)) {
  poly_ = to_poly2(*expr_.root(), abscissa_, ordinate_);
}

Rational barrow_linearize(const ImplicitRelation& rel, const Rational& x0, const Rational& z0) {
  Rational residual = poly2_eval(rel.poly(), x0, z0);
  if (std::abs(to_double(residual)) > 1e-9)
    throw Error(ErrKind::precondition,
                "point (" + to_string(x0) + ", " + to_string(z0) + ") is not on the relation");

  // Substitute x -> x0 - a, z -> z0 - e and expand term by term into a
  // polynomial in (a, e). Binomial coefficients are accumulated exactly.
  auto binom_row = [](int n) {
    std::vector<Integer> row(n + 1);
    row[0] = 1;
    for (int k = 1; k <= n; ++k) row[k] = row[k - 1] * (n - k + 1) / k;
    return row;
  };
  auto powers = [](const Rational& v, int n) {
    std::vector<Rational> p(n + 1);
    p[0] = 1;
    for (int k = 1; k <= n; ++k) p[k] = p[k - 1] * v;
    return p;
  };

  Poly2 in_ae;  // keyed by (degree in a, degree in e)
  for (const auto& [key, coeff] : rel.poly()) {
    int i = key.first, j = key.second;
    auto bi = binom_row(i), bj = binom_row(j);
    auto xp = powers(x0, i), zp = powers(z0, j);
    for (int k = 0; k <= i; ++k)
      for (int l = 0; l <= j; ++l) {
        // (x0 - a)^i (z0 - e)^j contributes C(i,k) C(j,l) x0^{i-k} z0^{j-l} (-1)^{k+l} a^k e^l
        Rational term = coeff * Rational(bi[k] * bj[l]) * xp[i - k] * zp[j - l];
        if ((k + l) % 2 != 0) term = -term;
        Rational& slot = in_ae[{k, l}];
        slot += term;
        if (slot == 0) in_ae.erase({k, l});
      }
  }

  // Barrow's rules: discard the constant and everything of combined degree
  // two or higher; only the linear remainder survives.
  Rational lin_a = 0, lin_e = 0;
  if (auto it = in_ae.find({1, 0}); it != in_ae.end()) lin_a = it->second;
  if (auto it = in_ae.find({0, 1}); it != in_ae.end()) lin_e = it->second;
  if (lin_e == 0)
    throw Error(ErrKind::precondition, "vertical tangent: relation has no linear e term");
  return Rational(-lin_a / lin_e);
}

double barrow_linearize(const ImplicitRelation& rel, double x0, double z0) {
  return to_double(barrow_linearize(rel, Rational(x0), Rational(z0)));
}

}  // namespace tangenta
