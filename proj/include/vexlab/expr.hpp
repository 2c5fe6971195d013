#pragma once

// Closed arithmetic language for exponents, weights and test functions.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?            (right associative)
//   primary := number | 'x' | 'pi' | call | '(' expr ')'
//   call    := name '(' expr (',' expr)* ')'   name in {sin cos exp log abs sqrt min max pow}

#include <Eigen/Core>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace vexlab::expr {

enum class NodeKind { number, variable, pi, negate, add, subtract, multiply, divide, power, call };

enum class Function { sin, cos, exp, log, abs, sqrt, min, max, pow };

class Expr;

struct Node {
  NodeKind kind = NodeKind::number;
  double value = 0.0;               // number literals
  Function function = Function::sin;  // calls
  std::vector<Expr> children;
};

/// Immutable expression tree; copies share structure and are thread-safe to read.
class Expr {
 public:
  Expr();  // the literal 0

  static Expr number(double v);
  static Expr variable();
  static Expr pi();
  static Expr unary_minus(Expr operand);
  static Expr binary(NodeKind kind, Expr lhs, Expr rhs);
  static Expr call(Function f, std::vector<Expr> args);

  const Node& node() const { return *node_; }
  NodeKind kind() const { return node_->kind; }

  /// True when the tree contains no occurrence of `x`.
  bool is_constant() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr parse(std::string_view text);

/// Fully parenthesized text that reparses to an equal tree.
std::string to_string(const Expr& e);

double eval(const Expr& e, double x);

/// Elementwise evaluation; raises DomainError on the first offending point.
Eigen::ArrayXd eval(const Expr& e, const Eigen::ArrayXd& x);

std::string_view function_name(Function f);
int function_arity(Function f);

}  // namespace vexlab::expr
