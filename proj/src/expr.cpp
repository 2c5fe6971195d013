#include "vexlab/expr.hpp"

#include "vexlab/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace vexlab::expr {

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 9> kFunctions{{
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"exp", Function::exp},
    {"log", Function::log},
    {"abs", Function::abs},
    {"sqrt", Function::sqrt},
    {"min", Function::min},
    {"max", Function::max},
    {"pow", Function::pow},
}};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_sum();
    skip_space();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') throw ParseError("unbalanced ')'", pos_);
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    for (;;) {
      if (accept('+'))
        lhs = Expr::binary(NodeKind::add, lhs, parse_product());
      else if (accept('-'))
        lhs = Expr::binary(NodeKind::subtract, lhs, parse_product());
      else
        return lhs;
    }
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = Expr::binary(NodeKind::multiply, lhs, parse_unary());
      else if (accept('/'))
        lhs = Expr::binary(NodeKind::divide, lhs, parse_unary());
      else
        return lhs;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::unary_minus(parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr::binary(NodeKind::power, base, parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("expected operand", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      const std::size_t open = pos_;
      ++pos_;
      Expr inner = parse_sum();
      if (!accept(')')) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unbalanced '(' opened at " + std::to_string(open), pos_);
        throw ParseError("expected ')'", pos_);
      }
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
        pos_ = p;
      }
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc() || ptr != text_.data() + pos_) throw ParseError("malformed number", start);
    return Expr::number(v);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return Expr::variable();
    if (name == "pi") return Expr::pi();
    for (const auto& [fname, f] : kFunctions) {
      if (fname != name) continue;
      if (!accept('(')) throw ParseError("expected '(' after " + std::string(name), pos_);
      std::vector<Expr> args;
      args.push_back(parse_sum());
      while (accept(',')) args.push_back(parse_sum());
      if (!accept(')')) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unbalanced '(' in call to " + std::string(name), pos_);
        throw ParseError("expected ')'", pos_);
      }
      if (static_cast<int>(args.size()) != function_arity(f))
        throw ParseError(std::string(name) + " takes " + std::to_string(function_arity(f)) + " argument(s)", start);
      return Expr::call(f, std::move(args));
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // "1e+20" reparses fine, but a bare integer must not glue onto a following identifier.
  return v < 0 ? "(" + s + ")" : s;
}

[[noreturn]] void domain_failure(const char* what, const Expr& e, double x) {
  throw DomainError(what, to_string(e), x);
}

double apply_pow(const Expr& e, double base, double exponent, double x) {
  if (base == 0.0 && exponent < 0.0) domain_failure("zero to a negative power", e, x);
  if (base < 0.0 && exponent != std::floor(exponent)) domain_failure("negative base with non-integer exponent", e, x);
  return std::pow(base, exponent);
}

double eval_scalar(const Expr& e, double x) {
  const Node& n = e.node();
  double r = 0.0;
  switch (n.kind) {
    case NodeKind::number:
      return n.value;
    case NodeKind::variable:
      return x;
    case NodeKind::pi:
      return std::numbers::pi;
    case NodeKind::negate:
      return -eval_scalar(n.children[0], x);
    case NodeKind::add:
      r = eval_scalar(n.children[0], x) + eval_scalar(n.children[1], x);
      break;
    case NodeKind::subtract:
      r = eval_scalar(n.children[0], x) - eval_scalar(n.children[1], x);
      break;
    case NodeKind::multiply:
      r = eval_scalar(n.children[0], x) * eval_scalar(n.children[1], x);
      break;
    case NodeKind::divide: {
      const double d = eval_scalar(n.children[1], x);
      if (d == 0.0) domain_failure("division by zero", e, x);
      r = eval_scalar(n.children[0], x) / d;
      break;
    }
    case NodeKind::power:
      r = apply_pow(e, eval_scalar(n.children[0], x), eval_scalar(n.children[1], x), x);
      break;
    case NodeKind::call: {
      const double a = eval_scalar(n.children[0], x);
      switch (n.function) {
        case Function::sin: r = std::sin(a); break;
        case Function::cos: r = std::cos(a); break;
        case Function::exp: r = std::exp(a); break;
        case Function::log:
          if (a <= 0.0) domain_failure("log of a non-positive number", e, x);
          r = std::log(a);
          break;
        case Function::abs: r = std::abs(a); break;
        case Function::sqrt:
          if (a < 0.0) domain_failure("sqrt of a negative number", e, x);
          r = std::sqrt(a);
          break;
        case Function::min: r = std::min(a, eval_scalar(n.children[1], x)); break;
        case Function::max: r = std::max(a, eval_scalar(n.children[1], x)); break;
        case Function::pow: r = apply_pow(e, a, eval_scalar(n.children[1], x), x); break;
      }
      break;
    }
  }
  if (!std::isfinite(r)) domain_failure("non-finite result", e, x);
  return r;
}

template <typename Bad>
void check_array(const Expr& e, const Eigen::ArrayXd& x, const Bad& bad, const char* what) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (bad(i)) domain_failure(what, e, x[i]);
}

Eigen::ArrayXd eval_array(const Expr& e, const Eigen::ArrayXd& x) {
  const Node& n = e.node();
  Eigen::ArrayXd r;
  switch (n.kind) {
    case NodeKind::number:
      return Eigen::ArrayXd::Constant(x.size(), n.value);
    case NodeKind::variable:
      return x;
    case NodeKind::pi:
      return Eigen::ArrayXd::Constant(x.size(), std::numbers::pi);
    case NodeKind::negate:
      return -eval_array(n.children[0], x);
    case NodeKind::add:
      r = eval_array(n.children[0], x) + eval_array(n.children[1], x);
      break;
    case NodeKind::subtract:
      r = eval_array(n.children[0], x) - eval_array(n.children[1], x);
      break;
    case NodeKind::multiply:
      r = eval_array(n.children[0], x) * eval_array(n.children[1], x);
      break;
    case NodeKind::divide: {
      const Eigen::ArrayXd d = eval_array(n.children[1], x);
      check_array(e, x, [&](Eigen::Index i) { return d[i] == 0.0; }, "division by zero");
      r = eval_array(n.children[0], x) / d;
      break;
    }
    case NodeKind::power:
    case NodeKind::call: {
      const Eigen::ArrayXd a = eval_array(n.children[0], x);
      const bool is_pow = n.kind == NodeKind::power || n.function == Function::pow;
      if (is_pow) {
        const Eigen::ArrayXd b = eval_array(n.children[1], x);
        check_array(e, x, [&](Eigen::Index i) { return a[i] == 0.0 && b[i] < 0.0; }, "zero to a negative power");
        check_array(e, x, [&](Eigen::Index i) { return a[i] < 0.0 && b[i] != std::floor(b[i]); },
                    "negative base with non-integer exponent");
        r = a.binaryExpr(b, [](double u, double v) { return std::pow(u, v); });
        break;
      }
      switch (n.function) {
        case Function::sin: r = a.sin(); break;
        case Function::cos: r = a.cos(); break;
        case Function::exp: r = a.exp(); break;
        case Function::log:
          check_array(e, x, [&](Eigen::Index i) { return a[i] <= 0.0; }, "log of a non-positive number");
          r = a.log();
          break;
        case Function::abs: r = a.abs(); break;
        case Function::sqrt:
          check_array(e, x, [&](Eigen::Index i) { return a[i] < 0.0; }, "sqrt of a negative number");
          r = a.sqrt();
          break;
        case Function::min: r = a.min(eval_array(n.children[1], x)); break;
        case Function::max: r = a.max(eval_array(n.children[1], x)); break;
        case Function::pow: break;  // handled above
      }
      break;
    }
  }
  check_array(e, x, [&](Eigen::Index i) { return !std::isfinite(r[i]); }, "non-finite result");
  return r;
}

}  // namespace

Expr::Expr() : Expr(number(0.0)) {}

Expr Expr::number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::number;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::variable;
  return Expr(std::move(n));
}

Expr Expr::pi() {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::pi;
  return Expr(std::move(n));
}

Expr Expr::unary_minus(Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::negate;
  n->children.push_back(std::move(operand));
  return Expr(std::move(n));
}

Expr Expr::binary(NodeKind kind, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Expr(std::move(n));
}

Expr Expr::call(Function f, std::vector<Expr> args) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::call;
  n->function = f;
  n->children = std::move(args);
  return Expr(std::move(n));
}

bool Expr::is_constant() const {
  if (node_->kind == NodeKind::variable) return false;
  for (const Expr& c : node_->children)
    if (!c.is_constant()) return false;
  return true;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  if (x.kind != y.kind || x.children.size() != y.children.size()) return false;
  if (x.kind == NodeKind::number && x.value != y.value) return false;
  if (x.kind == NodeKind::call && x.function != y.function) return false;
  for (std::size_t i = 0; i < x.children.size(); ++i)
    if (!(x.children[i] == y.children[i])) return false;
  return true;
}

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

std::string to_string(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case NodeKind::number: return format_number(n.value);
    case NodeKind::variable: return "x";
    case NodeKind::pi: return "pi";
    case NodeKind::negate: return "(-" + to_string(n.children[0]) + ")";
    case NodeKind::add: return "(" + to_string(n.children[0]) + "+" + to_string(n.children[1]) + ")";
    case NodeKind::subtract: return "(" + to_string(n.children[0]) + "-" + to_string(n.children[1]) + ")";
    case NodeKind::multiply: return "(" + to_string(n.children[0]) + "*" + to_string(n.children[1]) + ")";
    case NodeKind::divide: return "(" + to_string(n.children[0]) + "/" + to_string(n.children[1]) + ")";
    case NodeKind::power: return "(" + to_string(n.children[0]) + "^" + to_string(n.children[1]) + ")";
    case NodeKind::call: {
      std::string s(function_name(n.function));
      s += "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) s += ",";
        s += to_string(n.children[i]);
      }
      return s + ")";
    }
  }
  return {};
}

double eval(const Expr& e, double x) { return eval_scalar(e, x); }

Eigen::ArrayXd eval(const Expr& e, const Eigen::ArrayXd& x) { return eval_array(e, x); }

std::string_view function_name(Function f) {
  for (const auto& [name, g] : kFunctions)
    if (g == f) return name;
  return "?";
}

int function_arity(Function f) {
  return (f == Function::min || f == Function::max || f == Function::pow) ? 2 : 1;
}

}  // namespace vexlab::expr
