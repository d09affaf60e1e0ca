#include "adrc/expr.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdint>

#include "adrc/errors.hpp"

namespace adrc::expr {

namespace {

NodePtr node(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

bool is_const(const NodePtr& n) { return n->op == Op::Const; }
bool is_const(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

double int_pow(double base, int exponent) {
  double result = 1.0;
  double factor = base;
  for (unsigned e = static_cast<unsigned>(exponent); e != 0; e >>= 1) {
    if (e & 1U) result *= factor;
    factor *= factor;
  }
  return result;
}

double eval_node(const Node& n, std::span<const double> values) {
  switch (n.op) {
    case Op::Const:
      return n.value;
    case Op::Var:
      return values[static_cast<std::size_t>(n.slot)];
    case Op::Neg:
      return -eval_node(*n.lhs, values);
    case Op::Add:
      return eval_node(*n.lhs, values) + eval_node(*n.rhs, values);
    case Op::Sub:
      return eval_node(*n.lhs, values) - eval_node(*n.rhs, values);
    case Op::Mul:
      return eval_node(*n.lhs, values) * eval_node(*n.rhs, values);
    case Op::Div: {
      const double num = eval_node(*n.lhs, values);
      const double den = eval_node(*n.rhs, values);
      if (den == 0.0) throw DomainError("division by zero");
      return num / den;
    }
    case Op::Pow:
      return int_pow(eval_node(*n.lhs, values), n.slot);
    case Op::Sin:
      return std::sin(eval_node(*n.lhs, values));
    case Op::Cos:
      return std::cos(eval_node(*n.lhs, values));
    case Op::Exp:
      return std::exp(eval_node(*n.lhs, values));
  }
  return 0.0;
}

bool uses_slot(const Node& n, int slot) {
  if (n.op == Op::Var) return n.slot == slot;
  if (n.lhs && uses_slot(*n.lhs, slot)) return true;
  return n.rhs && uses_slot(*n.rhs, slot);
}

bool has_vars(const Node& n) {
  if (n.op == Op::Var) return true;
  return (n.lhs && has_vars(*n.lhs)) || (n.rhs && has_vars(*n.rhs));
}

bool same_tree(const Node& a, const Node& b) {
  if (a.op != b.op || a.slot != b.slot) return false;
  if (std::bit_cast<std::uint64_t>(a.value) != std::bit_cast<std::uint64_t>(b.value)) return false;
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  if (a.lhs && !same_tree(*a.lhs, *b.lhs)) return false;
  return !a.rhs || same_tree(*a.rhs, *b.rhs);
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = node(Op::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = node(Op::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = node(Op::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = node(Op::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) {
      NodePtr operand = parse_unary();
      // A negated literal is stored as a negative constant.
      if (is_const(operand)) return make::constant(-operand->value);
      return node(Op::Neg, operand);
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (!accept('^')) return base;
    auto n = std::make_shared<Node>();
    n->op = Op::Pow;
    n->lhs = std::move(base);
    n->slot = parse_exponent();
    return n;
  }

  // Right-associative chain of integer literals: 2^3^2 == 2^9.
  int parse_exponent() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("exponent must be a non-negative integer literal", start);
    int value = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || value > kMaxExponent) throw ParseError("exponent out of range", start);
    if (accept('^')) {
      const int outer = parse_exponent();
      const double folded = int_pow(static_cast<double>(value), outer);
      if (folded > kMaxExponent) throw ParseError("exponent out of range", start);
      value = static_cast<int>(folded);
    }
    return value;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      const std::size_t exp_start = pos_;
      digits();
      if (exp_start == pos_) pos_ = save;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || ptr != src_.data() + pos_) throw ParseError("malformed number", start);
    return make::constant(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "sin" || name == "cos" || name == "exp") {
      expect('(');
      NodePtr arg = parse_sum();
      expect(')');
      const Op op = name == "sin" ? Op::Sin : name == "cos" ? Op::Cos : Op::Exp;
      return node(op, arg);
    }
    const auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) throw ParseError("undeclared variable '" + std::string(name) + "'", start);
    return make::variable(static_cast<int>(it - vars_.begin()));
  }

  static constexpr int kMaxExponent = 1024;

  std::string_view src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    default:
      return 5;
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", std::fabs(v));
  if (std::signbit(v)) return std::string("(-") + buf + ")";
  return buf;
}

void print(const Node& n, const std::vector<std::string>& vars, std::string& out);

void print_wrapped(const Node& n, bool wrap, const std::vector<std::string>& vars, std::string& out) {
  if (wrap) out += '(';
  print(n, vars, out);
  if (wrap) out += ')';
}

void print(const Node& n, const std::vector<std::string>& vars, std::string& out) {
  switch (n.op) {
    case Op::Const:
      out += format_number(n.value);
      return;
    case Op::Var:
      out += vars[static_cast<std::size_t>(n.slot)];
      return;
    case Op::Neg:
      out += '-';
      print_wrapped(*n.lhs, precedence(*n.lhs) < 3, vars, out);
      return;
    case Op::Pow:
      print_wrapped(*n.lhs, precedence(*n.lhs) <= 4, vars, out);
      out += '^';
      out += std::to_string(n.slot);
      return;
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
      out += n.op == Op::Sin ? "sin(" : n.op == Op::Cos ? "cos(" : "exp(";
      print(*n.lhs, vars, out);
      out += ')';
      return;
    default: {
      const int p = precedence(n);
      print_wrapped(*n.lhs, precedence(*n.lhs) < p, vars, out);
      switch (n.op) {
        case Op::Add: out += " + "; break;
        case Op::Sub: out += " - "; break;
        case Op::Mul: out += "*"; break;
        default: out += "/"; break;
      }
      print_wrapped(*n.rhs, precedence(*n.rhs) <= p, vars, out);
      return;
    }
  }
}

NodePtr derive(const NodePtr& n, int slot) {
  switch (n->op) {
    case Op::Const:
      return make::constant(0.0);
    case Op::Var:
      return make::constant(n->slot == slot ? 1.0 : 0.0);
    case Op::Neg:
      return make::neg(derive(n->lhs, slot));
    case Op::Add:
      return make::add(derive(n->lhs, slot), derive(n->rhs, slot));
    case Op::Sub:
      return make::sub(derive(n->lhs, slot), derive(n->rhs, slot));
    case Op::Mul:
      return make::add(make::mul(derive(n->lhs, slot), n->rhs), make::mul(n->lhs, derive(n->rhs, slot)));
    case Op::Div: {
      NodePtr num = make::sub(make::mul(derive(n->lhs, slot), n->rhs), make::mul(n->lhs, derive(n->rhs, slot)));
      return make::div(num, make::pow(n->rhs, 2));
    }
    case Op::Pow: {
      const int k = n->slot;
      if (k == 0) return make::constant(0.0);
      return make::mul(make::mul(make::constant(k), make::pow(n->lhs, k - 1)), derive(n->lhs, slot));
    }
    case Op::Sin:
      return make::mul(make::cos(n->lhs), derive(n->lhs, slot));
    case Op::Cos:
      return make::mul(make::neg(make::sin(n->lhs)), derive(n->lhs, slot));
    case Op::Exp:
      return make::mul(n, derive(n->lhs, slot));
  }
  return make::constant(0.0);
}

}  // namespace

// ---------------------------------------------------------------------------
// Factories

namespace make {

NodePtr constant(double v) {
  auto n = std::make_shared<Node>();
  n->value = v;
  return n;
}

NodePtr variable(int slot) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->slot = slot;
  return n;
}

NodePtr neg(NodePtr a) {
  if (is_const(a)) return constant(-a->value);
  return node(Op::Neg, std::move(a));
}

NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return constant(a->value + b->value);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return node(Op::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return constant(a->value - b->value);
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return neg(std::move(b));
  return node(Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return constant(a->value * b->value);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return node(Op::Mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b) && b->value != 0.0) return constant(a->value / b->value);
  if (is_const(b, 1.0)) return a;
  return node(Op::Div, std::move(a), std::move(b));
}

NodePtr pow(NodePtr base, int exponent) {
  if (exponent < 0) throw DomainError("negative exponent");
  if (exponent == 0) return constant(1.0);
  if (exponent == 1) return base;
  if (is_const(base)) return constant(int_pow(base->value, exponent));
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->lhs = std::move(base);
  n->slot = exponent;
  return n;
}

NodePtr sin(NodePtr a) {
  if (is_const(a)) return constant(std::sin(a->value));
  return node(Op::Sin, std::move(a));
}

NodePtr cos(NodePtr a) {
  if (is_const(a)) return constant(std::cos(a->value));
  return node(Op::Cos, std::move(a));
}

NodePtr exp(NodePtr a) {
  if (is_const(a)) return constant(std::exp(a->value));
  return node(Op::Exp, std::move(a));
}

}  // namespace make

// ---------------------------------------------------------------------------
// Expr

Expr::Expr() : root_(make::constant(0.0)), vars_(std::make_shared<const std::vector<std::string>>()) {}

Expr::Expr(NodePtr root, std::vector<std::string> variables)
    : root_(std::move(root)), vars_(std::make_shared<const std::vector<std::string>>(std::move(variables))) {}

int Expr::slot_of(std::string_view name) const {
  const auto it = std::find(vars_->begin(), vars_->end(), name);
  return it == vars_->end() ? -1 : static_cast<int>(it - vars_->begin());
}

bool Expr::uses(int slot) const { return uses_slot(*root_, slot); }

bool Expr::is_constant() const { return !has_vars(*root_); }

double Expr::evaluate(std::span<const double> values) const {
  if (values.size() < vars_->size()) throw DomainError("too few variable values");
  return eval_node(*root_, values);
}

bool operator==(const Expr& a, const Expr& b) {
  return *a.vars_ == *b.vars_ && same_tree(*a.root_, *b.root_);
}

Expr parse_expr(std::string_view source, std::vector<std::string> allowed_vars) {
  Parser parser(source, allowed_vars);
  NodePtr root = parser.parse();
  return Expr(std::move(root), std::move(allowed_vars));
}

double eval_expr(const Expr& e, const std::map<std::string, double, std::less<>>& bindings) {
  const auto& vars = e.variables();
  std::vector<double> values(vars.size(), 0.0);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto it = bindings.find(vars[i]);
    if (it != bindings.end()) {
      values[i] = it->second;
    } else if (e.uses(static_cast<int>(i))) {
      throw DomainError("unbound variable '" + vars[i] + "'");
    }
  }
  return e.evaluate(values);
}

Expr differentiate(const Expr& e, std::string_view var) {
  return Expr(derive(e.root_ptr(), e.slot_of(var)), e.variables());
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e.root(), e.variables(), out);
  return out;
}

// ---------------------------------------------------------------------------
// Signal

Signal::Signal() : derivatives_{Expr(make::constant(0.0), {"t"})} {}

Signal::Signal(Expr base, int max_order) {
  if (base.variables() != std::vector<std::string>{"t"}) {
    throw ValidationError("signal must be an expression of t only");
  }
  derivatives_.reserve(static_cast<std::size_t>(std::max(max_order, 0)) + 1);
  derivatives_.push_back(std::move(base));
  for (int q = 1; q <= max_order; ++q) derivatives_.push_back(differentiate(derivatives_.back(), "t"));
}

Signal Signal::parse(std::string_view source, int max_order) {
  return Signal(parse_expr(source, {"t"}), max_order);
}

double Signal::derivative(int order, double t) const { return derivative_expr(order).evaluate({t}); }

const Expr& Signal::derivative_expr(int order) const {
  if (order < 0 || order > max_order()) {
    throw DomainError("signal derivative of order " + std::to_string(order) + " not available");
  }
  return derivatives_[static_cast<std::size_t>(order)];
}

}  // namespace adrc::expr
