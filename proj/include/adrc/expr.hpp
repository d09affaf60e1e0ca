#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adrc::expr {

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

// One vertex of an expression tree. `slot` is the variable index for Var and
// the exponent for Pow; unused otherwise.
struct Node {
  Op op = Op::Const;
  double value = 0.0;
  int slot = 0;
  NodePtr lhs;
  NodePtr rhs;
};

// Node factories. These fold constant subtrees and the identities x+0, x*1,
// x*0, x^1 and x^0; nothing else is simplified.
namespace make {
NodePtr constant(double v);
NodePtr variable(int slot);
NodePtr neg(NodePtr a);
NodePtr add(NodePtr a, NodePtr b);
NodePtr sub(NodePtr a, NodePtr b);
NodePtr mul(NodePtr a, NodePtr b);
NodePtr div(NodePtr a, NodePtr b);
NodePtr pow(NodePtr base, int exponent);
NodePtr sin(NodePtr a);
NodePtr cos(NodePtr a);
NodePtr exp(NodePtr a);
}  // namespace make

/// An immutable scalar expression bound to an ordered list of variable names.
///
/// Variables are resolved to slot indices at parse time so evaluation takes a
/// plain array of values in the same order as `variables()`.
class Expr {
 public:
  Expr();
  Expr(NodePtr root, std::vector<std::string> variables);

  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }
  const std::vector<std::string>& variables() const { return *vars_; }

  // Slot of `name` in variables(), or -1.
  int slot_of(std::string_view name) const;
  bool uses(int slot) const;
  bool is_constant() const;

  // Throws DomainError on division by zero.
  double evaluate(std::span<const double> values) const;
  double evaluate(std::initializer_list<double> values) const {
    return evaluate(std::span<const double>(values.begin(), values.size()));
  }

  // Structural equality: same variable list and identical trees (constants
  // compared bitwise).
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr root_;
  std::shared_ptr<const std::vector<std::string>> vars_;
};

Expr parse_expr(std::string_view source, std::vector<std::string> allowed_vars);

// Binding lookup by name. Throws DomainError when a used variable is unbound.
double eval_expr(const Expr& e, const std::map<std::string, double, std::less<>>& bindings);

// Exact symbolic derivative. Differentiating by a name not in variables()
// yields the zero expression.
Expr differentiate(const Expr& e, std::string_view var);

// Text form accepted back by parse_expr.
std::string to_string(const Expr& e);

/// A function of time `t` with its symbolic derivatives precomputed.
class Signal {
 public:
  Signal();
  Signal(Expr base, int max_order);

  // Convenience: parse `source` over {t}.
  static Signal parse(std::string_view source, int max_order);

  const Expr& base() const { return derivatives_.front(); }
  int max_order() const { return static_cast<int>(derivatives_.size()) - 1; }

  double operator()(double t) const { return derivatives_.front().evaluate({t}); }
  double derivative(int order, double t) const;
  const Expr& derivative_expr(int order) const;

 private:
  std::vector<Expr> derivatives_;
};

}  // namespace adrc::expr
