#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fracstep {

enum class Op {
  Constant,
  Variable,
  // unary
  Neg,
  Sin,
  Cos,
  Exp,
  Ln,
  Sqrt,
  Abs,
  // binary
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Constant;
  double value = 0.0;     // Constant
  std::size_t index = 0;  // Variable: position in the variable list
  NodePtr lhs;            // unary operand, or left operand
  NodePtr rhs;            // right operand
};

using VariableList = std::vector<std::string>;

/// Named variable bindings. Lookups accept string_view.
using EvalPoint = std::map<std::string, double, std::less<>>;

/// Immutable symbolic function of the variables it was declared over.
///
/// Copies share the underlying tree, so passing by value is cheap and the
/// object may be evaluated or differentiated from any number of threads.
class Expression {
 public:
  Expression(NodePtr root, std::shared_ptr<const VariableList> variables);

  static Expression constant(double value, const VariableList& variables);
  static Expression variable(std::string_view name, const VariableList& variables);

  const VariableList& variables() const noexcept { return *variables_; }
  const std::shared_ptr<const VariableList>& shared_variables() const noexcept {
    return variables_;
  }
  const Node& root() const noexcept { return *root_; }
  const NodePtr& root_ptr() const noexcept { return root_; }

  /// Evaluates with values given in declaration order.
  double evaluate(std::span<const double> values) const;
  double evaluate(const EvalPoint& point) const;

  bool is_constant() const noexcept { return root_->op == Op::Constant; }

  /// Fully parenthesised infix text that parses back to the same tree.
  std::string to_string() const;

  /// Number of nodes; shared subtrees are counted once per reference.
  std::size_t size() const;

 private:
  NodePtr root_;
  std::shared_ptr<const VariableList> variables_;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression operator*(double a, const Expression& b);
Expression pow(const Expression& base, const Expression& exponent);

/// Parses an infix formula over `variables`.
///
/// Grammar: `+ - * / ^`, parentheses, `sin cos exp ln sqrt abs`, the
/// constant `pi`, and decimal literals with optional exponent. `^` is right
/// associative and binds tighter than unary minus, so `-x^2` is `-(x^2)`.
/// Throws SyntaxError on malformed input and Error(UnknownSymbol) for
/// undeclared names.
Expression parse_expression(std::string_view text, VariableList variables);

/// Exact symbolic partial derivative. The result is not simplified beyond
/// trivial constant folding.
Expression differentiate(const Expression& expr, std::string_view variable);
Expression differentiate(const Expression& expr, std::size_t variable_index);

}  // namespace fracstep
