#include "fracstep/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "fracstep/errors.hpp"

namespace fracstep {

namespace {

bool is_unary(Op op) { return op >= Op::Neg && op <= Op::Abs; }

bool is_const(const NodePtr& n, double v) {
  return n->op == Op::Constant && n->value == v;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Constant;
  n->value = v;
  return n;
}

NodePtr make_var(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->op = Op::Variable;
  n->index = index;
  return n;
}

double apply_unary(Op op, double u) {
  switch (op) {
    case Op::Neg: return -u;
    case Op::Sin: return std::sin(u);
    case Op::Cos: return std::cos(u);
    case Op::Exp: return std::exp(u);
    case Op::Ln:
      if (!(u > 0.0)) throw Error(ErrorKind::Domain, "ln of non-positive value");
      return std::log(u);
    case Op::Sqrt:
      if (u < 0.0) throw Error(ErrorKind::Domain, "sqrt of negative value");
      return std::sqrt(u);
    case Op::Abs: return std::fabs(u);
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, "not a unary operator");
}

double apply_binary(Op op, double u, double v) {
  switch (op) {
    case Op::Add: return u + v;
    case Op::Sub: return u - v;
    case Op::Mul: return u * v;
    case Op::Div:
      if (v == 0.0) throw Error(ErrorKind::Domain, "division by zero");
      return u / v;
    case Op::Pow:
      if (u == 0.0 && v < 0.0) throw Error(ErrorKind::Domain, "0 raised to a negative power");
      if (u < 0.0 && std::trunc(v) != v)
        throw Error(ErrorKind::Domain, "negative base with non-integer exponent");
      return std::pow(u, v);
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, "not a binary operator");
}

// Constructors with trivial folding. Folding never hides a finite value
// behind a different one; non-finite folds are left for evaluation to report.
NodePtr make_unary(Op op, NodePtr u) {
  if (u->op == Op::Constant) {
    try {
      double r = apply_unary(op, u->value);
      if (std::isfinite(r)) return make_const(r);
    } catch (const Error&) {
    }
  }
  if (op == Op::Neg && u->op == Op::Neg) return u->lhs;
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(u);
  return n;
}

NodePtr make_binary(Op op, NodePtr u, NodePtr v) {
  if (u->op == Op::Constant && v->op == Op::Constant) {
    try {
      double r = apply_binary(op, u->value, v->value);
      if (std::isfinite(r)) return make_const(r);
    } catch (const Error&) {
    }
  }
  switch (op) {
    case Op::Add:
      if (is_const(u, 0.0)) return v;
      if (is_const(v, 0.0)) return u;
      break;
    case Op::Sub:
      if (is_const(v, 0.0)) return u;
      if (is_const(u, 0.0)) return make_unary(Op::Neg, v);
      break;
    case Op::Mul:
      if (is_const(u, 0.0) || is_const(v, 0.0)) return make_const(0.0);
      if (is_const(u, 1.0)) return v;
      if (is_const(v, 1.0)) return u;
      break;
    case Op::Div:
      if (is_const(v, 1.0)) return u;
      if (is_const(u, 0.0) && v->op == Op::Constant) return make_const(0.0);
      break;
    case Op::Pow:
      if (is_const(v, 1.0)) return u;
      if (is_const(v, 0.0)) return make_const(1.0);
      break;
    default: break;
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(u);
  n->rhs = std::move(v);
  return n;
}

double eval_node(const Node& n, std::span<const double> x) {
  switch (n.op) {
    case Op::Constant: return n.value;
    case Op::Variable: return x[n.index];
    default: break;
  }
  if (is_unary(n.op)) return apply_unary(n.op, eval_node(*n.lhs, x));
  return apply_binary(n.op, eval_node(*n.lhs, x), eval_node(*n.rhs, x));
}

NodePtr diff_node(const NodePtr& n, std::size_t k) {
  const auto& u = n->lhs;
  const auto& v = n->rhs;
  switch (n->op) {
    case Op::Constant: return make_const(0.0);
    case Op::Variable: return make_const(n->index == k ? 1.0 : 0.0);
    case Op::Neg: return make_unary(Op::Neg, diff_node(u, k));
    case Op::Sin:
      return make_binary(Op::Mul, make_unary(Op::Cos, u), diff_node(u, k));
    case Op::Cos:
      return make_unary(Op::Neg,
                        make_binary(Op::Mul, make_unary(Op::Sin, u), diff_node(u, k)));
    case Op::Exp: return make_binary(Op::Mul, n, diff_node(u, k));
    case Op::Ln: return make_binary(Op::Div, diff_node(u, k), u);
    case Op::Sqrt:
      return make_binary(Op::Div, diff_node(u, k), make_binary(Op::Mul, make_const(2.0), n));
    case Op::Abs:
      // d|u| = u/|u| * u'
      return make_binary(Op::Mul, make_binary(Op::Div, u, n), diff_node(u, k));
    case Op::Add: return make_binary(Op::Add, diff_node(u, k), diff_node(v, k));
    case Op::Sub: return make_binary(Op::Sub, diff_node(u, k), diff_node(v, k));
    case Op::Mul:
      return make_binary(Op::Add, make_binary(Op::Mul, diff_node(u, k), v),
                         make_binary(Op::Mul, u, diff_node(v, k)));
    case Op::Div:
      return make_binary(
          Op::Div,
          make_binary(Op::Sub, make_binary(Op::Mul, diff_node(u, k), v),
                      make_binary(Op::Mul, u, diff_node(v, k))),
          make_binary(Op::Mul, v, v));
    case Op::Pow: {
      auto du = diff_node(u, k);
      auto dv = diff_node(v, k);
      if (dv->op == Op::Constant && dv->value == 0.0) {
        // c * u^(c-1) * u'
        auto c_minus_1 = make_binary(Op::Sub, v, make_const(1.0));
        return make_binary(Op::Mul, make_binary(Op::Mul, v, make_binary(Op::Pow, u, c_minus_1)),
                           du);
      }
      auto ln_u = make_unary(Op::Ln, u);
      if (du->op == Op::Constant && du->value == 0.0) {
        return make_binary(Op::Mul, make_binary(Op::Mul, n, ln_u), dv);
      }
      auto inner = make_binary(Op::Add, make_binary(Op::Mul, dv, ln_u),
                               make_binary(Op::Div, make_binary(Op::Mul, v, du), u));
      return make_binary(Op::Mul, n, inner);
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown node");
}

std::string_view unary_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Ln: return "ln";
    case Op::Sqrt: return "sqrt";
    case Op::Abs: return "abs";
    default: return "";
  }
}

char binary_symbol(Op op) {
  switch (op) {
    case Op::Add: return '+';
    case Op::Sub: return '-';
    case Op::Mul: return '*';
    case Op::Div: return '/';
    case Op::Pow: return '^';
    default: return '?';
  }
}

void print_node(const Node& n, const VariableList& vars, std::string& out) {
  switch (n.op) {
    case Op::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", std::fabs(n.value));
      if (std::signbit(n.value)) {
        out += "(-";
        out += buf;
        out += ')';
      } else {
        out += buf;
      }
      return;
    }
    case Op::Variable: out += vars[n.index]; return;
    case Op::Neg:
      out += "(-";
      print_node(*n.lhs, vars, out);
      out += ')';
      return;
    default: break;
  }
  if (is_unary(n.op)) {
    out += unary_name(n.op);
    out += '(';
    print_node(*n.lhs, vars, out);
    out += ')';
    return;
  }
  out += '(';
  print_node(*n.lhs, vars, out);
  out += ' ';
  out += binary_symbol(n.op);
  out += ' ';
  print_node(*n.rhs, vars, out);
  out += ')';
}

std::size_t count_nodes(const Node& n) {
  std::size_t c = 1;
  if (n.lhs) c += count_nodes(*n.lhs);
  if (n.rhs) c += count_nodes(*n.rhs);
  return c;
}

std::size_t find_variable(const VariableList& vars, std::string_view name) {
  auto it = std::find(vars.begin(), vars.end(), name);
  if (it == vars.end()) {
    throw Error(ErrorKind::UnknownSymbol, "unknown variable '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - vars.begin());
}

class Parser {
 public:
  Parser(std::string_view text, const VariableList& vars) : text_(text), vars_(vars) {}

  NodePtr parse() {
    auto n = parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    auto lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Op::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make_binary(Op::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    auto lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Op::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(Op::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_unary(Op::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    auto base = parse_primary();
    if (accept('^')) return make_binary(Op::Pow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits();
      } else {
        pos_ = save;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return make_const(value);
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);

    skip_space();
    bool call = pos_ < text_.size() && text_[pos_] == '(';
    if (call) {
      Op op;
      if (name == "sin") op = Op::Sin;
      else if (name == "cos") op = Op::Cos;
      else if (name == "exp") op = Op::Exp;
      else if (name == "ln") op = Op::Ln;
      else if (name == "sqrt") op = Op::Sqrt;
      else if (name == "abs") op = Op::Abs;
      else throw Error(ErrorKind::UnknownSymbol, "unknown function '" + std::string(name) + "'");
      ++pos_;
      auto arg = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return make_unary(op, arg);
    }
    if (std::find(vars_.begin(), vars_.end(), name) != vars_.end()) {
      return make_var(find_variable(vars_, name));
    }
    if (name == "pi") return make_const(std::numbers::pi);
    throw Error(ErrorKind::UnknownSymbol, "unknown symbol '" + std::string(name) + "'");
  }

  std::string_view text_;
  const VariableList& vars_;
  std::size_t pos_ = 0;
};

void require_same_variables(const Expression& a, const Expression& b) {
  if (a.shared_variables() != b.shared_variables() && a.variables() != b.variables()) {
    throw Error(ErrorKind::InvalidArgument, "expressions are declared over different variables");
  }
}

Expression combine(Op op, const Expression& a, const Expression& b) {
  require_same_variables(a, b);
  return Expression(make_binary(op, a.root_ptr(), b.root_ptr()), a.shared_variables());
}

}  // namespace

Expression::Expression(NodePtr root, std::shared_ptr<const VariableList> variables)
    : root_(std::move(root)), variables_(std::move(variables)) {}

Expression Expression::constant(double value, const VariableList& variables) {
  return Expression(make_const(value), std::make_shared<const VariableList>(variables));
}

Expression Expression::variable(std::string_view name, const VariableList& variables) {
  return Expression(make_var(find_variable(variables, name)),
                    std::make_shared<const VariableList>(variables));
}

double Expression::evaluate(std::span<const double> values) const {
  if (values.size() != variables_->size()) {
    throw Error(ErrorKind::InvalidArgument,
                "expected " + std::to_string(variables_->size()) + " values, got " +
                    std::to_string(values.size()));
  }
  return eval_node(*root_, values);
}

double Expression::evaluate(const EvalPoint& point) const {
  std::vector<double> values;
  values.reserve(variables_->size());
  for (const auto& name : *variables_) {
    auto it = point.find(name);
    if (it == point.end()) {
      throw Error(ErrorKind::InvalidArgument, "no value bound for variable '" + name + "'");
    }
    values.push_back(it->second);
  }
  return eval_node(*root_, values);
}

std::string Expression::to_string() const {
  std::string out;
  print_node(*root_, *variables_, out);
  return out;
}

std::size_t Expression::size() const { return count_nodes(*root_); }

Expression operator+(const Expression& a, const Expression& b) { return combine(Op::Add, a, b); }
Expression operator-(const Expression& a, const Expression& b) { return combine(Op::Sub, a, b); }
Expression operator*(const Expression& a, const Expression& b) { return combine(Op::Mul, a, b); }
Expression operator/(const Expression& a, const Expression& b) { return combine(Op::Div, a, b); }
Expression pow(const Expression& base, const Expression& exponent) {
  return combine(Op::Pow, base, exponent);
}

Expression operator-(const Expression& a) {
  return Expression(make_unary(Op::Neg, a.root_ptr()), a.shared_variables());
}

Expression operator*(double a, const Expression& b) {
  return Expression(make_binary(Op::Mul, make_const(a), b.root_ptr()), b.shared_variables());
}

Expression parse_expression(std::string_view text, VariableList variables) {
  auto vars = std::make_shared<const VariableList>(std::move(variables));
  Parser parser(text, *vars);
  return Expression(parser.parse(), vars);
}

Expression differentiate(const Expression& expr, std::string_view variable) {
  return differentiate(expr, find_variable(expr.variables(), variable));
}

Expression differentiate(const Expression& expr, std::size_t variable_index) {
  if (variable_index >= expr.variables().size()) {
    throw Error(ErrorKind::InvalidArgument, "variable index out of range");
  }
  return Expression(diff_node(expr.root_ptr(), variable_index), expr.shared_variables());
}

}  // namespace fracstep
