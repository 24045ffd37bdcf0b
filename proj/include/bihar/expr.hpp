#pragma once

// Scalar-field expressions over the three chart coordinates.
//
// Grammar (see docs/grammar.md):
//   expr     = term { ("+" | "-") term }
//   term     = unary { ("*" | "/") unary }
//   unary    = "-" unary | power
//   power    = primary [ "^" exponent ]
//   exponent = [ "-" ] integer | "(" [ "-" ] integer ")"
//   primary  = number | identifier | function "(" expr ")" | "(" expr ")"
//
// Named constants are resolved at evaluation time so a single parsed
// expression serves a whole parameter sweep.

#include <array>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bihar/jet.hpp"

namespace bihar {

using Point = std::array<double, 3>;
using Constants = std::map<std::string, double, std::less<>>;

enum class BinaryOp { Add, Sub, Mul, Div };
enum class Function { Exp, Log, Sin, Cos, Sinh, Cosh, Tanh, Sqrt };

std::string_view function_name(Function f);

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct NumberNode {
  double value;
};
struct CoordinateNode {
  int axis;
  std::string name;
};
struct ConstantNode {
  std::string name;
};
struct NegateNode {
  NodePtr operand;
};
struct BinaryNode {
  BinaryOp op;
  NodePtr lhs, rhs;
};
struct PowerNode {
  NodePtr base;
  int exponent;
};
struct CallNode {
  Function fn;
  NodePtr arg;
};

struct Node {
  std::variant<NumberNode, CoordinateNode, ConstantNode, NegateNode, BinaryNode, PowerNode, CallNode> v;
};

/// Symbols an expression may reference: the chart coordinates (in axis
/// order) and the declared constant names.
struct SymbolTable {
  std::array<std::string, 3> coords{"x", "y", "z"};
  std::set<std::string, std::less<>> constants;

  bool is_coordinate(std::string_view name) const;
  int axis_of(std::string_view name) const;  // -1 when not a coordinate
};

class Expr {
 public:
  Expr();  // the literal 0
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  static Expr number(double v);
  static Expr coordinate(int axis, std::string name);
  static Expr constant(std::string name);
  static Expr negate(const Expr& e);
  static Expr binary(BinaryOp op, const Expr& lhs, const Expr& rhs);
  static Expr power(const Expr& base, int exponent);
  static Expr call(Function fn, const Expr& arg);

  const Node& root() const { return *root_; }
  const NodePtr& node() const { return root_; }

  /// Re-parseable text with minimal parentheses.
  std::string to_string() const;

  std::set<std::string> constant_names() const;
  std::set<int> coordinate_axes() const;
  bool depends_on_axis(int axis) const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr root_;
};

Expr parse(std::string_view source, const SymbolTable& symbols);
Expr parse(std::string_view source, const std::array<std::string, 3>& coords,
           const std::set<std::string, std::less<>>& constants = {});

/// Evaluate with exact derivatives up to total order N at `point`.
template <int N>
Jet<N> evaluate(const Expr& e, const Point& point, const Constants& constants);

extern template Jet<0> evaluate<0>(const Expr&, const Point&, const Constants&);
extern template Jet<1> evaluate<1>(const Expr&, const Point&, const Constants&);
extern template Jet<2> evaluate<2>(const Expr&, const Point&, const Constants&);
extern template Jet<3> evaluate<3>(const Expr&, const Point&, const Constants&);

inline ScalarJet2 eval_jet(const Expr& e, const Point& point, const Constants& constants) {
  return evaluate<2>(e, point, constants);
}

inline double eval_value(const Expr& e, const Point& point, const Constants& constants) {
  return evaluate<0>(e, point, constants).value();
}

}  // namespace bihar
