#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "navgeo/numkernel.hpp"

namespace navgeo {

// Scalar expression over chart coordinates x1..xn (or a single curve
// parameter t). Grammar:
//
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | x<k> | t | pi | e | func '(' sum ')' | '(' sum ')'
//   func    := sin | cos | exp | log | sqrt | tanh
//
// Immutable after parsing; evaluation is pure.
class Expression {
 public:
  enum class Variables : std::uint8_t { Coordinates, Parameter };

  // Coordinates x1..x<dim>. Throws SyntaxError (with byte offset),
  // UnknownIdentifier or ArityError.
  static Expression parse(std::string_view text, int dim);
  // Single variable `t`.
  static Expression parse_parameter(std::string_view text);

  int dim() const { return dim_; }
  Variables variables() const { return vars_; }
  // 1-based variable indices appearing in the expression.
  const std::set<int>& free_vars() const { return free_vars_; }

  double eval(std::span<const double> x) const;
  Dual eval(std::span<const Dual> x) const;
  // (value, directional derivative along dir).
  std::pair<double, double> eval_dual(std::span<const double> x,
                                      std::span<const double> dir) const;

  // Canonical text that parses back to a structurally equal expression.
  std::string render() const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  enum class Op : std::uint8_t {
    Literal, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Log, Sqrt, Tanh
  };
  struct Node {
    Op op;
    double literal = 0.0;
    int var = 0;  // 0-based
    int lhs = -1;
    int rhs = -1;
  };

  class Parser;

  template <class T>
  T eval_node(int index, std::span<const T> x) const;
  void render_node(int index, int parent_prec, bool right_side, std::string& out) const;
  static bool equal_nodes(const Expression& a, int ia, const Expression& b, int ib);

  std::vector<Node> nodes_;
  int root_ = -1;
  int dim_ = 0;
  Variables vars_ = Variables::Coordinates;
  std::set<int> free_vars_;
  std::string source_;
};

}  // namespace navgeo
