#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skelpair/rational.hpp"

namespace skelpair {

enum class Op { Const, Var, Pi, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Abs, Min, Max };

struct ExprNode {
  Op op = Op::Const;
  Rational value;      // Const
  int var = 0;         // Var, 0-based
  long exponent = 0;   // Pow
  std::vector<std::shared_ptr<const ExprNode>> args;
};

class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const ExprNode> root, std::string text)
      : root_(std::move(root)), text_(std::move(text)) {}

  double eval(std::span<const double> x) const;
  // exact value; only for expressions without sin/cos/exp/pi
  Rational eval_exact(std::span<const Rational> x) const;
  bool is_rational() const;  // no transcendental nodes
  bool is_cube_smooth() const;  // no abs/min/max
  int max_var() const;  // largest variable index used (1-based), 0 if none
  const std::string& text() const { return text_; }
  const ExprNode& root() const { return *root_; }
  std::string to_string() const;  // fully parenthesized, for tests

 private:
  std::shared_ptr<const ExprNode> root_;
  std::string text_;
};

// Variables x1..x{max_vars}; max_vars < 0 means unbounded.
Expr parse_expr(std::string_view text, int max_vars = -1);

}  // namespace skelpair
