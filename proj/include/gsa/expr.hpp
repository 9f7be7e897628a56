#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gsa::expr {

enum class Kind { number, variable, negate, binary, call };
enum class BinOp { add, sub, mul, div, pow };
enum class Func { sin, cos, tan, asin, exp, ln, log10, sqrt, abs, min, max, pow };

struct Node {
  Kind kind = Kind::number;
  double value = 0.0;       // number
  std::string name;         // variable
  BinOp op = BinOp::add;    // binary
  Func func = Func::sin;    // call
  std::vector<std::size_t> args;  // child node indices
  std::size_t offset = 0;   // byte offset in the source text
};

/// Syntax tree stored as a node pool; children precede parents.
class Expr {
 public:
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t root() const { return root_; }

  /// Fully parenthesized source text that reparses to an equal tree.
  std::string to_string() const;
  std::string to_string(std::size_t node) const;

  /// Referenced names in first-use order, without repeats.
  std::vector<std::string> variables() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  friend class Parser;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
};

/// Grammar (loosest first): sum := product (('+'|'-') product)*;
/// product := unary (('*'|'/') unary)*; unary := ('-'|'+') unary | power;
/// power := primary ('^' unary)?; primary := number | name | name '(' args ')' | '(' sum ')'.
/// '^' binds tighter than unary minus and is right-associative.
/// Throws ParseError carrying the byte offset of the offending token.
Expr parse(std::string_view source);

std::string_view func_name(Func f);

/// Expression with variables resolved to column indices.
class BoundExpr {
 public:
  BoundExpr() = default;
  BoundExpr(Expr expr, const std::vector<std::string>& names);

  /// Throws Error(Errc::evaluation) naming the failing subexpression on a
  /// math fault (division by zero, log of nonpositive, non-finite result).
  double evaluate(std::span<const double> row) const;

  const Expr& expr() const { return expr_; }

 private:
  Expr expr_;
  std::vector<std::size_t> slot_;  // per node; column index for variables
};

}  // namespace gsa::expr
