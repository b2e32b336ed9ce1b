#ifndef PSIFRAC_EXPR_HPP
#define PSIFRAC_EXPR_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace psifrac {

using Bindings = std::map<std::string, double>;

/// Immutable arithmetic expression over named real variables.
///
/// Grammar (see docs/expressions.md): literals, identifiers, unary minus,
/// + - * / ^ with ^ right-associative and binding tighter than unary minus,
/// the functions sin cos exp ln sqrt abs pow min max, and the constant pi.
class Expr {
 public:
  static Expr parse(std::string_view source);

  /// Evaluate with every free variable bound. Division by zero, ln of a
  /// nonpositive value, sqrt of a negative value, and non-finite results
  /// raise EvalError; a missing binding raises UnboundVariable.
  double eval(const Bindings& bindings) const;

  std::set<std::string> free_vars() const;

  /// Reprints to a source string that parses back to an equivalent tree.
  std::string str() const;

  /// Structural combination: this + other.
  Expr operator+(const Expr& other) const;

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace psifrac

#endif
