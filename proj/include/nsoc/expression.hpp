#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace nsoc {

class ExpressionError : public std::invalid_argument {
 public:
  ExpressionError(const std::string& what, std::size_t pos)
      : std::invalid_argument(what), pos_(pos) {}
  /// Character offset into the source text.
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

/**
 * Compiled arithmetic expression over the coordinates x1, x2.
 *
 * Grammar: + - * / ^ (right-associative), unary minus, parentheses, numeric
 * literals, the constant pi and the functions sin, cos, exp, abs, min, max.
 */
class Expression {
 public:
  explicit Expression(const std::string& source);

  double operator()(double x1, double x2) const;
  const std::string& source() const { return source_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace nsoc
