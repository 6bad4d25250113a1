#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace membrana {

/// Compiled scalar expression of the coordinate.
///
/// Grammar: + - * / ^ (right associative), unary minus, parentheses,
/// numbers, the functions sin cos exp abs sqrt log, the constant pi, and the
/// coordinate symbol x or r. Throws ExpressionSyntax on malformed input.
class Expression {
 public:
  explicit Expression(std::string_view source);
  ~Expression();
  Expression(const Expression&);
  Expression& operator=(const Expression&);
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;

  double operator()(double x) const;
  const std::string& source() const noexcept { return source_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace membrana
