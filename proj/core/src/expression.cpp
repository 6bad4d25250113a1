#include "membrana/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "membrana/errors.hpp"

namespace membrana {

struct Expression::Node {
  enum class Op { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Abs, Sqrt, Log };
  Op op = Op::Number;
  double value = 0.0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;

  double eval(double x) const {
    switch (op) {
      case Op::Number: return value;
      case Op::Var: return x;
      case Op::Neg: return -a->eval(x);
      case Op::Add: return a->eval(x) + b->eval(x);
      case Op::Sub: return a->eval(x) - b->eval(x);
      case Op::Mul: return a->eval(x) * b->eval(x);
      case Op::Div: return a->eval(x) / b->eval(x);
      case Op::Pow: return std::pow(a->eval(x), b->eval(x));
      case Op::Sin: return std::sin(a->eval(x));
      case Op::Cos: return std::cos(a->eval(x));
      case Op::Exp: return std::exp(a->eval(x));
      case Op::Abs: return std::abs(a->eval(x));
      case Op::Sqrt: return std::sqrt(a->eval(x));
      case Op::Log: return std::log(a->eval(x));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->value = value;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ExpressionSyntax,
                what + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) n = make(Node::Op::Add, n, term());
      else if (accept('-')) n = make(Node::Op::Sub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = make(Node::Op::Mul, n, unary());
      else if (accept('/')) n = make(Node::Op::Div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("bad number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return make(Node::Op::Number, nullptr, nullptr, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string_view id = s_.substr(start, pos_ - start);
      if (id == "x" || id == "r") return make(Node::Op::Var);
      if (id == "pi") return make(Node::Op::Number, nullptr, nullptr, std::numbers::pi);
      Node::Op op;
      if (id == "sin") op = Node::Op::Sin;
      else if (id == "cos") op = Node::Op::Cos;
      else if (id == "exp") op = Node::Op::Exp;
      else if (id == "abs") op = Node::Op::Abs;
      else if (id == "sqrt") op = Node::Op::Sqrt;
      else if (id == "log") op = Node::Op::Log;
      else {
        pos_ = start;
        fail("unknown identifier '" + std::string(id) + "'");
      }
      if (!accept('(')) fail("expected '(' after function name");
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return make(op, arg);
    }
    fail("unexpected character");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::string_view source) : source_(source) {
  root_ = Parser(source_).parse();
}

Expression::~Expression() = default;
Expression::Expression(const Expression&) = default;
Expression& Expression::operator=(const Expression&) = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

double Expression::operator()(double x) const { return root_->eval(x); }

}  // namespace membrana
