#include "nsoc/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace nsoc {

struct Expression::Node {
  enum class Op { Number, X1, X2, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Abs, Min, Max };
  Op op = Op::Number;
  double value = 0.0;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double x1, double x2) const {
    auto a = [&](int i) { return args[i]->eval(x1, x2); };
    switch (op) {
      case Op::Number: return value;
      case Op::X1: return x1;
      case Op::X2: return x2;
      case Op::Neg: return -a(0);
      case Op::Add: return a(0) + a(1);
      case Op::Sub: return a(0) - a(1);
      case Op::Mul: return a(0) * a(1);
      case Op::Div: return a(0) / a(1);
      case Op::Pow: return std::pow(a(0), a(1));
      case Op::Sin: return std::sin(a(0));
      case Op::Cos: return std::cos(a(0));
      case Op::Exp: return std::exp(a(0));
      case Op::Abs: return std::abs(a(0));
      case Op::Min: return std::min(a(0), a(1));
      case Op::Max: return std::max(a(0), a(1));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, std::vector<NodePtr> args = {}, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = std::move(args);
  n->value = value;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ExpressionError("expression '" + s_ + "' at offset " + std::to_string(pos_) + ": " + msg,
                          pos_);
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
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (accept('+')) lhs = make(Node::Op::Add, {lhs, product()});
      else if (accept('-')) lhs = make(Node::Op::Sub, {lhs, product()});
      else return lhs;
    }
  }
  NodePtr product() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Node::Op::Mul, {lhs, unary()});
      else if (accept('/')) lhs = make(Node::Op::Div, {lhs, unary()});
      else return lhs;
    }
  }
  // -x^2 parses as -(x^2)
  NodePtr unary() {
    if (accept('-')) return make(Node::Op::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Op::Pow, {base, unary()});
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr e = sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return make(Node::Op::Number, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "x1") return make(Node::Op::X1);
      if (name == "x2") return make(Node::Op::X2);
      if (name == "pi") return make(Node::Op::Number, {}, std::numbers::pi);
      Node::Op op;
      int arity = 1;
      if (name == "sin") op = Node::Op::Sin;
      else if (name == "cos") op = Node::Op::Cos;
      else if (name == "exp") op = Node::Op::Exp;
      else if (name == "abs") op = Node::Op::Abs;
      else if (name == "min") { op = Node::Op::Min; arity = 2; }
      else if (name == "max") { op = Node::Op::Max; arity = 2; }
      else {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      expect('(');
      std::vector<NodePtr> args{sum()};
      for (int i = 1; i < arity; ++i) {
        expect(',');
        args.push_back(sum());
      }
      expect(')');
      return make(op, std::move(args));
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }
};

}  // namespace

Expression::Expression(const std::string& source)
    : source_(source), root_(Parser(source_).parse()) {}

double Expression::operator()(double x1, double x2) const { return root_->eval(x1, x2); }

}  // namespace nsoc
