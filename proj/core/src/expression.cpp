#include "eukit/expression.hpp"

#include <cctype>
#include <cmath>
#include <vector>

#include "eukit/errors.hpp"

namespace eukit {

struct Expression::Node {
  enum class Kind { constant, variable, add, sub, mul, div, pow, neg, ln, sqrt };
  Kind kind;
  double constant = 0.0;
  int variable = -1;  // flat coordinate index
  std::shared_ptr<const Node> a, b;

  double eval(const Vector& x) const {
    switch (kind) {
      case Kind::constant:
        return constant;
      case Kind::variable:
        return x[variable];
      case Kind::add:
        return a->eval(x) + b->eval(x);
      case Kind::sub:
        return a->eval(x) - b->eval(x);
      case Kind::mul:
        return a->eval(x) * b->eval(x);
      case Kind::div:
        return a->eval(x) / b->eval(x);
      case Kind::pow:
        return std::pow(a->eval(x), b->eval(x));
      case Kind::neg:
        return -a->eval(x);
      case Kind::ln:
        return std::log(a->eval(x));
      case Kind::sqrt:
        return std::sqrt(a->eval(x));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  Parser(const std::string& text, int commodities) : text_(text), c_(commodities) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("expression: " + msg + " at position " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (consume('+'))
        lhs = make(Node::Kind::add, lhs, term());
      else if (consume('-'))
        lhs = make(Node::Kind::sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (true) {
      if (consume('*'))
        lhs = make(Node::Kind::mul, lhs, factor());
      else if (consume('/'))
        lhs = make(Node::Kind::div, lhs, factor());
      else
        return lhs;
    }
  }

  NodePtr factor() {
    NodePtr base = unary();
    if (consume('^')) return make(Node::Kind::pow, base, factor());  // right associative
    return base;
  }

  NodePtr unary() {
    if (consume('-')) return make(Node::Kind::neg, unary());
    return primary();
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (consume('(')) {
      NodePtr e = expr();
      if (!consume(')')) fail("missing ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == 'e' || text_[pos_] == 'E' ||
            ((text_[pos_] == '+' || text_[pos_] == '-') &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
      ++pos_;
    try {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::constant;
      n->constant = std::stod(text_.substr(start, pos_ - start));
      return n;
    } catch (const std::exception&) {
      fail("malformed number '" + text_.substr(start, pos_ - start) + "'");
    }
  }

  NodePtr identifier() {
    const size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_'))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);

    if (name == "ln" || name == "sqrt") {
      if (!consume('(')) fail("'" + name + "' requires parentheses");
      NodePtr arg = expr();
      if (!consume(')')) fail("missing ')'");
      return make(name == "ln" ? Node::Kind::ln : Node::Kind::sqrt, arg);
    }
    if (name == "pow") {
      if (!consume('(')) fail("'pow' requires parentheses");
      NodePtr a = expr();
      if (!consume(',')) fail("'pow' takes two arguments");
      NodePtr b = expr();
      if (!consume(')')) fail("missing ')'");
      return make(Node::Kind::pow, a, b);
    }

    const int index = variable_index(name);
    if (index < 0) fail("unknown identifier '" + name + "'");
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::variable;
    n->variable = index;
    return n;
  }

  // x0..x{C-1} map to coordinates 0..C-1, y0..y{C-1} to C..2C-1;
  // bare x / y are the C = 1 shorthands.
  int variable_index(const std::string& name) const {
    if (name == "x") return c_ == 1 ? 0 : -1;
    if (name == "y") return c_ == 1 ? c_ : -1;
    if (name.size() < 2 || (name[0] != 'x' && name[0] != 'y')) return -1;
    int idx = 0;
    for (size_t i = 1; i < name.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
      idx = idx * 10 + (name[i] - '0');
    }
    if (idx >= c_) return -1;
    return name[0] == 'x' ? idx : c_ + idx;
  }

  const std::string& text_;
  int c_;
  size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text, int commodities) {
  if (commodities < 1) throw DimensionError("expression: commodities must be >= 1");
  if (text.empty()) throw ConfigError("expression: empty");
  Parser parser(text, commodities);
  return Expression(parser.run(), commodities, text);
}

double Expression::operator()(const Vector& pair_flat) const {
  if (pair_flat.size() != 2 * commodities_)
    throw DimensionError("expression: point has wrong size");
  return root_->eval(pair_flat);
}

VnmOracle expression_oracle(const std::string& text, int commodities, const FdSteps& steps) {
  Expression e = Expression::parse(text, commodities);
  return fd_oracle([e](const Vector& x) { return e(x); }, commodities, steps);
}

}  // namespace eukit
