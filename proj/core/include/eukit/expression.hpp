#pragma once

#include <memory>
#include <string>

#include "eukit/fd.hpp"
#include "eukit/oracle.hpp"

namespace eukit {

// Arithmetic expressions over the coordinates of (x0, xs): operators
// + - * / ^, functions ln, sqrt, pow, numeric literals, parentheses.
// Variables are x0..x{C-1} for today's bundle and y0..y{C-1} for the state
// bundle (x and y are accepted for C = 1). Parse errors raise ConfigError
// naming the offending token.
class Expression {
 public:
  static Expression parse(const std::string& text, int commodities);

  double operator()(const Vector& pair_flat) const;
  int commodities() const { return commodities_; }
  const std::string& text() const { return text_; }

  struct Node;

 private:
  Expression(std::shared_ptr<const Node> root, int commodities, std::string text)
      : root_(std::move(root)), commodities_(commodities), text_(std::move(text)) {}

  std::shared_ptr<const Node> root_;
  int commodities_;
  std::string text_;
};

// Finite-difference oracle over a parsed expression; user utilities get no
// analytic derivatives.
VnmOracle expression_oracle(const std::string& text, int commodities, const FdSteps& steps);

}  // namespace eukit
