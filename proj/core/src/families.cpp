#include "eukit/families.hpp"

#include <cmath>

#include "eukit/errors.hpp"

namespace eukit {

namespace {

VnmOracle separable_power(double gamma, int c) {
  // u = sum_i z_i^(1-gamma)/(1-gamma), z over all 2C coordinates.
  const int n = 2 * c;
  auto value = [gamma](const Vector& z) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) v += std::pow(z[i], 1.0 - gamma) / (1.0 - gamma);
    return v;
  };
  auto gradient = [gamma](const Vector& z) {
    Vector g(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) g[i] = std::pow(z[i], -gamma);
    return g;
  };
  auto hessian = [gamma](const Vector& z) {
    Matrix h = Matrix::Zero(z.size(), z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) h(i, i) = -gamma * std::pow(z[i], -gamma - 1.0);
    return h;
  };
  return VnmOracle(c, ScalarField(n, value, gradient, hessian, DerivativeProvenance::analytic));
}

VnmOracle log_additive(int c) {
  const int n = 2 * c;
  auto value = [](const Vector& z) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) v += std::log(z[i]);
    return v;
  };
  auto gradient = [](const Vector& z) { return Vector(z.cwiseInverse()); };
  auto hessian = [](const Vector& z) {
    Matrix h = Matrix::Zero(z.size(), z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) h(i, i) = -1.0 / (z[i] * z[i]);
    return h;
  };
  return VnmOracle(c, ScalarField(n, value, gradient, hessian, DerivativeProvenance::analytic));
}

VnmOracle log_of_sum(int c) {
  const int n = 2 * c;
  auto value = [](const Vector& z) { return std::log(z.sum()); };
  auto gradient = [](const Vector& z) {
    return Vector(Vector::Constant(z.size(), 1.0 / z.sum()));
  };
  auto hessian = [](const Vector& z) {
    const double t = z.sum();
    return Matrix(Matrix::Constant(z.size(), z.size(), -1.0 / (t * t)));
  };
  return VnmOracle(c, ScalarField(n, value, gradient, hessian, DerivativeProvenance::analytic));
}

VnmOracle linear(int c) {
  const int n = 2 * c;
  auto value = [](const Vector& z) { return z.sum(); };
  auto gradient = [](const Vector& z) { return Vector(Vector::Ones(z.size())); };
  auto hessian = [](const Vector& z) { return Matrix(Matrix::Zero(z.size(), z.size())); };
  return VnmOracle(c, ScalarField(n, value, gradient, hessian, DerivativeProvenance::analytic));
}

VnmOracle linear_plus_log(int c) {
  const int n = 2 * c;
  auto value = [c](const Vector& z) {
    double v = 0.0;
    for (int i = 0; i < c; ++i) v += z[i];
    for (int i = c; i < 2 * c; ++i) v += std::log(z[i]);
    return v;
  };
  auto gradient = [c](const Vector& z) {
    Vector g(z.size());
    for (int i = 0; i < c; ++i) g[i] = 1.0;
    for (int i = c; i < 2 * c; ++i) g[i] = 1.0 / z[i];
    return g;
  };
  auto hessian = [c](const Vector& z) {
    Matrix h = Matrix::Zero(z.size(), z.size());
    for (int i = c; i < 2 * c; ++i) h(i, i) = -1.0 / (z[i] * z[i]);
    return h;
  };
  return VnmOracle(c, ScalarField(n, value, gradient, hessian, DerivativeProvenance::analytic));
}

}  // namespace

VnmOracle builtin_family(const std::string& name, const std::vector<double>& params,
                         int commodities) {
  if (commodities < 1) throw DimensionError("builtin_family: commodities must be >= 1");

  auto expect_no_params = [&]() {
    if (!params.empty()) throw ConfigError("family '" + name + "' takes no parameters");
  };

  if (name == "log-additive") {
    expect_no_params();
    return log_additive(commodities);
  }
  if (name == "crra") {
    if (params.size() != 1) throw ConfigError("family 'crra' takes exactly one parameter gamma");
    const double gamma = params[0];
    if (!(gamma > 0.0)) throw ConfigError("crra: gamma must be > 0");
    if (gamma == 1.0) throw ConfigError("crra: gamma must differ from 1 (use log-additive)");
    return separable_power(gamma, commodities);
  }
  if (name == "sqrt-additive") {
    expect_no_params();
    return separable_power(0.5, commodities);
  }
  if (name == "log-of-sum") {
    expect_no_params();
    return log_of_sum(commodities);
  }
  if (name == "linear") {
    expect_no_params();
    return linear(commodities);
  }
  if (name == "linear-plus-log") {
    expect_no_params();
    return linear_plus_log(commodities);
  }
  throw ConfigError("unknown utility family '" + name + "'");
}

const std::vector<std::string>& builtin_family_names() {
  static const std::vector<std::string> names = {
      "log-additive", "crra", "sqrt-additive", "log-of-sum", "linear", "linear-plus-log"};
  return names;
}

VnmOracle tilted_family(double alpha, double beta, int commodities) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw ConfigError("tilted_family: alpha, beta must be > 0");
  const int c = commodities;
  const int n = 2 * c;
  auto value = [alpha, beta, c](const Vector& z) {
    double v = 0.0;
    for (int i = 0; i < c; ++i) v += alpha * z[i];
    for (int i = c; i < 2 * c; ++i) v += beta * std::log(z[i]);
    return v;
  };
  auto gradient = [alpha, beta, c](const Vector& z) {
    Vector g(z.size());
    for (int i = 0; i < c; ++i) g[i] = alpha;
    for (int i = c; i < 2 * c; ++i) g[i] = beta / z[i];
    return g;
  };
  auto hessian = [beta, c](const Vector& z) {
    Matrix h = Matrix::Zero(z.size(), z.size());
    for (int i = c; i < 2 * c; ++i) h(i, i) = -beta / (z[i] * z[i]);
    return h;
  };
  return VnmOracle(c, ScalarField(n, value, gradient, hessian, DerivativeProvenance::analytic));
}

}  // namespace eukit
