#pragma once

#include <string>
#include <vector>

#include "eukit/dimensions.hpp"
#include "eukit/oracle.hpp"

namespace eukit {

// Registry of built-in analytic state-utility families over (x0, xs) in
// R_{++}^{2C}. All gradients and Hessians are closed-form.
//
//   log-additive     u = sum_i ln x0_i + sum_i ln xs_i
//   crra (gamma)     u = sum_i x0_i^(1-g)/(1-g) + sum_i xs_i^(1-g)/(1-g),  g > 0, g != 1
//   sqrt-additive    the crra gamma = 1/2 case
//   log-of-sum       u = ln(sum_i x0_i + sum_i xs_i)
//   linear           u = sum_i x0_i + sum_i xs_i
//   linear-plus-log  u = sum_i x0_i + sum_i ln xs_i
//
// Unknown names and invalid crra parameters raise ConfigError.
VnmOracle builtin_family(const std::string& name, const std::vector<double>& params,
                         int commodities);

inline VnmOracle builtin_family(const std::string& name, const std::vector<double>& params,
                                const Dimensions& dims) {
  return builtin_family(name, params, dims.commodities());
}

const std::vector<std::string>& builtin_family_names();

// Two-parameter tilt family u = alpha * sum_i x0_i + beta * sum_i ln xs_i
// (alpha, beta > 0). Linear in today's bundle, strictly concave in the state
// bundle: it sits in the gap between negative definiteness and
// differentiable strict quasi-concavity that the counterexample search scans.
VnmOracle tilted_family(double alpha, double beta, int commodities);

}  // namespace eukit
