#pragma once

#include <functional>

#include "eukit/oracle.hpp"
#include "eukit/types.hpp"

namespace eukit {

// Central-difference step sizes. In absolute mode the same step is used at
// every coordinate; in relative mode the step scales with the coordinate
// magnitude, which is what multi-decade sampling boxes need.
struct FdSteps {
  double gradient_step = 1e-5;
  double hessian_step = 1e-4;
  bool relative = false;

  static FdSteps absolute(double grad, double hess) { return {grad, hess, false}; }
  static FdSteps relative_steps(double grad = 1e-5, double hess = 1e-4) {
    return {grad, hess, true};
  }
};

using ValueFn = std::function<double(const Vector&)>;

// Central difference gradient. Throws DomainError if a perturbed point
// leaves the positive orthant.
Vector fd_gradient(const ValueFn& f, const Vector& x, const FdSteps& steps);

// Hessian by nested central differences (outer step on the fd gradient),
// before symmetrization. Exposed so smoothness checks can measure the
// raw symmetry defect.
Matrix fd_hessian_raw(const ValueFn& f, const Vector& x, const FdSteps& steps);

// Symmetrized nested central-difference Hessian.
Matrix fd_hessian(const ValueFn& f, const Vector& x, const FdSteps& steps);

double fd_gradient_step_at(const FdSteps& steps, double coord);
double fd_hessian_step_at(const FdSteps& steps, double coord);

// Agreement between an oracle's analytic derivatives and its own fd shadow,
// plus the raw fd Hessian symmetry defect. Tolerances combine the stated
// relative budgets (1e-6 gradient, 1e-4 Hessian) with the rounding floor of
// nested central differences, eps * (value scale) / (product of steps) --
// without the floor, entries touched by catastrophic cancellation at
// mixed-magnitude points would fail for perfectly smooth functions.
struct FdConsistency {
  bool compared_analytic = false;
  bool gradient_ok = true;
  bool hessian_ok = true;
  bool symmetric_ok = true;
  double worst_defect = 0.0;  // largest excess over tolerance among failures
};

FdConsistency fd_consistency(const ScalarField& f, const Vector& x, const FdSteps& steps);

// Finite-difference oracle over a black-box value function on R_{++}^{2C}.
// `step` is the absolute gradient step; the Hessian outer step is 10x it,
// so the default 1e-5 gives the standard 1e-5/1e-4 pairing.
VnmOracle fd_oracle(ValueFn value, int commodities, double step);

// Full-control variant (used for relative-stepped shadows over wide boxes).
VnmOracle fd_oracle(ValueFn value, int commodities, const FdSteps& steps);

// Generic finite-difference field of any dimension.
ScalarField fd_field(ValueFn value, int dim, const FdSteps& steps);

}  // namespace eukit
