#pragma once

#include <functional>
#include <memory>
#include <string>

#include "eukit/errors.hpp"
#include "eukit/points.hpp"
#include "eukit/types.hpp"

namespace eukit {

enum class DerivativeProvenance { analytic, finite_difference };

const char* to_string(DerivativeProvenance p);

// A twice-differentiable scalar field on the strictly positive orthant of
// R^dim, presented through value/gradient/Hessian callables.
//
// The callables must be deterministic and re-entrant. Hessian output is
// symmetrized entry-pair by entry-pair, so callers always see H == H^T
// bitwise; a raw asymmetry beyond 1e-8 relative to the largest entry is
// treated as a broken oracle and rejected.
class ScalarField {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;
  using HessianFn = std::function<Matrix(const Vector&)>;

  ScalarField(int dim, ValueFn value, GradientFn gradient, HessianFn hessian,
              DerivativeProvenance provenance);

  int dim() const { return dim_; }
  DerivativeProvenance provenance() const { return provenance_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  Matrix hessian(const Vector& x) const;

 private:
  void check_dim(const Vector& x) const;

  int dim_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
  DerivativeProvenance provenance_;
};

// Symmetrize so the result is bitwise symmetric; throws DomainError if the
// asymmetry exceeds 1e-8 relative to the largest entry.
Matrix enforce_symmetric(const Matrix& raw, const char* what);

// A von Neumann-Morgenstern state utility u : R_{++}^{2C} -> R.
class VnmOracle {
 public:
  VnmOracle(int commodities, ScalarField field);

  int commodities() const { return commodities_; }
  int dim() const { return field_.dim(); }
  DerivativeProvenance provenance() const { return field_.provenance(); }
  const ScalarField& field() const { return field_; }

  double value(const Vector& flat) const { return field_.value(flat); }
  Vector gradient(const Vector& flat) const { return field_.gradient(flat); }
  Matrix hessian(const Vector& flat) const { return field_.hessian(flat); }

  double value(const Point2C& p) const { return field_.value(p.flat()); }
  Vector gradient(const Point2C& p) const { return field_.gradient(p.flat()); }
  Matrix hessian(const Point2C& p) const { return field_.hessian(p.flat()); }

 private:
  int commodities_;
  ScalarField field_;
};

}  // namespace eukit
