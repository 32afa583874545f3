#include "eukit/oracle.hpp"

#include <cmath>
#include <string>

namespace eukit {

const char* to_string(DerivativeProvenance p) {
  return p == DerivativeProvenance::analytic ? "analytic" : "finite-difference";
}

Matrix enforce_symmetric(const Matrix& raw, const char* what) {
  if (raw.rows() != raw.cols())
    throw DimensionError(std::string(what) + ": Hessian is not square");
  const Eigen::Index n = raw.rows();
  double max_abs = 0.0;
  double max_defect = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      max_abs = std::max(max_abs, std::max(std::abs(raw(i, j)), std::abs(raw(j, i))));
      max_defect = std::max(max_defect, std::abs(raw(i, j) - raw(j, i)));
    }
  }
  if (max_defect > 1e-8 * (1.0 + max_abs))
    throw DomainError(std::string(what) + ": Hessian asymmetry " + std::to_string(max_defect) +
                      " exceeds 1e-8 relative tolerance");
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i, i) = raw(i, i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = 0.5 * (raw(i, j) + raw(j, i));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

ScalarField::ScalarField(int dim, ValueFn value, GradientFn gradient, HessianFn hessian,
                         DerivativeProvenance provenance)
    : dim_(dim),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      provenance_(provenance) {
  if (dim_ < 1) throw DimensionError("ScalarField: dimension must be >= 1");
}

void ScalarField::check_dim(const Vector& x) const {
  if (x.size() != dim_)
    throw DimensionError("ScalarField: point has size " + std::to_string(x.size()) +
                         ", expected " + std::to_string(dim_));
}

double ScalarField::value(const Vector& x) const {
  check_dim(x);
  return value_(x);
}

Vector ScalarField::gradient(const Vector& x) const {
  check_dim(x);
  Vector g = gradient_(x);
  if (g.size() != dim_) throw DimensionError("ScalarField: gradient oracle returned wrong size");
  return g;
}

Matrix ScalarField::hessian(const Vector& x) const {
  check_dim(x);
  Matrix h = hessian_(x);
  if (h.rows() != dim_ || h.cols() != dim_)
    throw DimensionError("ScalarField: hessian oracle returned wrong size");
  return enforce_symmetric(h, "ScalarField");
}

VnmOracle::VnmOracle(int commodities, ScalarField field)
    : commodities_(commodities), field_(std::move(field)) {
  if (commodities_ < 1) throw DimensionError("VnmOracle: commodities must be >= 1");
  if (field_.dim() != 2 * commodities_)
    throw DimensionError("VnmOracle: field dimension must be 2*C");
}

}  // namespace eukit
