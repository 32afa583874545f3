#pragma once

#include "eukit/blockarrow.hpp"
#include "eukit/dimensions.hpp"
#include "eukit/oracle.hpp"
#include "eukit/points.hpp"
#include "eukit/weights.hpp"

namespace eukit {

// Expected utility U(x) = sum_s a_s u(x0, xs) assembled from a state
// utility and probability weights. Summations run in ascending state order
// so results are bit-reproducible across thread counts.
class ExpectedUtility {
 public:
  ExpectedUtility(VnmOracle vnm, ProbabilityWeights weights, Dimensions dims);

  const Dimensions& dims() const { return dims_; }
  const ProbabilityWeights& weights() const { return weights_; }
  const VnmOracle& vnm() const { return vnm_; }

  double eval(const Vector& x_flat) const;
  double eval(const PointG& x) const { return eval(x.flat()); }

  // Layout: x0 block carries sum_s a_s D_{x0}u(x0,xs); state block s carries
  // a_s D_{xs}u(x0,xs); x0 first, states ascending.
  Vector gradient(const Vector& x_flat) const;
  Vector gradient(const PointG& x) const { return gradient(x.flat()); }

  // Corner A0 = sum_s a_s D2_{x0,x0}u; arms Bs = a_s D2_{x0,xs}u; diagonals
  // Ds = a_s D2_{xs,xs}u. Cross-state blocks are structural zeros.
  BlockArrowHessian hessian(const Vector& x_flat) const;
  BlockArrowHessian hessian(const PointG& x) const { return hessian(x.flat()); }

  // The same function as a generic G-dimensional field (Hessian densified).
  ScalarField as_field() const;

 private:
  void check_dims(const Vector& x_flat) const;
  // (x0, xs) pair for state s, 0-based.
  Vector pair_at(const Vector& x_flat, int s) const;

  VnmOracle vnm_;
  ProbabilityWeights weights_;
  Dimensions dims_;
};

// The diagonal embedding (x, y) -> (x, y, ..., y) of R_{++}^{2C} into
// R_{++}^{G}.
Vector embed_diagonal(const Vector& pair_flat, const Dimensions& dims);

// Restriction of a G-dimensional utility to the diagonal: recovers the
// state-utility level from the expected-utility level. The source may be
// any field with gradient and Hessian oracles, not only an assembled
// ExpectedUtility, so the downward direction of the equivalence is testable
// against black boxes.
class RestrictedUtility {
 public:
  RestrictedUtility(ScalarField source, Dimensions dims);

  const Dimensions& dims() const { return dims_; }

  double value(const Vector& pair_flat) const;
  double value(const Point2C& p) const { return value(p.flat()); }

  // First block: the x0-partial of the source at the diagonal point; second
  // block: the sum of the state partials there.
  Vector gradient(const Vector& pair_flat) const;
  Vector gradient(const Point2C& p) const { return gradient(p.flat()); }

  // Top-left D2_{x0,x0}; top-right sum_s D2_{x0,xs}; bottom-right
  // sum_{i,j} D2_{xi,xj}; all at the diagonal point, symmetrized.
  Matrix hessian(const Vector& pair_flat) const;
  Matrix hessian(const Point2C& p) const { return hessian(p.flat()); }

  // Package as a 2C state-utility oracle (provenance inherited from source).
  VnmOracle as_vnm_oracle() const;

 private:
  ScalarField source_;
  Dimensions dims_;
};

}  // namespace eukit
