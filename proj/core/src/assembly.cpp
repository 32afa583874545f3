#include "eukit/assembly.hpp"

#include <string>

#include "eukit/errors.hpp"

namespace eukit {

ExpectedUtility::ExpectedUtility(VnmOracle vnm, ProbabilityWeights weights, Dimensions dims)
    : vnm_(std::move(vnm)), weights_(std::move(weights)), dims_(dims) {
  if (weights_.states() != dims_.states())
    throw DimensionError("ExpectedUtility: weights length must equal number of states");
  if (vnm_.commodities() != dims_.commodities())
    throw DimensionError("ExpectedUtility: oracle commodities must match dimensions");
}

void ExpectedUtility::check_dims(const Vector& x_flat) const {
  if (x_flat.size() != dims_.total())
    throw DimensionError("ExpectedUtility: point has size " + std::to_string(x_flat.size()) +
                         ", expected " + std::to_string(dims_.total()));
}

Vector ExpectedUtility::pair_at(const Vector& x_flat, int s) const {
  const int c = dims_.commodities();
  Vector pair(2 * c);
  pair.head(c) = x_flat.head(c);
  pair.tail(c) = x_flat.segment(c * (s + 1), c);
  return pair;
}

double ExpectedUtility::eval(const Vector& x_flat) const {
  check_dims(x_flat);
  double acc = 0.0;
  for (int s = 0; s < dims_.states(); ++s) acc += weights_[s] * vnm_.value(pair_at(x_flat, s));
  return acc;
}

Vector ExpectedUtility::gradient(const Vector& x_flat) const {
  check_dims(x_flat);
  const int c = dims_.commodities();
  Vector out = Vector::Zero(dims_.total());
  for (int s = 0; s < dims_.states(); ++s) {
    const Vector g = vnm_.gradient(pair_at(x_flat, s));
    out.head(c) += weights_[s] * g.head(c);
    out.segment(c * (s + 1), c) = weights_[s] * g.tail(c);
  }
  return out;
}

BlockArrowHessian ExpectedUtility::hessian(const Vector& x_flat) const {
  check_dims(x_flat);
  const int c = dims_.commodities();
  Matrix corner = Matrix::Zero(c, c);
  std::vector<Matrix> arms, diags;
  arms.reserve(dims_.states());
  diags.reserve(dims_.states());
  for (int s = 0; s < dims_.states(); ++s) {
    const Matrix h = vnm_.hessian(pair_at(x_flat, s));
    corner += weights_[s] * h.topLeftCorner(c, c);
    arms.push_back(weights_[s] * h.topRightCorner(c, c));
    diags.push_back(weights_[s] * h.bottomRightCorner(c, c));
  }
  return BlockArrowHessian(std::move(corner), std::move(arms), std::move(diags), dims_);
}

ScalarField ExpectedUtility::as_field() const {
  ExpectedUtility self = *this;
  auto value = [self](const Vector& x) { return self.eval(x); };
  auto gradient = [self](const Vector& x) { return self.gradient(x); };
  auto hessian = [self](const Vector& x) { return self.hessian(x).densify(); };
  return ScalarField(dims_.total(), std::move(value), std::move(gradient), std::move(hessian),
                     vnm_.provenance());
}

Vector embed_diagonal(const Vector& pair_flat, const Dimensions& dims) {
  const int c = dims.commodities();
  if (pair_flat.size() != 2 * c)
    throw DimensionError("embed_diagonal: pair point has wrong size");
  Vector out(dims.total());
  out.head(c) = pair_flat.head(c);
  for (int s = 0; s < dims.states(); ++s) out.segment(c * (s + 1), c) = pair_flat.tail(c);
  return out;
}

RestrictedUtility::RestrictedUtility(ScalarField source, Dimensions dims)
    : source_(std::move(source)), dims_(dims) {
  if (source_.dim() != dims_.total())
    throw DimensionError("RestrictedUtility: source dimension must equal C*(S+1)");
}

double RestrictedUtility::value(const Vector& pair_flat) const {
  return source_.value(embed_diagonal(pair_flat, dims_));
}

Vector RestrictedUtility::gradient(const Vector& pair_flat) const {
  const int c = dims_.commodities();
  const Vector g = source_.gradient(embed_diagonal(pair_flat, dims_));
  Vector out(2 * c);
  out.head(c) = g.head(c);
  out.tail(c).setZero();
  for (int s = 0; s < dims_.states(); ++s) out.tail(c) += g.segment(c * (s + 1), c);
  return out;
}

Matrix RestrictedUtility::hessian(const Vector& pair_flat) const {
  const int c = dims_.commodities();
  const Matrix h = source_.hessian(embed_diagonal(pair_flat, dims_));
  Matrix out(2 * c, 2 * c);
  out.topLeftCorner(c, c) = h.topLeftCorner(c, c);
  Matrix top_right = Matrix::Zero(c, c);
  for (int s = 0; s < dims_.states(); ++s) top_right += h.block(0, c * (s + 1), c, c);
  Matrix bottom_right = Matrix::Zero(c, c);
  for (int i = 0; i < dims_.states(); ++i)
    for (int j = 0; j < dims_.states(); ++j)
      bottom_right += h.block(c * (i + 1), c * (j + 1), c, c);
  out.topRightCorner(c, c) = top_right;
  out.bottomLeftCorner(c, c) = top_right.transpose();
  out.bottomRightCorner(c, c) = bottom_right;
  return enforce_symmetric(out, "RestrictedUtility");
}

VnmOracle RestrictedUtility::as_vnm_oracle() const {
  RestrictedUtility self = *this;
  const int c = dims_.commodities();
  auto value = [self](const Vector& p) { return self.value(p); };
  auto gradient = [self](const Vector& p) { return self.gradient(p); };
  auto hessian = [self](const Vector& p) { return self.hessian(p); };
  return VnmOracle(c, ScalarField(2 * c, std::move(value), std::move(gradient),
                                  std::move(hessian), source_.provenance()));
}

}  // namespace eukit
