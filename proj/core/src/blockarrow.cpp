#include "eukit/blockarrow.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "eukit/errors.hpp"
#include "pivot_ldlt.hpp"

namespace eukit {

namespace {

void require_symmetric_block(const Matrix& m, const char* what) {
  double max_abs = 0.0, defect = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      max_abs = std::max(max_abs, std::max(std::abs(m(i, j)), std::abs(m(j, i))));
      defect = std::max(defect, std::abs(m(i, j) - m(j, i)));
    }
  if (defect > 1e-12 * (1.0 + max_abs))
    throw DomainError(std::string(what) + ": block is not symmetric");
}

}  // namespace

const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::negative_definite:
      return "ND";
    case Definiteness::not_negative_definite:
      return "not-ND";
    default:
      return "indeterminate";
  }
}

BlockArrowHessian::BlockArrowHessian(Matrix corner, std::vector<Matrix> arms,
                                     std::vector<Matrix> diagonals, Dimensions dims)
    : corner_(std::move(corner)),
      arms_(std::move(arms)),
      diagonals_(std::move(diagonals)),
      dims_(dims) {
  const int c = dims_.commodities();
  const int s = dims_.states();
  if (corner_.rows() != c || corner_.cols() != c)
    throw DimensionError("BlockArrowHessian: corner block has wrong size");
  if (static_cast<int>(arms_.size()) != s || static_cast<int>(diagonals_.size()) != s)
    throw DimensionError("BlockArrowHessian: wrong number of state blocks");
  for (int i = 0; i < s; ++i) {
    if (arms_[i].rows() != c || arms_[i].cols() != c)
      throw DimensionError("BlockArrowHessian: arm block has wrong size");
    if (diagonals_[i].rows() != c || diagonals_[i].cols() != c)
      throw DimensionError("BlockArrowHessian: diagonal block has wrong size");
    require_symmetric_block(diagonals_[i], "BlockArrowHessian diagonal");
  }
  require_symmetric_block(corner_, "BlockArrowHessian corner");
}

double BlockArrowHessian::quadratic_form(const Vector& v) const {
  if (v.size() != dims_.total())
    throw DimensionError("quadratic_form: direction has wrong size");
  const int c = dims_.commodities();
  const auto v0 = v.head(c);
  double acc = v0.dot(corner_ * v0);
  for (int s = 0; s < dims_.states(); ++s) {
    const auto vs = v.segment(c * (s + 1), c);
    acc += 2.0 * v0.dot(arms_[s] * vs);
    acc += vs.dot(diagonals_[s] * vs);
  }
  return acc;
}

Matrix BlockArrowHessian::densify() const {
  const int c = dims_.commodities();
  const int g = dims_.total();
  Matrix out = Matrix::Zero(g, g);
  out.topLeftCorner(c, c) = corner_;
  for (int s = 0; s < dims_.states(); ++s) {
    out.block(0, c * (s + 1), c, c) = arms_[s];
    out.block(c * (s + 1), 0, c, c) = arms_[s].transpose();
    out.block(c * (s + 1), c * (s + 1), c, c) = diagonals_[s];
  }
  return out;
}

BlockArrowHessian BlockArrowHessian::from_dense(const Matrix& dense, const Dimensions& dims,
                                                double tol) {
  const int c = dims.commodities();
  const int g = dims.total();
  if (dense.rows() != g || dense.cols() != g)
    throw DimensionError("from_dense: matrix size does not match dimensions");
  for (int i = 1; i <= dims.states(); ++i)
    for (int j = 1; j <= dims.states(); ++j) {
      if (i == j) continue;
      if (dense.block(c * i, c * j, c, c).cwiseAbs().maxCoeff() > tol)
        throw DimensionError("from_dense: nonzero cross-state block at states " +
                             std::to_string(i) + "," + std::to_string(j));
    }
  std::vector<Matrix> arms, diags;
  arms.reserve(dims.states());
  diags.reserve(dims.states());
  for (int s = 1; s <= dims.states(); ++s) {
    arms.push_back(dense.block(0, c * s, c, c));
    diags.push_back(dense.block(c * s, c * s, c, c));
  }
  return BlockArrowHessian(dense.topLeftCorner(c, c), std::move(arms), std::move(diags), dims);
}

double BlockArrowHessian::max_abs_entry() const {
  double m = corner_.cwiseAbs().maxCoeff();
  for (const auto& b : arms_) m = std::max(m, b.cwiseAbs().maxCoeff());
  for (const auto& b : diagonals_) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

double default_nd_tolerance(const BlockArrowHessian& h) {
  return 1e-9 * (1.0 + h.max_abs_entry());
}

double default_nd_tolerance(const Matrix& h) {
  return 1e-9 * (1.0 + (h.size() > 0 ? h.cwiseAbs().maxCoeff() : 0.0));
}

Vector adaptive_jacobi_scales(const Vector& diag_abs) {
  const Eigen::Index n = diag_abs.size();
  Vector ones = Vector::Ones(n);
  const double dmax = diag_abs.size() > 0 ? diag_abs.maxCoeff() : 0.0;
  if (!(dmax > 0.0)) return ones;
  double dmin_pos = dmax;
  for (Eigen::Index i = 0; i < n; ++i)
    if (diag_abs[i] > 0.0) dmin_pos = std::min(dmin_pos, diag_abs[i]);
  if (dmax / dmin_pos <= 1e6) return ones;
  const double floor = dmax * 1e-30;
  Vector s(n);
  for (Eigen::Index i = 0; i < n; ++i) s[i] = 1.0 / std::sqrt(std::max(diag_abs[i], floor));
  return s;
}

namespace {

using detail::PivotLdlt;

double auto_pivot_tolerance(double max_abs_scaled) { return 1e-9 * (1.0 + max_abs_scaled); }

NdResult finish_from_factor(const PivotLdlt& f, const BlockArrowHessian& h, int block,
                            const std::vector<PivotLdlt>& state_factors,
                            const std::vector<Matrix>& scaled_arms, const Vector& scales) {
  NdResult r;
  r.smallest_pivot = f.pivot_value();
  r.block = block;
  r.decision = f.status() == PivotLdlt::Status::nonpositive_pivot
                   ? Definiteness::not_negative_definite
                   : Definiteness::indeterminate;

  const int c = h.dims().commodities();
  const int g = h.dims().total();
  const Vector z = f.witness();
  Vector v = Vector::Zero(g);
  if (block >= 0) {
    // Failure inside a state block: the witness lives in that block alone.
    v.segment(c * (block + 1), c) = z;
  } else {
    // Failure in the Schur corner: complete the direction with the
    // eliminated state components vs = -Ds^{-1} Bs' z (scaled frame).
    v.head(c) = z;
    for (int s = 0; s < h.states(); ++s)
      v.segment(c * (s + 1), c) = state_factors[s].solve(Vector(scaled_arms[s].transpose() * z));
  }
  // Map back through the congruence and normalize: the quadratic form keeps
  // the pivot's sign either way.
  v = v.cwiseProduct(scales);
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  r.witness = v;
  r.witness_quadratic_form = h.quadratic_form(v);
  return r;
}

NdResult structured_nd(const BlockArrowHessian& h, bool auto_tol, double tol) {
  if (!auto_tol && tol < 0.0) throw DomainError("is_negative_definite: tol must be >= 0");
  const int c = h.dims().commodities();
  const int g = h.dims().total();

  Vector diag_abs(g);
  diag_abs.head(c) = h.corner().diagonal().cwiseAbs();
  for (int s = 0; s < h.states(); ++s)
    diag_abs.segment(c * (s + 1), c) = h.diagonal(s).diagonal().cwiseAbs();
  const Vector scales = adaptive_jacobi_scales(diag_abs);

  const auto s0 = scales.head(c).asDiagonal();
  Matrix corner = s0 * h.corner() * s0;
  std::vector<Matrix> arms(h.states()), diags(h.states());
  double max_abs = corner.cwiseAbs().maxCoeff();
  for (int s = 0; s < h.states(); ++s) {
    const auto ss = scales.segment(c * (s + 1), c).asDiagonal();
    arms[s] = s0 * h.arm(s) * ss;
    diags[s] = ss * h.diagonal(s) * ss;
    max_abs = std::max({max_abs, arms[s].cwiseAbs().maxCoeff(), diags[s].cwiseAbs().maxCoeff()});
  }
  if (auto_tol) tol = auto_pivot_tolerance(max_abs);

  // States first: each -Ds must be positive definite.
  std::vector<PivotLdlt> state_factors;
  state_factors.reserve(h.states());
  for (int s = 0; s < h.states(); ++s) {
    PivotLdlt f = PivotLdlt::compute(Matrix(-diags[s]), tol);
    if (f.status() != PivotLdlt::Status::positive_definite)
      return finish_from_factor(f, h, s, state_factors, arms, scales);
    state_factors.push_back(std::move(f));
  }

  // Corner last: Schur complement of -H after eliminating the state blocks,
  // -(A0 - sum_s Bs Ds^{-1} Bs'), accumulated in ascending state order.
  Matrix schur_neg = -corner;
  for (int s = 0; s < h.states(); ++s)
    schur_neg -= arms[s] * state_factors[s].solve(Matrix(arms[s].transpose()));
  PivotLdlt f0 = PivotLdlt::compute(schur_neg, tol);
  if (f0.status() != PivotLdlt::Status::positive_definite)
    return finish_from_factor(f0, h, -1, state_factors, arms, scales);

  NdResult r;
  r.decision = Definiteness::negative_definite;
  double smallest = f0.smallest_pivot();
  for (const auto& f : state_factors) smallest = std::min(smallest, f.smallest_pivot());
  r.smallest_pivot = smallest;
  return r;
}

NdResult dense_nd(const Matrix& h, bool auto_tol, double tol) {
  if (!auto_tol && tol < 0.0) throw DomainError("is_negative_definite_dense: tol must be >= 0");
  if (h.rows() != h.cols()) throw DimensionError("is_negative_definite_dense: not square");
  const Vector scales = adaptive_jacobi_scales(Vector(h.diagonal().cwiseAbs()));
  const auto sd = scales.asDiagonal();
  const Matrix scaled = sd * h * sd;
  if (auto_tol) tol = auto_pivot_tolerance(scaled.cwiseAbs().maxCoeff());

  PivotLdlt f = PivotLdlt::compute(Matrix(-scaled), tol);
  NdResult r;
  r.smallest_pivot = f.pivot_value();
  if (f.status() == PivotLdlt::Status::positive_definite) {
    r.decision = Definiteness::negative_definite;
    return r;
  }
  r.decision = f.status() == PivotLdlt::Status::nonpositive_pivot
                   ? Definiteness::not_negative_definite
                   : Definiteness::indeterminate;
  Vector v = f.witness().cwiseProduct(scales);
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  r.witness = v;
  r.witness_quadratic_form = v.dot(h * v);
  r.block = 0;
  return r;
}

}  // namespace

NdResult is_negative_definite(const BlockArrowHessian& h, double tol) {
  return structured_nd(h, /*auto_tol=*/false, tol);
}

NdResult is_negative_definite(const BlockArrowHessian& h) {
  return structured_nd(h, /*auto_tol=*/true, 0.0);
}

NdResult is_negative_definite_dense(const Matrix& h, double tol) {
  return dense_nd(h, /*auto_tol=*/false, tol);
}

NdResult is_negative_definite_dense(const Matrix& h) {
  return dense_nd(h, /*auto_tol=*/true, 0.0);
}

Definiteness nd_by_eigenvalues(const Matrix& dense, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(dense, Eigen::EigenvaluesOnly);
  const double lambda_max = es.eigenvalues().maxCoeff();
  return lambda_max < -tol ? Definiteness::negative_definite
                           : Definiteness::not_negative_definite;
}

Definiteness nd_by_eigenvalues_equilibrated(const Matrix& dense) {
  const Vector scales = adaptive_jacobi_scales(Vector(dense.diagonal().cwiseAbs()));
  const auto sd = scales.asDiagonal();
  const Matrix scaled = sd * dense * sd;
  return nd_by_eigenvalues(scaled, auto_pivot_tolerance(scaled.cwiseAbs().maxCoeff()));
}

BlockArrowHessian random_block_arrow(const Dimensions& dims, ArrowInstanceKind kind,
                                     std::uint64_t seed) {
  SplitMix64 rng(seed);
  const int c = dims.commodities();
  const int s_count = dims.states();
  const int n = 2 * c;

  Vector weights(s_count);
  for (int s = 0; s < s_count; ++s) weights[s] = rng.uniform(0.2, 1.0);
  weights /= weights.sum();

  Matrix corner = Matrix::Zero(c, c);
  std::vector<Matrix> arms, diags;
  arms.reserve(s_count);
  diags.reserve(s_count);

  for (int s = 0; s < s_count; ++s) {
    Matrix r(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(i, j) = rng.uniform(-1.0, 1.0);

    bool make_definite = true;
    if (kind == ArrowInstanceKind::indefinite)
      make_definite = s == 0 ? false : rng.next_double() < 0.5;
    else if (kind == ArrowInstanceKind::mixed)
      make_definite = rng.next_double() < 0.7;

    Matrix w(n, n);
    if (make_definite) {
      w = -(r * r.transpose() / n + (0.3 + 0.7 * rng.next_double()) * Matrix::Identity(n, n));
    } else {
      w = 0.5 * (r + r.transpose());
      // Guarantee an unambiguous violation: a positive diagonal entry in the
      // state part gives q > 0 along the matching unit direction.
      w(c, c) = std::max(0.5, std::abs(w(c, c)));
    }
    corner += weights[s] * w.topLeftCorner(c, c);
    arms.push_back(weights[s] * w.topRightCorner(c, c));
    diags.push_back(weights[s] * w.bottomRightCorner(c, c));
  }
  return BlockArrowHessian(std::move(corner), std::move(arms), std::move(diags), dims);
}

}  // namespace eukit
