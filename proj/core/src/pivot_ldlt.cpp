#include "pivot_ldlt.hpp"

#include <limits>

namespace eukit::detail {

PivotLdlt PivotLdlt::compute(const Matrix& m, double tol) {
  const Eigen::Index n = m.rows();
  PivotLdlt f;
  f.l_ = Matrix::Identity(n, n);
  f.d_ = Vector::Zero(n);
  f.smallest_pivot_ = std::numeric_limits<double>::infinity();

  Matrix a = m;  // working copy, lower triangle maintained
  for (Eigen::Index k = 0; k < n; ++k) {
    const double d = a(k, k);
    f.smallest_pivot_ = std::min(f.smallest_pivot_, d);
    if (d <= 0.0) {
      f.status_ = Status::nonpositive_pivot;
      f.pivot_index_ = static_cast<int>(k);
      f.pivot_value_ = d;
      f.stop_ = static_cast<int>(k);
      return f;
    }
    if (d <= tol) {
      f.status_ = Status::small_pivot;
      f.pivot_index_ = static_cast<int>(k);
      f.pivot_value_ = d;
      f.stop_ = static_cast<int>(k);
      return f;
    }
    f.d_[k] = d;
    for (Eigen::Index i = k + 1; i < n; ++i) f.l_(i, k) = a(i, k) / d;
    for (Eigen::Index j = k + 1; j < n; ++j) {
      const double ajk = a(j, k);
      for (Eigen::Index i = j; i < n; ++i) a(i, j) -= f.l_(i, k) * ajk;
    }
  }
  f.status_ = Status::positive_definite;
  f.stop_ = static_cast<int>(n);
  f.pivot_value_ = f.smallest_pivot_;
  return f;
}

Vector PivotLdlt::witness() const {
  const int k = pivot_index_;
  Vector z = Vector::Zero(l_.rows());
  z[k] = 1.0;
  for (int i = k - 1; i >= 0; --i) {
    double acc = 0.0;
    for (int j = i + 1; j <= k; ++j) acc += l_(j, i) * z[j];
    z[i] = -acc;
  }
  return z;
}

Vector PivotLdlt::solve(const Vector& rhs) const {
  const Eigen::Index n = l_.rows();
  Vector y = rhs;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) y[i] -= l_(i, j) * y[j];
  for (Eigen::Index i = 0; i < n; ++i) y[i] /= d_[i];
  for (Eigen::Index i = n - 1; i >= 0; --i)
    for (Eigen::Index j = i + 1; j < n; ++j) y[i] -= l_(j, i) * y[j];
  return y;
}

Matrix PivotLdlt::solve(const Matrix& rhs) const {
  Matrix out(rhs.rows(), rhs.cols());
  for (Eigen::Index c = 0; c < rhs.cols(); ++c) out.col(c) = solve(Vector(rhs.col(c)));
  return out;
}

}  // namespace eukit::detail
