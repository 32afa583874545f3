#pragma once

#include "eukit/types.hpp"

namespace eukit::detail {

// Unpivoted LDL^T with a pivot threshold, for positive-definiteness tests.
//
// Elimination follows the natural index order. A pivot <= 0 proves the
// matrix is not positive definite: the direction z solving L^T z = e_k over
// the factored prefix satisfies z' M z = pivot exactly in exact arithmetic.
// A pivot in (0, tol] stops the factorization as numerically undecidable.
class PivotLdlt {
 public:
  enum class Status { positive_definite, nonpositive_pivot, small_pivot };

  static PivotLdlt compute(const Matrix& m, double tol);

  Status status() const { return status_; }
  int pivot_index() const { return pivot_index_; }
  double pivot_value() const { return pivot_value_; }
  double smallest_pivot() const { return smallest_pivot_; }

  // Direction certifying z' M z == pivot_value(); only for stopped factorizations.
  Vector witness() const;

  // Solve M x = rhs; only valid when status is positive_definite.
  Vector solve(const Vector& rhs) const;
  Matrix solve(const Matrix& rhs) const;

 private:
  Matrix l_;         // unit lower triangular (strict part), diagonal implied 1
  Vector d_;         // pivots, valid for indices < stop_
  int stop_ = 0;     // number of completed pivots
  Status status_ = Status::positive_definite;
  int pivot_index_ = -1;
  double pivot_value_ = 0.0;
  double smallest_pivot_ = 0.0;
};

}  // namespace eukit::detail
