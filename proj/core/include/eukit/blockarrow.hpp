#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eukit/dimensions.hpp"
#include "eukit/rng.hpp"
#include "eukit/types.hpp"

namespace eukit {

// Symmetric arrow-of-blocks matrix
//
//   [ A0   B1   B2  ...  BS ]
//   [ B1'  D1    0  ...   0 ]
//   [ B2'   0   D2  ...   0 ]
//   [ ...            ...    ]
//   [ BS'   0    0  ...  DS ]
//
// with C x C blocks: the shape of the Hessian of an expected utility.
// Cross-state blocks are structural zeros and never stored, so memory is
// O(S*C^2) instead of O(G^2).
class BlockArrowHessian {
 public:
  BlockArrowHessian(Matrix corner, std::vector<Matrix> arms, std::vector<Matrix> diagonals,
                    Dimensions dims);

  const Dimensions& dims() const { return dims_; }
  const Matrix& corner() const { return corner_; }
  const Matrix& arm(int s) const { return arms_[s]; }            // 0-based state
  const Matrix& diagonal(int s) const { return diagonals_[s]; }  // 0-based state
  int states() const { return dims_.states(); }

  // v' H v evaluated blockwise: v0'A0v0 + sum_s (2 v0'Bs vs + vs'Ds vs).
  // O(S*C^2) work, no densification.
  double quadratic_form(const Vector& v) const;

  // Full G x G symmetric matrix with the cross-state zeros filled in.
  Matrix densify() const;

  // Inverse of densify for matrices that already carry the arrow pattern;
  // off-pattern entries above `tol` raise DimensionError.
  static BlockArrowHessian from_dense(const Matrix& dense, const Dimensions& dims,
                                      double tol = 0.0);

  double max_abs_entry() const;

 private:
  Matrix corner_;
  std::vector<Matrix> arms_;
  std::vector<Matrix> diagonals_;
  Dimensions dims_;
};

enum class Definiteness { negative_definite, not_negative_definite, indeterminate };

const char* to_string(Definiteness d);

// Outcome of a definiteness test. For a not-ND decision the witness v
// satisfies quadratic_form(h, v) >= -tol * |v|^2; for indeterminate it marks
// the direction whose pivot fell inside the tolerance band.
struct NdResult {
  Definiteness decision = Definiteness::indeterminate;
  Vector witness;                     // empty for negative_definite
  double witness_quadratic_form = 0;  // v' H v for the witness
  double smallest_pivot = 0;          // pivot that decided the outcome
  int block = -1;                     // -1 corner, else 0-based state block
};

// Scale-aware default pivot tolerance, 1e-9 * (1 + max |entry|); guards
// against rounding near singular diagonal blocks.
double default_nd_tolerance(const BlockArrowHessian& h);
double default_nd_tolerance(const Matrix& h);

// Jacobi scale factors s_i = 1/sqrt(|m_ii|) when the diagonal spans more
// than six decades, identity otherwise. Rescaling by congruence preserves
// inertia, so definiteness decisions are unchanged while pivots become O(1)
// even for Hessians mixing 1e-9 and 1e+9 curvatures.
Vector adaptive_jacobi_scales(const Vector& diag_abs);

// Negative definiteness by blockwise Schur elimination: H is ND iff every
// -Ds is positive definite and so is -(A0 - sum_s Bs Ds^{-1} Bs'). States
// are eliminated first in ascending order, the corner last, so the arrow
// produces no fill-in. The matrix is adaptively equilibrated first; pivots
// in (0, tol] give `indeterminate`, a nonpositive pivot gives
// `not_negative_definite` with a unit witness direction reconstructed from
// the partial factorization. `tol` is a pivot threshold in the equilibrated
// frame; the overloads without it use the scale-aware default there.
NdResult is_negative_definite(const BlockArrowHessian& h, double tol);
NdResult is_negative_definite(const BlockArrowHessian& h);

// Same decision semantics for a dense symmetric matrix (used for the
// 2C-dimensional state-utility Hessians).
NdResult is_negative_definite_dense(const Matrix& h, double tol);
NdResult is_negative_definite_dense(const Matrix& h);

// Independent oracle: dense eigenvalue test, all eigenvalues < -tol.
Definiteness nd_by_eigenvalues(const Matrix& dense, double tol);

// Eigenvalue oracle in the equilibrated frame with the default tolerance;
// the independent route used by the brute-force grid oracle.
Definiteness nd_by_eigenvalues_equilibrated(const Matrix& dense);

// Random instances for agreement tests and benchmarks. `definite` instances
// are assembled from per-state negative definite 2C x 2C blocks (margin
// ~0.3), `indefinite` ones carry at least one clearly indefinite state
// block, so decisions sit far from the tolerance boundary.
enum class ArrowInstanceKind { definite, indefinite, mixed };
BlockArrowHessian random_block_arrow(const Dimensions& dims, ArrowInstanceKind kind,
                                     std::uint64_t seed);

}  // namespace eukit
