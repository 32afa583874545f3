#pragma once

#include <string>
#include <vector>

#include "eukit/assembly.hpp"
#include "eukit/properties.hpp"

namespace eukit {

// Orthonormal basis of the hyperplane {v : g.v = 0}, as the trailing n-1
// columns of the Householder Q factor of g.
Matrix tangent_basis(const Vector& gradient);

// The tangent-space restriction of a Hessian at one point: basis, projected
// Hessian and its exact largest eigenvalue with the attaining ambient
// direction. Differentiable strict quasi-concavity at the point means
// max_eigenvalue < 0.
struct TangentSpaceProbe {
  Vector point;
  Vector gradient;
  Matrix basis;
  Matrix projected_hessian;
  double max_eigenvalue = 0.0;
  Vector max_direction;  // ambient, unit norm

  static TangentSpaceProbe build(const Vector& point, const Vector& gradient,
                                 const Matrix& hessian);
};

// Negative definiteness restricted to the gradient's tangent space at every
// sampled point. Points with gradient norm below 1e-12 are skipped and
// counted in the note. Decision per point: fail when the projected
// Hessian's largest eigenvalue is >= 0, pass when it certifies < -tol in
// the equilibrated frame, indeterminate in between.
PropertyReport check_diff_strict_quasiconcavity(const ScalarField& f, Target target,
                                                const CheckConfig& cfg);

// The proven transfer direction: if U satisfies the tangent-space condition,
// its diagonal restriction must too. Precondition failure (U itself fails)
// reports indeterminate with an explicit note; a determinate fail here
// contradicts a proven implication and is treated as a build-failing event
// by the callers. Also asserts the lift identity: a restricted tangent w
// lifts to v = (z, t, ..., t) tangent to DU at the diagonal point.
PropertyReport verify_transfer_U_to_u(const ScalarField& source_u_big, const Dimensions& dims,
                                      const CheckConfig& cfg);

// Per-state tangency residuals r_s = D_{x0}u(x0,xs).v0 + D_{xs}u(x0,xs).vs.
// Their weighted sum reproduces DU(x).v exactly; when every r_s vanishes the
// direction is per-state tangent (the sufficient case), when only the
// aggregate vanishes the direction sits in the unresolved regime.
struct TangencyDecomposition {
  Vector per_state;       // r_1..r_S
  double aggregate = 0;   // sum_s a_s r_s == DU(x).v
  bool per_state_tangent = false;
  bool unresolved_regime = false;
};

TangencyDecomposition decompose_tangency(const Vector& v, const Vector& point_g,
                                         const VnmOracle& u, const ProbabilityWeights& weights,
                                         const Dimensions& dims);

// Random direction with every per-state tangency residual equal to zero
// (up to rounding); used to exercise the sufficiency chain.
Vector per_state_tangent_direction(const VnmOracle& u, const ProbabilityWeights& weights,
                                   const Dimensions& dims, const Vector& point_g,
                                   SplitMix64& rng);

// One near-violation of the tangent-space condition on U found by the
// search: the point, the tangent direction attaining the maximal curvature,
// and the certificates that make it reportable.
struct SearchCandidate {
  std::string family;
  std::vector<double> params;
  Vector weights;
  int commodities = 0;
  int states = 0;
  Vector point;
  Vector direction;
  double gradient_residual = 0.0;
  double curvature_value = 0.0;
  double u_certificate = 0.0;  // max projected eigenvalue of u over the cell probes
};

struct SearchConfig {
  // Families: the builtin registry plus the two-parameter tilt grid.
  std::vector<std::pair<std::string, std::vector<double>>> families;
  int tilt_grid = 10;  // alpha, beta in {0.25, 0.5, ..., 2.5}
  std::vector<std::pair<int, int>> dims_grid = {{1, 2}, {2, 2}, {1, 4}};  // (C, S)
  int weight_vectors = 2;  // uniform plus a skewed vector per dims
  long points_per_cell = 16;
  std::uint64_t seed = 42;
  SampleBox box;
  double emission_tolerance = 1e-8;  // emit when max eigenvalue >= -tol
  long budget = 1000000;             // probe-point evaluations
  int threads = 1;

  static SearchConfig with_default_families();
};

struct SearchResult {
  std::vector<SearchCandidate> candidates;
  long evaluations_used = 0;
  bool budget_exhausted = false;
  long cells_total = 0;
  long cells_skipped = 0;  // u certificate not established
};

// Scans (family x weights x dims x points); at each eligible probe point
// maximizes v' D2U v over the unit sphere of the tangent hyperplane via
// eigen-decomposition and emits a SearchCandidate when the maximum clears
// -emission_tolerance. Every candidate is re-verified against the dense
// analytic quadratic form and a dense fd Hessian before emission. An empty
// result is a legitimate outcome.
SearchResult search_counterexample(const SearchConfig& cfg);

}  // namespace eukit
