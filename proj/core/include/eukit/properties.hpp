#pragma once

#include <vector>

#include "eukit/assembly.hpp"
#include "eukit/boundary.hpp"
#include "eukit/fd.hpp"
#include "eukit/oracle.hpp"
#include "eukit/report.hpp"
#include "eukit/rng.hpp"

namespace eukit {

// Shared configuration for the property checkers. All sampling is
// reproducible from (seed, index) substreams, so reports do not depend on
// thread count or evaluation order.
struct CheckConfig {
  long samples = 100;
  std::uint64_t seed = 42;
  SampleBox box;                           // log-uniform sampling box
  double nd_tolerance = 0.0;               // 0 => 1e-9 * (1 + max|entry|) per point
  FdSteps fd = FdSteps::relative_steps();  // steps for fd shadows and proxies
  BoundaryConfig boundary;
  int segment_count = 16;          // gradient-continuity segments
  int segment_points = 10;         // waypoints per segment
  double segment_rel_length = 0.02;  // multiplicative segment length
  double qc_tolerance = 0.0;       // 0 => scale-aware default
  int threads = 1;
};

// Strict componentwise positivity of the gradient at every sampled point.
// No tolerance slack: > 0 means > 0.
PropertyReport check_monotonicity(const ScalarField& f, Target target, const CheckConfig& cfg);

// Negative definiteness of the Hessian at every sampled point. The
// state-utility overload factors the dense 2C x 2C Hessian; the
// expected-utility overload works on the block-arrow structure.
PropertyReport check_negative_definiteness(const VnmOracle& u, const CheckConfig& cfg);
PropertyReport check_negative_definiteness(const ExpectedUtility& eu, const CheckConfig& cfg);
PropertyReport check_negative_definiteness_dense(const ScalarField& f, Target target,
                                                 const CheckConfig& cfg);

// Divergence to -infinity along boundary sequences; the executable
// replacement for closed upper contour sets. Pass requires every sequence
// certified divergent (raw threshold crossings or fitted trend); a sequence
// converging to a finite limit certifies failure. The lower-unboundedness
// hypothesis is probed, not proven, and its status is recorded in the note.
PropertyReport check_boundary_divergence(const ScalarField& f, Target target,
                                         const std::vector<BoundarySequence>& sequences,
                                         const CheckConfig& cfg);

// Default sequences: every single coordinate, each natural block, all
// coordinates; over an all-ones base plus sampled bases.
std::vector<BoundarySequence> default_boundary_sequences_pair(int commodities,
                                                              const CheckConfig& cfg);
std::vector<BoundarySequence> default_boundary_sequences_g(const Dimensions& dims,
                                                           const CheckConfig& cfg);

// C2 is undecidable from point samples; this proxy checks (a) fd-vs-analytic
// agreement where analytic derivatives exist, (b) the raw fd Hessian
// symmetry defect, (c) gradient continuity along short multiplicative
// segments. Reports carry an explicit proxy caveat, never a certificate.
PropertyReport check_smoothness_proxy(const ScalarField& f, Target target,
                                      const CheckConfig& cfg);

struct CheckAllResult {
  std::vector<PropertyReport> reports;
  bool aborted = false;
  std::string error;
};

// Runs the four checkers in order: smoothness, monotonicity, negative
// definiteness, boundary divergence. A checker error aborts the run; the
// partial results are returned with the aborted flag set.
CheckAllResult check_all(const VnmOracle& u, const CheckConfig& cfg);
CheckAllResult check_all(const ExpectedUtility& eu, const CheckConfig& cfg);

}  // namespace eukit
