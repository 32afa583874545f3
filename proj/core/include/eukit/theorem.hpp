#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eukit/assembly.hpp"
#include "eukit/properties.hpp"

namespace eukit {

// Per-property comparison of the verdicts on the state utility u, on the
// assembled expected utility U, and on the restriction of U back to the
// diagonal. Indeterminate verdicts never count as discrepancies.
struct PropertyPair {
  Property property;
  Verdict on_vnm;
  Verdict on_expected;
  Verdict on_restricted;
};

struct Discrepancy {
  Property property;
  std::string direction;  // "u->U" or "U->u"
  std::string detail;
};

struct EquivalenceVerdict {
  std::vector<PropertyPair> pairs;
  bool consistent = true;
  std::vector<Discrepancy> discrepancies;
  bool aborted = false;
  std::string error;
};

struct TheoremConfig {
  CheckConfig check;
  // Test-only fault injection: negates the state-block gradient of the
  // assembled U so the harness demonstrably reports an inconsistency.
  bool inject_sign_flip = false;
};

// Runs the full property battery on u, on U = sum_s a_s u(x0, xs), and on
// restrict(U); consistent iff every pair of determinate verdicts agrees.
EquivalenceVerdict verify_equivalence(const VnmOracle& vnm, const ProbabilityWeights& weights,
                                      const Dimensions& dims, const TheoremConfig& cfg);

// w = (z, t) -> v = (z, t, ..., t). The lifted direction satisfies
// v' D2U(x,y,...,y) v == w' D2u_restricted(x,y) w.
Vector lift_witness_u_to_U(const Vector& w, const Dimensions& dims);

// v -> (v0, vs) for a chosen state (0-based).
Vector project_witness_U_to_u(const Vector& v, const Dimensions& dims, int state);

// A state for which (v0, vs) is nonzero; guaranteed to exist for v != 0.
int select_nonzero_state(const Vector& v, const Dimensions& dims);

// Desk-scale brute-force oracle on a log-spaced grid, G <= 3 only: dense
// finite differences, dense eigenvalue tests, geometric-schedule boundary
// decrements, and a direct level-set closure probe. Entirely independent of
// the sampling pipeline.
struct BruteForceConfig {
  int grid_per_axis = 20;
  SampleBox box{1e-2, 1e2};
  int boundary_doublings = 16;  // boundary schedule 2^k, k = 0..doublings
};

struct BruteForceVerdicts {
  Verdict smoothness;
  Verdict monotonicity;
  Verdict negative_definiteness;
  Verdict boundary_divergence;
  bool non_closure_flagged = false;  // level-set closure probe outcome
};

struct BruteForceResult {
  BruteForceVerdicts on_vnm;
  BruteForceVerdicts on_expected;
};

BruteForceResult brute_force_oracle(const VnmOracle& vnm, const ProbabilityWeights& weights,
                                    const Dimensions& dims, const BruteForceConfig& cfg);

// Compares the grid oracle with check_all verdicts; empty result means
// agreement on every determinate pair.
std::vector<Discrepancy> compare_brute_force(const BruteForceResult& brute,
                                             const CheckAllResult& on_u,
                                             const CheckAllResult& on_eu);

}  // namespace eukit
