#pragma once

#include <functional>
#include <string>
#include <vector>

#include "eukit/dimensions.hpp"
#include "eukit/types.hpp"

namespace eukit {

enum class BoundaryMode { single_coordinate_to_zero, all_coordinates_to_zero, coordinate_subset };

const char* to_string(BoundaryMode m);

// A sequence x^[n] approaching the boundary of the positive orthant: the
// driven coordinates of an interior base point are scaled by 1/n,
// n = 1..length. Every generated point stays strictly positive.
struct BoundarySequence {
  Vector base;
  BoundaryMode mode = BoundaryMode::single_coordinate_to_zero;
  std::vector<int> driven;
  int length = 60;

  Vector point_at(int n) const;  // n in 1..length
  std::string label() const;
};

// Tuning for the divergence analysis. Thresholds are positive: divergence
// means the values fall below -K for every K, checked against the raw
// values where reachable and against the fitted trend otherwise.
struct BoundaryConfig {
  int length = 60;
  int fit_tail = 10;  // least-squares window: last fit_tail points
  std::vector<double> thresholds = {1e1, 1e2, 1e3, 1e4};
  // Tail decrement ratio (F_N - F_{N/2}) / (F_{N/2} - F_{N/4}): >= 0.9 means
  // sustained decrease (divergent), <= 0.8 means geometric decay to a finite
  // limit (convergent); between the two the sequence is left undecided.
  double ratio_divergent = 0.9;
  double ratio_convergent = 0.8;
  double lower_unbounded_witness = 1e3;  // probe level for the hypothesis flag
  int extra_bases = 1;                   // sampled bases in addition to all-ones
};

enum class SequenceClass { divergent, convergent, undecided };

// Per-sequence trend diagnosis: values, tail monotonicity, the decrement
// ratio, both least-squares fits (value vs ln n and value vs n) over the
// tail window, and the per-threshold crossing indices (raw where observed,
// extrapolated from the better-fitting model otherwise).
struct SequenceTrend {
  std::vector<double> values;
  bool tail_monotone_decreasing = false;
  double decrement_ratio = 0.0;
  double slope_log = 0.0, intercept_log = 0.0, sse_log = 0.0;
  double slope_lin = 0.0, intercept_lin = 0.0, sse_lin = 0.0;
  bool better_model_is_linear = false;
  double tail_min = 0.0;
  SequenceClass classification = SequenceClass::undecided;
  std::vector<double> crossing_n;  // per threshold; +inf when never crossed
  bool crosses_all_thresholds = false;
};

SequenceTrend analyze_sequence(const std::function<double(const Vector&)>& value,
                               const BoundarySequence& seq, const BoundaryConfig& cfg);

// Default sequence set on R_{++}^{dim} for a given base: one sequence per
// coordinate, one per declared block, and one driving everything.
// `blocks` lists index sets (may be empty).
std::vector<BoundarySequence> boundary_sequences_for_base(
    const Vector& base, const std::vector<std::vector<int>>& blocks, int length);

// Blocks of the state-utility domain (x0 half, xs half) and of the
// expected-utility domain (x0 block, each state block).
std::vector<std::vector<int>> pair_blocks(int commodities);
std::vector<std::vector<int>> state_blocks(const Dimensions& dims);

}  // namespace eukit
