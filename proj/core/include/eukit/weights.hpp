#pragma once

#include <initializer_list>
#include <vector>

#include "eukit/types.hpp"

namespace eukit {

// Probability weights (a_1, ..., a_S) over tomorrow's states.
//
// Every weight is strictly positive and the stored vector sums to one to
// within one unit in the last place (inputs within 1e-12 of one are
// renormalized; anything further off is rejected). For S >= 2 each weight is
// strictly inside (0, 1). The single-state case is degenerate: the only
// admissible weight vector is (1), and it is accepted so that S = 1
// expected utilities exist at all.
class ProbabilityWeights {
 public:
  static ProbabilityWeights make(const std::vector<double>& raw);
  static ProbabilityWeights make(const Vector& raw);
  static ProbabilityWeights make(std::initializer_list<double> raw) {
    return make(std::vector<double>(raw));
  }
  static ProbabilityWeights uniform(int states);

  int states() const { return static_cast<int>(weights_.size()); }
  const Vector& values() const { return weights_; }
  double operator[](int s) const { return weights_[s]; }  // 0-based

 private:
  explicit ProbabilityWeights(Vector w) : weights_(std::move(w)) {}
  Vector weights_;
};

}  // namespace eukit
