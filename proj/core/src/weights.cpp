#include "eukit/weights.hpp"

#include <cmath>
#include <string>

#include "eukit/errors.hpp"

namespace eukit {

namespace {
constexpr double kSumTolerance = 1e-12;
}

ProbabilityWeights ProbabilityWeights::make(const Vector& raw) {
  const int s_count = static_cast<int>(raw.size());
  if (s_count < 1) throw DimensionError("weights: need at least one state");

  for (int s = 0; s < s_count; ++s) {
    const double a = raw[s];
    if (!(a > 0.0))
      throw DomainError("weights: weight " + std::to_string(s + 1) + " must be > 0");
    // (0,1) strictly for S >= 2; the S = 1 case only admits a_1 = 1.
    if (s_count >= 2 && !(a < 1.0))
      throw DomainError("weights: weight " + std::to_string(s + 1) + " must be < 1");
    if (s_count == 1 && a > 1.0 + kSumTolerance)
      throw DomainError("weights: single-state weight must be 1");
  }

  double sum = 0.0;
  for (int s = 0; s < s_count; ++s) sum += raw[s];
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw NormalizationError("weights: sum is " + std::to_string(sum) +
                             ", must equal 1 within 1e-12");

  Vector w = raw / sum;
  // Pin the sum to 1 within one ulp by recomputing the last weight.
  if (s_count >= 2) {
    double partial = 0.0;
    for (int s = 0; s + 1 < s_count; ++s) partial += w[s];
    w[s_count - 1] = 1.0 - partial;
  } else {
    w[0] = 1.0;
  }
  return ProbabilityWeights(std::move(w));
}

ProbabilityWeights ProbabilityWeights::make(const std::vector<double>& raw) {
  Vector v(static_cast<Eigen::Index>(raw.size()));
  for (size_t i = 0; i < raw.size(); ++i) v[static_cast<Eigen::Index>(i)] = raw[i];
  return make(v);
}

ProbabilityWeights ProbabilityWeights::uniform(int states) {
  if (states < 1) throw DimensionError("weights: need at least one state");
  Vector v = Vector::Constant(states, 1.0 / states);
  return make(v);
}

}  // namespace eukit
