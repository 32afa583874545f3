#include "eukit/rng.hpp"

#include <cmath>

namespace eukit {

Vector sample_log_uniform(int dim, const SampleBox& box, SplitMix64& rng) {
  const double llo = std::log(box.lo);
  const double lhi = std::log(box.hi);
  Vector x(dim);
  for (int i = 0; i < dim; ++i) x[i] = std::exp(rng.uniform(llo, lhi));
  return x;
}

Vector sample_point(int dim, const SampleBox& box, std::uint64_t seed, std::uint64_t index) {
  SplitMix64 rng(substream_seed(seed, index));
  return sample_log_uniform(dim, box, rng);
}

}  // namespace eukit
