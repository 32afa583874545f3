#pragma once

#include <cstdint>

#include "eukit/types.hpp"

namespace eukit {

// Splitmix64 stream. Used instead of <random> engines so that sampled
// points are bit-identical across standard libraries and so that streams
// can be split per sample index (order-independent parallel evaluation).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  std::uint64_t state_;
};

// Deterministic substream for (seed, index) pairs; mixing the index through
// one splitmix round keeps adjacent substreams uncorrelated.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ (0x9e3779b97f4a7c15ULL + index * 0xda942042e4dd58b5ULL));
  return mix.next_u64();
}

// Closed-open sampling box for strictly positive coordinates.
struct SampleBox {
  double lo = 1e-3;
  double hi = 1e3;
};

// Log-uniform point in (0, inf)^dim: coordinates exp(U[ln lo, ln hi]).
// Covers scale extremes where curvature properties typically fail first.
Vector sample_log_uniform(int dim, const SampleBox& box, SplitMix64& rng);

// Sample number `index` of the stream identified by `seed`; independent of
// evaluation order, so parallel sweeps reproduce serial ones exactly.
Vector sample_point(int dim, const SampleBox& box, std::uint64_t seed, std::uint64_t index);

}  // namespace eukit
