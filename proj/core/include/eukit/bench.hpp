#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eukit/jsonl.hpp"

namespace eukit {

struct BenchConfig {
  std::vector<int> state_sweep = {4, 16, 64, 256};
  std::vector<int> commodity_sweep = {1, 4, 16};
  int repetitions = 3;
  double min_measure_seconds = 0.01;  // batch repetitions until this much elapsed
  std::uint64_t seed = 42;
};

struct BenchRow {
  int states = 0;
  int commodities = 0;
  std::string method;  // "structured" or "dense"
  double median_seconds = 0.0;
  std::string decision;
};

struct BenchFit {
  int commodities = 0;
  double structured_exponent = 0.0;
  double dense_exponent = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchFit> fits;  // per commodity count
  // Headline exponents: the fit at the largest block size, where both
  // methods are far from their per-call overhead floors.
  double structured_exponent = 0.0;
  double dense_exponent = 0.0;
  long instances_checked = 0;
  bool decisions_agree = true;

  std::string table() const;                 // aligned plain text
  std::vector<std::string> jsonl_lines() const;  // one record per (S, C, method)
};

// Times the structured Schur elimination against a dense symmetric
// factorization of the densified matrix over the sweep, asserting that both
// report the same decision on every instance, and fits the S-scaling
// exponent of each method per commodity count.
BenchReport bench_nd(const BenchConfig& cfg);

}  // namespace eukit
