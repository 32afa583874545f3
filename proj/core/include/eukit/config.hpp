#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eukit/jsonl.hpp"

namespace eukit {

// User-facing run configuration: a single JSON document, with command-line
// flags overriding individual fields. Parsing rejects unknown values with a
// ConfigError naming the field; serialization is canonical, so a config
// round-trips losslessly through parse/serialize.
struct RunConfig {
  int commodities = 1;
  int states = 2;
  // Either "uniform" or an explicit list of S weights.
  bool weights_uniform = true;
  std::vector<double> weights;

  // Utility: a builtin family (with parameters) or a user expression.
  std::string family = "log-additive";
  std::vector<double> family_params;
  std::string expr;  // non-empty selects the expression path

  std::uint64_t seed = 42;
  long samples = 100;
  int threads = 0;  // 0 = resolve via EU_KIT_THREADS, then 1
  double box_lo = 1e-3;
  double box_hi = 1e3;

  // Tolerances.
  double nd_tolerance = 0.0;  // 0 = scale-aware default
  double fd_gradient_step = 1e-5;
  double fd_hessian_step = 1e-4;
  std::vector<double> divergence_thresholds = {1e1, 1e2, 1e3, 1e4};

  // verify-theorem options.
  bool sweep = false;
  bool brute_force = false;
  bool inject_sign_flip = false;

  // search-qc options.
  int search_grid = 10;
  long search_points_per_cell = 16;
  long search_budget = 1000000;
  double search_emission_tolerance = 1e-8;

  // bench options.
  std::vector<int> bench_states = {4, 16, 64, 256};
  std::vector<int> bench_commodities = {1, 4, 16};
  int bench_repetitions = 3;

  static RunConfig from_json(const OrderedJson& j);
  static RunConfig from_json_text(const std::string& text);
  OrderedJson to_json() const;
};

// Parses "0.5,0.25,0.25" or "uniform" into the weight fields.
void apply_weights_spec(RunConfig& cfg, const std::string& spec);

}  // namespace eukit
