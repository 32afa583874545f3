// Command-line front end: check / verify-theorem / search-qc / bench.
// A JSON config file supplies defaults; flags win over the file.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eukit/config.hpp"
#include "eukit/errors.hpp"
#include "eukit/runner.hpp"

namespace {

std::vector<double> parse_double_list(const std::string& spec, const char* field) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw eukit::ConfigError(std::string("config field '") + field + "': malformed number '" +
                               tok + "'");
    }
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& spec, const char* field) {
  std::vector<int> out;
  for (double v : parse_double_list(spec, field)) out.push_back(static_cast<int>(v));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eukit - expected-utility property checking toolkit"};
  app.require_subcommand(1);
  // Global options (--seed, --out, --threads, --config) may follow the
  // subcommand.
  app.fallthrough();

  std::string config_path, out_path, weights_spec, params_spec, bench_s_spec, bench_c_spec;
  eukit::RunConfig cli;  // flag values land here

  app.add_option("--config", config_path, "JSON config file (flags override it)");
  auto* opt_seed = app.add_option("--seed", cli.seed, "RNG seed");
  app.add_option("--out", out_path, "write the JSONL stream to this file");
  auto* opt_threads = app.add_option("--threads", cli.threads,
                                     "worker threads (0 = EU_KIT_THREADS or 1)");

  struct CommonOpts {
    CLI::Option *c = nullptr, *s = nullptr, *weights = nullptr, *family = nullptr,
                *params = nullptr, *expr = nullptr, *samples = nullptr, *box_lo = nullptr,
                *box_hi = nullptr;
  };
  auto add_common = [&](CLI::App* sub) {
    CommonOpts o;
    o.c = sub->add_option("--C", cli.commodities, "commodities per bundle");
    o.s = sub->add_option("--S", cli.states, "states of the world");
    o.weights = sub->add_option("--weights", weights_spec, "comma list or 'uniform'");
    o.family = sub->add_option("--family", cli.family, "builtin utility family");
    o.params = sub->add_option("--params", params_spec, "family parameters, comma list");
    o.expr = sub->add_option("--expr", cli.expr,
                             "utility expression over x0.., y0.. (fd derivatives)");
    o.samples = sub->add_option("--samples", cli.samples, "sample points per property");
    o.box_lo = sub->add_option("--box-lo", cli.box_lo, "sampling box lower bound");
    o.box_hi = sub->add_option("--box-hi", cli.box_hi, "sampling box upper bound");
    return o;
  };

  CLI::App* cmd_check = app.add_subcommand("check", "run the property battery on u and U");
  const CommonOpts check_opts = add_common(cmd_check);

  CLI::App* cmd_verify =
      app.add_subcommand("verify-theorem", "cross-check u-level and U-level verdicts");
  const CommonOpts verify_opts = add_common(cmd_verify);
  auto* opt_sweep =
      cmd_verify->add_flag("--sweep", cli.sweep, "full builtin sweep over dims and weights");
  auto* opt_brute =
      cmd_verify->add_flag("--brute-force", cli.brute_force, "grid oracle comparison (G <= 3)");
  auto* opt_inject = cmd_verify->add_flag("--inject-sign-flip", cli.inject_sign_flip,
                                          "test-only deliberate fault injection");

  CLI::App* cmd_search =
      app.add_subcommand("search-qc", "scan for tangent-space curvature near-violations");
  const CommonOpts search_opts = add_common(cmd_search);
  auto* opt_grid = cmd_search->add_option("--grid", cli.search_grid, "tilt grid resolution");
  auto* opt_ppc = cmd_search->add_option("--points-per-cell", cli.search_points_per_cell,
                                         "probe points per cell");
  auto* opt_budget =
      cmd_search->add_option("--budget", cli.search_budget, "probe-point evaluation budget");
  auto* opt_emit = cmd_search->add_option("--emission-tol", cli.search_emission_tolerance,
                                          "emit candidates with max eigenvalue >= -tol");

  CLI::App* cmd_bench =
      app.add_subcommand("bench", "time structured vs dense definiteness checks");
  cmd_bench->add_option("--bench-S", bench_s_spec, "state counts, comma list");
  cmd_bench->add_option("--bench-C", bench_c_spec, "commodity counts, comma list");
  auto* opt_reps = cmd_bench->add_option("--repetitions", cli.bench_repetitions,
                                         "timing repetitions");

  CLI11_PARSE(app, argc, argv);

  eukit::RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw eukit::ConfigError("config: cannot open '" + config_path + "'");
      std::stringstream buffer;
      buffer << in.rdbuf();
      cfg = eukit::RunConfig::from_json_text(buffer.str());
    }

    // Flags override the file.
    auto set_if = [](const CLI::Option* opt, auto& dst, const auto& src) {
      if (opt && opt->count() > 0) dst = src;
    };
    for (const CommonOpts* o : {&check_opts, &verify_opts, &search_opts}) {
      set_if(o->c, cfg.commodities, cli.commodities);
      set_if(o->s, cfg.states, cli.states);
      set_if(o->family, cfg.family, cli.family);
      set_if(o->expr, cfg.expr, cli.expr);
      set_if(o->samples, cfg.samples, cli.samples);
      set_if(o->box_lo, cfg.box_lo, cli.box_lo);
      set_if(o->box_hi, cfg.box_hi, cli.box_hi);
    }
    set_if(opt_seed, cfg.seed, cli.seed);
    set_if(opt_threads, cfg.threads, cli.threads);
    set_if(opt_sweep, cfg.sweep, cli.sweep);
    set_if(opt_brute, cfg.brute_force, cli.brute_force);
    set_if(opt_inject, cfg.inject_sign_flip, cli.inject_sign_flip);
    set_if(opt_grid, cfg.search_grid, cli.search_grid);
    set_if(opt_ppc, cfg.search_points_per_cell, cli.search_points_per_cell);
    set_if(opt_budget, cfg.search_budget, cli.search_budget);
    set_if(opt_emit, cfg.search_emission_tolerance, cli.search_emission_tolerance);
    set_if(opt_reps, cfg.bench_repetitions, cli.bench_repetitions);
    if (!weights_spec.empty()) eukit::apply_weights_spec(cfg, weights_spec);
    if (!params_spec.empty())
      cfg.family_params = parse_double_list(params_spec, "family.params");
    if (!bench_s_spec.empty()) cfg.bench_states = parse_int_list(bench_s_spec, "bench.S");
    if (!bench_c_spec.empty())
      cfg.bench_commodities = parse_int_list(bench_c_spec, "bench.C");
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 64;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const eukit::RunResult result = eukit::run_command(command, cfg);

  if (result.exit_code == 64) {
    std::cerr << result.text;
    return 64;
  }
  if (!result.jsonl.empty()) {
    if (out_path.empty()) {
      std::cout << result.jsonl;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "cannot open output file '" << out_path << "'\n";
        return 64;
      }
      out << result.jsonl;
    }
  }
  if (!result.text.empty()) std::cout << result.text;
  return result.exit_code;
}
