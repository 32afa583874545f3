#include "eukit/runner.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "eukit/bench.hpp"
#include "eukit/errors.hpp"
#include "eukit/expression.hpp"
#include "eukit/families.hpp"
#include "eukit/parallel.hpp"
#include "eukit/quasiconcavity.hpp"
#include "eukit/theorem.hpp"

namespace eukit {

namespace {

OrderedJson new_record(const char* type) {
  OrderedJson j;
  j["schema_version"] = 1;
  j["record"] = type;
  return j;
}

CheckConfig make_check_config(const RunConfig& cfg) {
  CheckConfig c;
  c.samples = cfg.samples;
  c.seed = cfg.seed;
  c.box = {cfg.box_lo, cfg.box_hi};
  c.nd_tolerance = cfg.nd_tolerance;
  c.fd = FdSteps::relative_steps(cfg.fd_gradient_step, cfg.fd_hessian_step);
  c.boundary.thresholds = cfg.divergence_thresholds;
  c.threads = resolve_threads(cfg.threads);
  return c;
}

struct OracleChoice {
  VnmOracle oracle;
  std::string caveat;  // nonempty for expression utilities
};

OracleChoice make_oracle(const RunConfig& cfg) {
  if (!cfg.expr.empty()) {
    VnmOracle u = expression_oracle(
        cfg.expr, cfg.commodities,
        FdSteps::relative_steps(cfg.fd_gradient_step, cfg.fd_hessian_step));
    return {std::move(u),
            "user expression utility: derivatives by finite differences, no analytic oracle"};
  }
  return {builtin_family(cfg.family, cfg.family_params, cfg.commodities), ""};
}

ProbabilityWeights make_run_weights(const RunConfig& cfg) {
  if (cfg.weights_uniform) return ProbabilityWeights::uniform(cfg.states);
  if (static_cast<int>(cfg.weights.size()) != cfg.states)
    throw ConfigError("config field 'weights': expected " + std::to_string(cfg.states) +
                      " entries, got " + std::to_string(cfg.weights.size()));
  return ProbabilityWeights::make(cfg.weights);
}

OrderedJson header_record(const char* command, const RunConfig& cfg, const std::string& caveat) {
  OrderedJson j = new_record("header");
  j["command"] = command;
  // The echoed config normalizes the worker count: it is an execution
  // detail, and output streams are byte-identical across thread counts.
  RunConfig echoed = cfg;
  echoed.threads = 0;
  j["config"] = echoed.to_json();
  if (!caveat.empty()) j["caveat"] = caveat;
  return j;
}

void append_line(std::string& out, const OrderedJson& j) {
  out += to_jsonl_line(j);
  out += '\n';
}

int exit_from_reports(const std::vector<PropertyReport>& reports, bool aborted) {
  bool any_fail = false, any_indet = aborted;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::fail) any_fail = true;
    if (r.verdict == Verdict::indeterminate) any_indet = true;
  }
  if (any_fail) return 2;
  if (any_indet) return 3;
  return 0;
}

// Weight vectors exercised per dims cell in the sweep: uniform, a geometric
// skew, and a front-loaded vector. S = 1 admits only (1).
std::vector<ProbabilityWeights> sweep_weights(int states) {
  std::vector<ProbabilityWeights> out;
  out.push_back(ProbabilityWeights::uniform(states));
  if (states < 2) return out;
  Vector geo(states);
  for (int s = 0; s < states; ++s) geo[s] = std::pow(2.0, -(s + 1));
  out.push_back(ProbabilityWeights::make(Vector(geo / geo.sum())));
  Vector front = Vector::Constant(states, 0.3 / (states - 1));
  front[0] = 0.7;
  out.push_back(ProbabilityWeights::make(front));
  return out;
}

OrderedJson pairs_to_json(const EquivalenceVerdict& v) {
  OrderedJson arr = OrderedJson::array();
  for (const auto& p : v.pairs) {
    OrderedJson j;
    j["property"] = to_string(p.property);
    j["u"] = to_string(p.on_vnm);
    j["U"] = to_string(p.on_expected);
    j["restricted"] = to_string(p.on_restricted);
    arr.push_back(j);
  }
  return arr;
}

OrderedJson discrepancies_to_json(const std::vector<Discrepancy>& ds) {
  OrderedJson arr = OrderedJson::array();
  for (const auto& d : ds) {
    OrderedJson j;
    j["property"] = to_string(d.property);
    j["direction"] = d.direction;
    j["detail"] = d.detail;
    arr.push_back(j);
  }
  return arr;
}

}  // namespace

RunResult run_check(const RunConfig& cfg) {
  RunResult out;
  const Dimensions dims(cfg.commodities, cfg.states);
  const OracleChoice choice = make_oracle(cfg);
  const ProbabilityWeights weights = make_run_weights(cfg);
  const CheckConfig ccfg = make_check_config(cfg);

  append_line(out.jsonl, header_record("check", cfg, choice.caveat));

  const CheckAllResult on_u = check_all(choice.oracle, ccfg);
  const ExpectedUtility eu(choice.oracle, weights, dims);
  const CheckAllResult on_eu = check_all(eu, ccfg);

  std::vector<PropertyReport> all;
  for (const auto& r : on_u.reports) all.push_back(r);
  for (const auto& r : on_eu.reports) all.push_back(r);
  for (const auto& r : all) {
    OrderedJson j = new_record("report");
    j.update(report_to_json(r));
    if (!choice.caveat.empty()) j["caveat"] = choice.caveat;
    append_line(out.jsonl, j);
  }

  OrderedJson summary = new_record("summary");
  summary["reports"] = all.size();
  summary["aborted"] = on_u.aborted || on_eu.aborted;
  if (on_u.aborted) summary["error"] = on_u.error;
  if (on_eu.aborted) summary["error"] = on_eu.error;
  append_line(out.jsonl, summary);

  out.exit_code = exit_from_reports(all, on_u.aborted || on_eu.aborted);
  out.text = "check: " + std::to_string(all.size()) + " reports, exit " +
             std::to_string(out.exit_code) + "\n";
  return out;
}

RunResult run_verify_theorem(const RunConfig& cfg) {
  RunResult out;
  const CheckConfig ccfg = make_check_config(cfg);
  TheoremConfig tcfg;
  tcfg.check = ccfg;
  tcfg.inject_sign_flip = cfg.inject_sign_flip;

  append_line(out.jsonl, header_record("verify-theorem", cfg, ""));

  struct Cell {
    std::string family;
    std::vector<double> params;
    Dimensions dims;
    ProbabilityWeights weights;
  };
  std::vector<Cell> cells;
  if (cfg.sweep) {
    for (const std::string& name : builtin_family_names()) {
      const std::vector<double> params = name == "crra" ? std::vector<double>{2.0}
                                                        : std::vector<double>{};
      for (int c : {1, 2, 3})
        for (int s : {1, 2, 4})
          for (const auto& w : sweep_weights(s)) cells.push_back({name, params, {c, s}, w});
    }
  } else {
    if (cfg.expr.empty()) {
      cells.push_back({cfg.family, cfg.family_params, Dimensions(cfg.commodities, cfg.states),
                       make_run_weights(cfg)});
    } else {
      cells.push_back({"expr", {}, Dimensions(cfg.commodities, cfg.states),
                       make_run_weights(cfg)});
    }
  }

  bool all_consistent = true;
  long inconsistent_cells = 0;
  for (const auto& cell : cells) {
    const VnmOracle u = cell.family == "expr"
                            ? make_oracle(cfg).oracle
                            : builtin_family(cell.family, cell.params, cell.dims.commodities());
    const EquivalenceVerdict verdict = verify_equivalence(u, cell.weights, cell.dims, tcfg);

    OrderedJson j = new_record("equivalence");
    j["family"] = cell.family;
    j["params"] = cell.params;
    j["C"] = cell.dims.commodities();
    j["S"] = cell.dims.states();
    std::vector<double> w(cell.weights.values().data(),
                          cell.weights.values().data() + cell.weights.states());
    j["weights"] = w;
    j["consistent"] = verdict.consistent;
    j["pairs"] = pairs_to_json(verdict);
    j["discrepancies"] = discrepancies_to_json(verdict.discrepancies);
    if (verdict.aborted) j["error"] = verdict.error;

    if (cfg.brute_force && cell.dims.total() <= 3 && !verdict.aborted) {
      const BruteForceResult brute =
          brute_force_oracle(u, cell.weights, cell.dims, BruteForceConfig{});
      const CheckAllResult on_u = check_all(u, ccfg);
      const CheckAllResult on_eu =
          check_all(ExpectedUtility(u, cell.weights, cell.dims), ccfg);
      const auto brute_disagreements = compare_brute_force(brute, on_u, on_eu);
      j["brute_force_agreement"] = brute_disagreements.empty();
      j["brute_force_discrepancies"] = discrepancies_to_json(brute_disagreements);
      if (!brute_disagreements.empty()) all_consistent = false;
    }

    if (!verdict.consistent || verdict.aborted) {
      all_consistent = false;
      ++inconsistent_cells;
    }
    append_line(out.jsonl, j);
  }

  OrderedJson summary = new_record("summary");
  summary["cells"] = cells.size();
  summary["consistent"] = all_consistent;
  append_line(out.jsonl, summary);

  out.exit_code = all_consistent ? 0 : 1;
  out.text = "verify-theorem: " + std::to_string(cells.size()) + " cells, " +
             (all_consistent ? "consistent" : std::to_string(inconsistent_cells) +
                                                  " inconsistent (harness defect)") +
             "\n";
  return out;
}

RunResult run_search_qc(const RunConfig& cfg) {
  RunResult out;
  SearchConfig scfg = SearchConfig::with_default_families();
  scfg.tilt_grid = cfg.search_grid;
  scfg.points_per_cell = cfg.search_points_per_cell;
  scfg.budget = cfg.search_budget;
  scfg.emission_tolerance = cfg.search_emission_tolerance;
  scfg.seed = cfg.seed;
  scfg.box = {cfg.box_lo, cfg.box_hi};
  scfg.threads = resolve_threads(cfg.threads);
  const std::pair<int, int> cell{cfg.commodities, cfg.states};
  bool present = false;
  for (const auto& d : scfg.dims_grid)
    if (d == cell) present = true;
  if (!present) scfg.dims_grid.push_back(cell);

  append_line(out.jsonl, header_record("search-qc", cfg, ""));
  const SearchResult result = search_counterexample(scfg);

  for (const auto& c : result.candidates) {
    OrderedJson j = new_record("candidate");
    j["family"] = c.family;
    j["params"] = c.params;
    std::vector<double> w(c.weights.data(), c.weights.data() + c.weights.size());
    j["weights"] = w;
    j["C"] = c.commodities;
    j["S"] = c.states;
    j["point"] = vector_to_json_17(c.point);
    j["direction"] = vector_to_json_17(c.direction);
    j["gradient_residual"] = c.gradient_residual;
    j["curvature_value"] = c.curvature_value;
    j["u_certificate"] = c.u_certificate;
    j["seed"] = cfg.seed;
    append_line(out.jsonl, j);
  }

  OrderedJson summary = new_record("search_summary");
  summary["candidates"] = result.candidates.size();
  summary["evaluations_used"] = result.evaluations_used;
  summary["budget"] = cfg.search_budget;
  summary["budget_exhausted"] = result.budget_exhausted;
  summary["cells_total"] = result.cells_total;
  summary["cells_skipped"] = result.cells_skipped;
  append_line(out.jsonl, summary);

  out.exit_code = 0;
  out.text = "search-qc: " + std::to_string(result.candidates.size()) + " candidates from " +
             std::to_string(result.cells_total) + " cells (" +
             std::to_string(result.cells_skipped) + " skipped), " +
             std::to_string(result.evaluations_used) + " evaluations" +
             (result.budget_exhausted ? ", budget exhausted" : "") + "\n";
  return out;
}

RunResult run_bench(const RunConfig& cfg) {
  RunResult out;
  BenchConfig bcfg;
  bcfg.state_sweep = cfg.bench_states;
  bcfg.commodity_sweep = cfg.bench_commodities;
  bcfg.repetitions = cfg.bench_repetitions;
  bcfg.seed = cfg.seed;

  append_line(out.jsonl, header_record("bench", cfg, ""));
  const BenchReport report = bench_nd(bcfg);
  for (const auto& line : report.jsonl_lines()) {
    out.jsonl += line;
    out.jsonl += '\n';
  }
  out.text = report.table();
  out.exit_code = report.decisions_agree ? 0 : 1;
  return out;
}

RunResult run_command(const std::string& command, const RunConfig& cfg) {
  try {
    if (command == "check") return run_check(cfg);
    if (command == "verify-theorem") return run_verify_theorem(cfg);
    if (command == "search-qc") return run_search_qc(cfg);
    if (command == "bench") return run_bench(cfg);
    RunResult r;
    r.exit_code = 64;
    r.text = "unknown command '" + command + "'\n";
    return r;
  } catch (const ConfigError& e) {
    return {64, "", std::string(e.what()) + "\n"};
  } catch (const NormalizationError& e) {
    return {64, "", std::string("config field 'weights': ") + e.what() + "\n"};
  } catch (const DimensionError& e) {
    return {64, "", std::string(e.what()) + "\n"};
  } catch (const DomainError& e) {
    return {64, "", std::string(e.what()) + "\n"};
  }
}

}  // namespace eukit
