#include "eukit/config.hpp"

#include <nlohmann/json.hpp>

#include "eukit/errors.hpp"

namespace eukit {

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw ConfigError("config field '" + field + "': " + why);
}

template <typename T>
T get_or(const OrderedJson& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    bad_field(key, e.what());
  }
}

}  // namespace

RunConfig RunConfig::from_json(const OrderedJson& j) {
  RunConfig cfg;
  if (!j.is_object()) throw ConfigError("config: root must be a JSON object");

  const int schema = get_or<int>(j, "schema_version", 1);
  if (schema != 1) bad_field("schema_version", "unsupported version");

  if (j.contains("dims")) {
    const auto& d = j.at("dims");
    cfg.commodities = get_or<int>(d, "C", cfg.commodities);
    cfg.states = get_or<int>(d, "S", cfg.states);
  }
  if (cfg.commodities < 1) bad_field("dims.C", "must be >= 1");
  if (cfg.states < 1) bad_field("dims.S", "must be >= 1");

  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    if (w.is_string()) {
      if (w.get<std::string>() != "uniform") bad_field("weights", "string form must be 'uniform'");
      cfg.weights_uniform = true;
      cfg.weights.clear();
    } else if (w.is_array()) {
      cfg.weights_uniform = false;
      cfg.weights.clear();
      for (const auto& v : w) {
        if (!v.is_number()) bad_field("weights", "entries must be numbers");
        cfg.weights.push_back(v.get<double>());
      }
    } else {
      bad_field("weights", "must be 'uniform' or an array");
    }
  }

  if (j.contains("family")) {
    const auto& f = j.at("family");
    if (f.is_string()) {
      cfg.family = f.get<std::string>();
      cfg.family_params.clear();
    } else if (f.is_object()) {
      cfg.family = get_or<std::string>(f, "name", cfg.family);
      cfg.family_params = get_or<std::vector<double>>(f, "params", {});
    } else {
      bad_field("family", "must be a name or {name, params}");
    }
  }
  cfg.expr = get_or<std::string>(j, "expr", "");

  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.samples = get_or<long>(j, "samples", cfg.samples);
  if (cfg.samples < 1) bad_field("samples", "must be >= 1");
  cfg.threads = get_or<int>(j, "threads", cfg.threads);
  if (cfg.threads < 0) bad_field("threads", "must be >= 0");

  if (j.contains("box")) {
    const auto& b = j.at("box");
    cfg.box_lo = get_or<double>(b, "lo", cfg.box_lo);
    cfg.box_hi = get_or<double>(b, "hi", cfg.box_hi);
  }
  if (!(cfg.box_lo > 0.0) || !(cfg.box_hi > cfg.box_lo)) bad_field("box", "need 0 < lo < hi");

  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    cfg.nd_tolerance = get_or<double>(t, "nd", cfg.nd_tolerance);
    cfg.fd_gradient_step = get_or<double>(t, "fd_gradient_step", cfg.fd_gradient_step);
    cfg.fd_hessian_step = get_or<double>(t, "fd_hessian_step", cfg.fd_hessian_step);
    cfg.divergence_thresholds =
        get_or<std::vector<double>>(t, "divergence_thresholds", cfg.divergence_thresholds);
    if (cfg.nd_tolerance < 0.0) bad_field("tolerances.nd", "must be >= 0");
    if (!(cfg.fd_gradient_step > 0.0)) bad_field("tolerances.fd_gradient_step", "must be > 0");
    if (!(cfg.fd_hessian_step > 0.0)) bad_field("tolerances.fd_hessian_step", "must be > 0");
    for (double k : cfg.divergence_thresholds)
      if (!(k > 0.0)) bad_field("tolerances.divergence_thresholds", "must be positive");
  }

  if (j.contains("verify_theorem")) {
    const auto& v = j.at("verify_theorem");
    cfg.sweep = get_or<bool>(v, "sweep", cfg.sweep);
    cfg.brute_force = get_or<bool>(v, "brute_force", cfg.brute_force);
    cfg.inject_sign_flip = get_or<bool>(v, "inject_sign_flip", cfg.inject_sign_flip);
  }

  if (j.contains("search")) {
    const auto& s = j.at("search");
    cfg.search_grid = get_or<int>(s, "grid", cfg.search_grid);
    cfg.search_points_per_cell = get_or<long>(s, "points_per_cell", cfg.search_points_per_cell);
    cfg.search_budget = get_or<long>(s, "budget", cfg.search_budget);
    cfg.search_emission_tolerance =
        get_or<double>(s, "emission_tolerance", cfg.search_emission_tolerance);
    if (cfg.search_grid < 1) bad_field("search.grid", "must be >= 1");
    if (cfg.search_budget < 1) bad_field("search.budget", "must be >= 1");
  }

  if (j.contains("bench")) {
    const auto& b = j.at("bench");
    cfg.bench_states = get_or<std::vector<int>>(b, "S", cfg.bench_states);
    cfg.bench_commodities = get_or<std::vector<int>>(b, "C", cfg.bench_commodities);
    cfg.bench_repetitions = get_or<int>(b, "repetitions", cfg.bench_repetitions);
    if (cfg.bench_repetitions < 1) bad_field("bench.repetitions", "must be >= 1");
  }

  return cfg;
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  OrderedJson j;
  try {
    j = OrderedJson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return from_json(j);
}

OrderedJson RunConfig::to_json() const {
  OrderedJson j;
  j["schema_version"] = 1;
  j["dims"] = {{"C", commodities}, {"S", states}};
  if (weights_uniform)
    j["weights"] = "uniform";
  else
    j["weights"] = weights;
  j["family"] = {{"name", family}, {"params", family_params}};
  j["expr"] = expr;
  j["seed"] = seed;
  j["samples"] = samples;
  j["threads"] = threads;
  j["box"] = {{"lo", box_lo}, {"hi", box_hi}};
  j["tolerances"] = {{"nd", nd_tolerance},
                     {"fd_gradient_step", fd_gradient_step},
                     {"fd_hessian_step", fd_hessian_step},
                     {"divergence_thresholds", divergence_thresholds}};
  j["verify_theorem"] = {
      {"sweep", sweep}, {"brute_force", brute_force}, {"inject_sign_flip", inject_sign_flip}};
  j["search"] = {{"grid", search_grid},
                 {"points_per_cell", search_points_per_cell},
                 {"budget", search_budget},
                 {"emission_tolerance", search_emission_tolerance}};
  j["bench"] = {{"S", bench_states}, {"C", bench_commodities}, {"repetitions", bench_repetitions}};
  return j;
}

void apply_weights_spec(RunConfig& cfg, const std::string& spec) {
  if (spec == "uniform") {
    cfg.weights_uniform = true;
    cfg.weights.clear();
    return;
  }
  std::vector<double> out;
  size_t start = 0;
  while (start <= spec.size()) {
    const size_t comma = spec.find(',', start);
    const std::string tok = spec.substr(start, comma == std::string::npos ? spec.size() - start
                                                                          : comma - start);
    try {
      if (!tok.empty()) out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("config field 'weights': malformed number '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("config field 'weights': empty list");
  cfg.weights_uniform = false;
  cfg.weights = std::move(out);
}

}  // namespace eukit
