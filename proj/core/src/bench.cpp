#include "eukit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include <Eigen/Cholesky>
#include <nlohmann/json.hpp>

#include "eukit/blockarrow.hpp"
#include "eukit/errors.hpp"

namespace eukit {

namespace {

using Clock = std::chrono::steady_clock;

double measure_once(const std::function<void()>& fn, double min_seconds) {
  long iters = 1;
  while (true) {
    const auto t0 = Clock::now();
    for (long i = 0; i < iters; ++i) fn();
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    if (elapsed >= min_seconds || iters >= (1L << 22))
      return elapsed / static_cast<double>(iters);
    iters *= 4;
  }
}

double measure_median(const std::function<void()>& fn, int reps, double min_seconds) {
  std::vector<double> times;
  times.reserve(reps);
  for (int r = 0; r < reps; ++r) times.push_back(measure_once(fn, min_seconds));
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

double fit_exponent(const std::vector<double>& s_values, const std::vector<double>& times) {
  const size_t n = s_values.size();
  double mx = 0, my = 0;
  std::vector<double> lx(n), ly(n);
  for (size_t i = 0; i < n; ++i) {
    lx[i] = std::log(s_values[i]);
    ly[i] = std::log(times[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  return sxy / sxx;
}

Definiteness dense_llt_decision(const Matrix& dense_neg) {
  Eigen::LLT<Matrix> llt(dense_neg);
  return llt.info() == Eigen::Success ? Definiteness::negative_definite
                                      : Definiteness::not_negative_definite;
}

}  // namespace

BenchReport bench_nd(const BenchConfig& cfg) {
  if (cfg.repetitions < 1) throw ConfigError("bench: repetitions must be >= 1");
  BenchReport report;

  for (int c : cfg.commodity_sweep) {
    std::vector<double> s_axis, structured_times, dense_times;
    for (int s : cfg.state_sweep) {
      const Dimensions dims(c, s);
      const std::uint64_t cell_seed =
          substream_seed(cfg.seed, 0xbe9c0 + static_cast<std::uint64_t>(c) * 1000 + s);

      // Decision agreement on one definite and one indefinite instance.
      for (auto kind : {ArrowInstanceKind::definite, ArrowInstanceKind::indefinite}) {
        const BlockArrowHessian h = random_block_arrow(dims, kind, cell_seed + 7);
        const NdResult structured = is_negative_definite(h);
        const Definiteness dense = dense_llt_decision(Matrix(-h.densify()));
        ++report.instances_checked;
        if (structured.decision != dense) report.decisions_agree = false;
      }

      // Time on a definite instance: both methods do their full work there.
      const BlockArrowHessian h = random_block_arrow(dims, ArrowInstanceKind::definite, cell_seed);
      const Matrix dense_neg = -h.densify();
      const int reps = dims.total() >= 2000 ? 1 : cfg.repetitions;

      int acc = 0;
      const double t_structured = measure_median(
          [&] { acc += static_cast<int>(is_negative_definite(h).decision); }, reps,
          cfg.min_measure_seconds);
      const double t_dense = measure_median(
          [&] { acc += static_cast<int>(dense_llt_decision(dense_neg)); }, reps,
          cfg.min_measure_seconds);
      volatile int sink = acc;
      (void)sink;

      const NdResult timed_decision = is_negative_definite(h);
      report.rows.push_back({s, c, "structured", t_structured, to_string(timed_decision.decision)});
      report.rows.push_back({s, c, "dense", t_dense, to_string(timed_decision.decision)});
      s_axis.push_back(static_cast<double>(s));
      structured_times.push_back(t_structured);
      dense_times.push_back(t_dense);
    }
    if (s_axis.size() >= 2)
      report.fits.push_back(
          {c, fit_exponent(s_axis, structured_times), fit_exponent(s_axis, dense_times)});
  }

  if (!report.fits.empty()) {
    const auto& last = report.fits.back();  // largest commodity count
    report.structured_exponent = last.structured_exponent;
    report.dense_exponent = last.dense_exponent;
  }
  return report;
}

std::string BenchReport::table() const {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%6s %4s %12s %14s %10s\n", "S", "C", "method", "median_ms",
                "decision");
  out += buf;
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%6d %4d %12s %14.4f %10s\n", row.states, row.commodities,
                  row.method.c_str(), row.median_seconds * 1e3, row.decision.c_str());
    out += buf;
  }
  for (const auto& fit : fits) {
    std::snprintf(buf, sizeof(buf),
                  "C=%-3d  S-scaling exponents: structured %.3f, dense %.3f\n", fit.commodities,
                  fit.structured_exponent, fit.dense_exponent);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf),
                "headline exponents (largest C): structured %.3f, dense %.3f; "
                "decision agreement on %ld instances: %s\n",
                structured_exponent, dense_exponent, instances_checked,
                decisions_agree ? "yes" : "NO");
  out += buf;
  return out;
}

std::vector<std::string> BenchReport::jsonl_lines() const {
  std::vector<std::string> lines;
  for (const auto& row : rows) {
    OrderedJson j;
    j["record"] = "bench";
    j["S"] = row.states;
    j["C"] = row.commodities;
    j["method"] = row.method;
    j["median_seconds"] = row.median_seconds;
    j["decision"] = row.decision;
    lines.push_back(to_jsonl_line(j));
  }
  for (const auto& fit : fits) {
    OrderedJson j;
    j["record"] = "bench_fit";
    j["C"] = fit.commodities;
    j["structured_exponent"] = fit.structured_exponent;
    j["dense_exponent"] = fit.dense_exponent;
    lines.push_back(to_jsonl_line(j));
  }
  OrderedJson j;
  j["record"] = "bench_summary";
  j["structured_exponent"] = structured_exponent;
  j["dense_exponent"] = dense_exponent;
  j["instances_checked"] = instances_checked;
  j["decisions_agree"] = decisions_agree;
  lines.push_back(to_jsonl_line(j));
  return lines;
}

}  // namespace eukit
