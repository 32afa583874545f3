// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "eukit/bench.hpp"
#include "eukit/families.hpp"
#include "eukit/quasiconcavity.hpp"
#include "eukit/runner.hpp"
#include "eukit/theorem.hpp"
#include "support/test_oracles.hpp"

using namespace eukit;

namespace {

using Clock = std::chrono::steady_clock;

std::vector<double> family_params(const std::string& name) {
  return name == "crra" ? std::vector<double>{2.0} : std::vector<double>{};
}

struct Failure {
  bool failed = false;
  std::string detail;
  void flag(const std::string& d) {
    failed = true;
    if (detail.empty()) detail = d;
  }
};

// 1. Full equivalence sweep: 6 families x C in {1,2,3} x S in {1,2,4} x 3
//    weight vectors; every determinate u-verdict equals the U-verdict;
//    runtime under 60 s.
bool criterion_theorem_sweep(std::string& detail) {
  RunConfig cfg;
  cfg.sweep = true;
  cfg.samples = 48;
  cfg.seed = 20240811;
  const auto t0 = Clock::now();
  const RunResult r = run_verify_theorem(cfg);
  const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  char buf[128];
  std::snprintf(buf, sizeof(buf), "exit %d in %.1fs", r.exit_code, seconds);
  detail = buf;
  if (r.exit_code != 0) return false;
  if (seconds >= 60.0) {
    detail += " (over the 60 s budget)";
    return false;
  }
  return r.jsonl.find("\"consistent\":false") == std::string::npos;
}

// 2. Restriction identities: value to 1e-12 relative, gradient to 1e-10,
//    Hessian to 1e-10, 200 points per (family, dims) cell.
bool criterion_restriction_identities(std::string& detail) {
  Failure f;
  for (const std::string& name : builtin_family_names()) {
    for (int c : {1, 2, 3}) {
      for (int s : {1, 2, 4}) {
        const Dimensions dims(c, s);
        const auto u = builtin_family(name, family_params(name), c);
        const ExpectedUtility eu(u, ProbabilityWeights::uniform(s), dims);
        const RestrictedUtility r(eu.as_field(), dims);
        for (int i = 0; i < 200 && !f.failed; ++i) {
          const Vector p = sample_point(2 * c, SampleBox{}, 1000, i);
          const double vu = u.value(p);
          if (std::abs(r.value(p) - vu) > 1e-12 * (1e-300 + std::abs(vu)))
            f.flag("value mismatch: " + name);
          const Vector gu = u.gradient(p);
          const Vector gr = r.gradient(p);
          for (int j = 0; j < 2 * c; ++j)
            if (std::abs(gr[j] - gu[j]) > 1e-10 * (1e-300 + std::abs(gu[j])))
              f.flag("gradient mismatch: " + name);
          const Matrix hu = u.hessian(p);
          const Matrix hr = r.hessian(p);
          for (int a = 0; a < 2 * c; ++a)
            for (int b = 0; b < 2 * c; ++b)
              if (std::abs(hr(a, b) - hu(a, b)) > 1e-10 * (1e-300 + std::abs(hu(a, b))))
                f.flag("hessian mismatch: " + name);
        }
      }
    }
  }
  detail = f.failed ? f.detail : "6 families x 9 dims x 200 points";
  return !f.failed;
}

// 3. Assembled gradient vs central differences of eval: relative error
//    below 1e-6 at 200 points per analytic family.
bool criterion_gradient_formula(std::string& detail) {
  Failure f;
  const Dimensions dims(2, 3);
  const SampleBox box{0.5, 2.0};
  for (const std::string& name : builtin_family_names()) {
    const ExpectedUtility eu(builtin_family(name, family_params(name), 2),
                             ProbabilityWeights::make({0.2, 0.3, 0.5}), dims);
    ExpectedUtility copy = eu;
    auto value = [copy](const Vector& x) { return copy.eval(x); };
    for (int i = 0; i < 200 && !f.failed; ++i) {
      const Vector x = sample_point(dims.total(), box, 2000, i);
      const Vector g = eu.gradient(x);
      const Vector g_fd = fd_gradient(value, x, FdSteps::relative_steps());
      for (int j = 0; j < dims.total(); ++j)
        if (std::abs(g_fd[j] - g[j]) > 1e-6 * std::abs(g[j]))
          f.flag(name + ": gradient relative error above 1e-6");
    }
  }
  detail = f.failed ? f.detail : "6 families x 200 points, relative < 1e-6";
  return !f.failed;
}

// 4. Block-arrow sparsity: cross-state blocks of the fd Hessian of U below
//    1e-5 absolute; densified structured Hessian within 1e-4 per entry of
//    the fd Hessian.
bool criterion_hessian_sparsity(std::string& detail) {
  Failure f;
  const Dimensions dims(2, 3);
  const SampleBox box{0.5, 2.0};
  const int c = 2;
  for (const std::string& name : builtin_family_names()) {
    const ExpectedUtility eu(builtin_family(name, family_params(name), 2),
                             ProbabilityWeights::make({0.2, 0.3, 0.5}), dims);
    const ScalarField shadow = testing::fd_shadow(eu, FdSteps::relative_steps());
    for (int i = 0; i < 20 && !f.failed; ++i) {
      const Vector x = sample_point(dims.total(), box, 3000, i);
      const Matrix h_fd = shadow.hessian(x);
      for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
          if (a == b) continue;
          if (h_fd.block(c * a, c * b, c, c).cwiseAbs().maxCoeff() > 1e-5)
            f.flag(name + ": cross-state block above 1e-5");
        }
      const Matrix dense = eu.hessian(x).densify();
      if ((dense - h_fd).cwiseAbs().maxCoeff() > 1e-4)
        f.flag(name + ": densify vs fd above 1e-4");
    }
  }
  detail = f.failed ? f.detail : "cross-state < 1e-5 abs, densify vs fd < 1e-4";
  return !f.failed;
}

// 5. Quadratic-form decomposition: structured evaluation within
//    1e-10 * (1 + |dense|) of the dense bilinear form on 500 pairs.
bool criterion_quadratic_form(std::string& detail) {
  Failure f;
  const Dimensions dims(2, 3);
  const SampleBox box{0.5, 2.0};
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    SplitMix64 rng(substream_seed(4000, i));
    const std::string name = builtin_family_names()[i % 6];
    const ExpectedUtility eu(builtin_family(name, family_params(name), 2),
                             ProbabilityWeights::make({0.2, 0.3, 0.5}), dims);
    const Vector x = sample_log_uniform(dims.total(), box, rng);
    Vector v(dims.total());
    for (int j = 0; j < dims.total(); ++j) v[j] = rng.uniform(-1.0, 1.0);
    const BlockArrowHessian h = eu.hessian(x);
    const double dense = v.dot(h.densify() * v);
    if (std::abs(h.quadratic_form(v) - dense) > 1e-10 * (1.0 + std::abs(dense)))
      f.flag(name + ": decomposition residual above 1e-10");
    ++checked;
  }
  detail = f.failed ? f.detail : std::to_string(checked) + " random (point, direction) pairs";
  return !f.failed;
}

// 6. Structured vs dense-eigenvalue decisions on 1000 margin-guarded random
//    instances; S-scaling exponents from the bench sweep: structured in
//    [0.8, 1.3], dense in [2.5, 3.5].
bool criterion_nd_agreement_and_scaling(std::string& detail) {
  Failure f;
  long tested = 0;
  for (int i = 0; tested < 1000 && i < 3000; ++i) {
    SplitMix64 rng(substream_seed(5000, i));
    const Dimensions dims(1 + static_cast<int>(rng.next_u64() % 3),
                          1 + static_cast<int>(rng.next_u64() % 6));
    const BlockArrowHessian h =
        random_block_arrow(dims, ArrowInstanceKind::mixed, rng.next_u64());
    const double tol = default_nd_tolerance(h);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.densify(), Eigen::EigenvaluesOnly);
    bool margin_ok = true;
    for (int k = 0; k < es.eigenvalues().size(); ++k)
      if (std::abs(es.eigenvalues()[k] - (-tol)) <= 2.0 * tol) margin_ok = false;
    if (!margin_ok) continue;
    ++tested;
    if (is_negative_definite(h, tol).decision != nd_by_eigenvalues(h.densify(), tol))
      f.flag("decision mismatch on instance " + std::to_string(i));
  }
  if (tested < 1000) f.flag("only " + std::to_string(tested) + " margin-guarded instances");

  BenchConfig bcfg;
  bcfg.seed = 20240811;
  const BenchReport bench = bench_nd(bcfg);
  if (!bench.decisions_agree) f.flag("bench decision disagreement");
  if (bench.structured_exponent < 0.8 || bench.structured_exponent > 1.3)
    f.flag("structured exponent " + std::to_string(bench.structured_exponent));
  if (bench.dense_exponent < 2.5 || bench.dense_exponent > 3.5)
    f.flag("dense exponent " + std::to_string(bench.dense_exponent));

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%ld instances agree; exponents structured %.2f, dense %.2f", tested,
                bench.structured_exponent, bench.dense_exponent);
  detail = f.failed ? f.detail + "; " + buf : buf;
  return !f.failed;
}

// 7. Boundary divergence: log-additive and crra(2) certified divergent on
//    all modes, sqrt-additive certified non-divergent; u and U verdicts
//    agree per family.
bool criterion_boundary_divergence(std::string& detail) {
  Failure f;
  CheckConfig cfg;
  cfg.samples = 48;
  cfg.seed = 20240811;
  const Dimensions dims(1, 2);
  const auto weights = ProbabilityWeights::make({0.25, 0.75});

  auto run_both = [&](const std::string& name) {
    const auto u = builtin_family(name, family_params(name), 1);
    const auto on_u = check_boundary_divergence(
        u.field(), Target::vnm, default_boundary_sequences_pair(1, cfg), cfg);
    const ExpectedUtility eu(u, weights, dims);
    const auto on_eu = check_boundary_divergence(
        eu.as_field(), Target::expected, default_boundary_sequences_g(dims, cfg), cfg);
    return std::make_pair(on_u.verdict, on_eu.verdict);
  };

  for (const std::string name : {"log-additive", "crra"}) {
    const auto [vu, vU] = run_both(name);
    if (vu != Verdict::pass) f.flag(name + ": u not certified divergent");
    if (vU != Verdict::pass) f.flag(name + ": U not certified divergent");
  }
  {
    const auto [vu, vU] = run_both("sqrt-additive");
    if (vu != Verdict::fail) f.flag("sqrt-additive: u not certified non-divergent");
    if (vU != vu) f.flag("sqrt-additive: u and U verdicts differ");
  }
  detail = f.failed ? f.detail
                    : "log-additive, crra(2) divergent on all modes; sqrt-additive "
                      "non-divergent; u == U";
  return !f.failed;
}

// 8. Quasi-concavity chain: linear-plus-log passes the tangent-space
//    condition while failing full ND; its assembled U passes; the transfer
//    to the restriction holds for every family whose U passes; per-state
//    tangent directions give curvature below -1e-12.
bool criterion_quasiconcavity_chain(std::string& detail) {
  Failure f;
  CheckConfig cfg;
  cfg.samples = 48;
  cfg.seed = 20240811;
  const Dimensions dims(1, 2);
  const auto weights = ProbabilityWeights::make({0.25, 0.75});

  const auto lpl = builtin_family("linear-plus-log", {}, 1);
  if (check_diff_strict_quasiconcavity(lpl.field(), Target::vnm, cfg).verdict != Verdict::pass)
    f.flag("linear-plus-log fails the tangent-space condition on u");
  if (check_negative_definiteness(lpl, cfg).verdict != Verdict::fail)
    f.flag("linear-plus-log unexpectedly passes full ND");
  const ExpectedUtility lpl_eu(lpl, weights, dims);
  if (check_diff_strict_quasiconcavity(lpl_eu.as_field(), Target::expected, cfg).verdict !=
      Verdict::pass)
    f.flag("assembled linear-plus-log fails the tangent-space condition");

  int transfers = 0;
  for (const std::string& name : builtin_family_names()) {
    const auto u = builtin_family(name, family_params(name), 1);
    const ExpectedUtility eu(u, weights, dims);
    const auto on_U =
        check_diff_strict_quasiconcavity(eu.as_field(), Target::expected, cfg);
    if (on_U.verdict != Verdict::pass) continue;
    ++transfers;
    const auto transfer = verify_transfer_U_to_u(eu.as_field(), dims, cfg);
    if (transfer.verdict != Verdict::pass)
      f.flag(name + ": transfer to the restriction does not hold");
  }
  if (transfers < 4) f.flag("too few families pass the U-level condition");

  CheckConfig tangent_cfg = cfg;
  tangent_cfg.box = {1e-2, 1e2};
  for (const std::string name : {"log-additive", "crra", "sqrt-additive",
                                  "linear-plus-log"}) {
    const auto u = builtin_family(name, family_params(name), 1);
    const ExpectedUtility eu(u, weights, dims);
    for (int i = 0; i < 50; ++i) {
      SplitMix64 rng(substream_seed(8000, i));
      const Vector x = sample_log_uniform(dims.total(), tangent_cfg.box, rng);
      const Vector v = per_state_tangent_direction(u, weights, dims, x, rng);
      if (!(eu.hessian(x).quadratic_form(v) < -1e-12))
        f.flag(name + ": per-state tangent curvature not below -1e-12");
    }
  }
  detail = f.failed ? f.detail
                    : "u3mw/u3m split, U-level pass, " + std::to_string(transfers) +
                          " transfers, per-state curvature < -1e-12";
  return !f.failed;
}

// 9. Brute-force grid oracle at G <= 3 agrees with the pipeline on all four
//    properties for every family.
bool criterion_brute_force(std::string& detail) {
  Failure f;
  CheckConfig cfg;
  cfg.samples = 48;
  cfg.seed = 20240811;
  BruteForceConfig bcfg;  // 20 points per axis over [1e-2, 1e2]
  for (const std::string& name : builtin_family_names()) {
    for (int s : {1, 2}) {
      const Dimensions dims(1, s);
      const auto u = builtin_family(name, family_params(name), 1);
      const auto weights = ProbabilityWeights::uniform(s);
      const auto brute = brute_force_oracle(u, weights, dims, bcfg);
      const auto on_u = check_all(u, cfg);
      const auto on_eu = check_all(ExpectedUtility(u, weights, dims), cfg);
      const auto discrepancies = compare_brute_force(brute, on_u, on_eu);
      if (!discrepancies.empty())
        f.flag(name + " S=" + std::to_string(s) + ": " + discrepancies.front().detail);
    }
  }
  detail = f.failed ? f.detail : "6 families x S in {1,2}, four properties each";
  return !f.failed;
}

// 10. Determinism: byte-identical JSONL across repeated runs and different
//     thread counts for every seed-driven command; bench decisions and
//     structure identical (timings are wall-clock and exempt).
bool criterion_determinism(std::string& detail) {
  Failure f;
  for (const char* command : {"check", "verify-theorem", "search-qc"}) {
    RunConfig cfg;
    cfg.samples = 24;
    cfg.seed = 97;
    cfg.search_grid = 2;
    cfg.search_points_per_cell = 4;
    cfg.threads = 1;
    const RunResult a = run_command(command, cfg);
    const RunResult b = run_command(command, cfg);
    cfg.threads = 4;
    const RunResult c = run_command(command, cfg);
    if (a.jsonl != b.jsonl) f.flag(std::string(command) + ": rerun differs");
    if (a.jsonl != c.jsonl) f.flag(std::string(command) + ": thread count leaks into output");
  }
  {
    RunConfig cfg;
    cfg.bench_states = {2, 4};
    cfg.bench_commodities = {1};
    cfg.bench_repetitions = 1;
    cfg.threads = 1;
    const RunResult a = run_command("bench", cfg);
    cfg.threads = 4;
    const RunResult b = run_command("bench", cfg);
    auto decisions_of = [](const std::string& jsonl) {
      std::string out;
      size_t pos = 0;
      while ((pos = jsonl.find("\"decision\":", pos)) != std::string::npos) {
        out += jsonl.substr(pos, 24);
        pos += 10;
      }
      return out;
    };
    if (decisions_of(a.jsonl) != decisions_of(b.jsonl))
      f.flag("bench: decisions differ across thread counts");
  }
  detail = f.failed ? f.detail : "check/verify-theorem/search-qc byte-identical; bench "
                                 "decisions stable (timings exempt)";
  return !f.failed;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "theorem consistency sweep", criterion_theorem_sweep},
      {2, "restriction identities", criterion_restriction_identities},
      {3, "gradient formula vs finite differences", criterion_gradient_formula},
      {4, "block-arrow sparsity of the Hessian", criterion_hessian_sparsity},
      {5, "quadratic-form decomposition", criterion_quadratic_form},
      {6, "structured ND agreement and scaling", criterion_nd_agreement_and_scaling},
      {7, "boundary divergence behavior", criterion_boundary_divergence},
      {8, "quasi-concavity chain", criterion_quasiconcavity_chain},
      {9, "brute-force oracle agreement", criterion_brute_force},
      {10, "determinism across runs and threads", criterion_determinism},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion.id,
                criterion.name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures == 0)
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
  else
    std::printf("acceptance: %d criteria FAILED\n", failures);
  return failures;
}
