#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eukit/families.hpp"
#include "eukit/quasiconcavity.hpp"

using namespace eukit;

namespace {

CheckConfig quick_config(std::uint64_t seed = 7, long samples = 50) {
  CheckConfig cfg;
  cfg.samples = samples;
  cfg.seed = seed;
  return cfg;
}

ExpectedUtility assemble(const VnmOracle& u, const std::vector<double>& weights) {
  const Dimensions dims(u.commodities(), static_cast<int>(weights.size()));
  return ExpectedUtility(u, ProbabilityWeights::make(weights), dims);
}

}  // namespace

TEST_CASE("tangent basis is orthonormal and orthogonal to the gradient") {
  for (int i = 0; i < 50; ++i) {
    SplitMix64 rng(substream_seed(606, i));
    const int n = 2 + static_cast<int>(rng.next_u64() % 6);
    Vector g(n);
    for (int j = 0; j < n; ++j) g[j] = rng.uniform(-2.0, 2.0);
    if (g.norm() < 1e-6) g[0] = 1.0;
    const Matrix b = tangent_basis(g);
    CHECK(b.cols() == n - 1);
    CHECK((b.transpose() * g).cwiseAbs().maxCoeff() <= 1e-12 * g.norm());
    CHECK((b.transpose() * b - Matrix::Identity(n - 1, n - 1)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK_THROWS_AS(tangent_basis(Vector::Zero(3)), DomainError);
}

TEST_CASE("tangent probe frozen value: linear-plus-log at (1,1)") {
  // g = (1, 1), H = diag(0, -1); the tangent line is spanned by (1, -1)
  // and the projected curvature is exactly -1/2.
  const auto u = builtin_family("linear-plus-log", {}, 1);
  Vector p(2);
  p << 1.0, 1.0;
  const auto probe = TangentSpaceProbe::build(p, u.gradient(p), u.hessian(p));
  CHECK(probe.max_eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(std::abs(probe.max_direction[0] + probe.max_direction[1]) <= 1e-12);
}

TEST_CASE("tangent-space condition verdicts") {
  const CheckConfig cfg = quick_config();
  SUBCASE("linear-plus-log passes while full ND fails") {
    const auto u = builtin_family("linear-plus-log", {}, 1);
    CHECK(check_diff_strict_quasiconcavity(u.field(), Target::vnm, cfg).verdict ==
          Verdict::pass);
    CHECK(check_negative_definiteness(u, cfg).verdict == Verdict::fail);
  }
  SUBCASE("log-additive passes (full ND implies the tangent-restricted condition)") {
    const auto u = builtin_family("log-additive", {}, 2);
    CHECK(check_diff_strict_quasiconcavity(u.field(), Target::vnm, cfg).verdict ==
          Verdict::pass);
  }
  SUBCASE("linear fails with zero curvature") {
    const auto u = builtin_family("linear", {}, 1);
    const auto r = check_diff_strict_quasiconcavity(u.field(), Target::vnm, cfg);
    REQUIRE(r.verdict == Verdict::fail);
    REQUIRE(!r.witnesses.empty());
    CHECK(r.witnesses[0].residual == doctest::Approx(0.0));
  }
}

TEST_CASE("full ND implies the tangent-space condition on every probe") {
  const CheckConfig cfg = quick_config(19, 40);
  for (const std::string name : {"log-additive", "crra", "sqrt-additive"}) {
    const std::vector<double> params = name == std::string("crra") ? std::vector<double>{2.0}
                                                                   : std::vector<double>{};
    const auto u = builtin_family(name, params, 2);
    const auto nd = check_negative_definiteness(u, cfg);
    const auto qc = check_diff_strict_quasiconcavity(u.field(), Target::vnm, cfg);
    REQUIRE(nd.verdict == Verdict::pass);
    CHECK(qc.verdict == Verdict::pass);
  }
}

TEST_CASE("transfer from U to the restriction") {
  const CheckConfig cfg = quick_config(29, 40);
  SUBCASE("log-additive: both levels fully concave") {
    const auto eu = assemble(builtin_family("log-additive", {}, 1), {0.5, 0.5});
    const auto r = verify_transfer_U_to_u(eu.as_field(), eu.dims(), cfg);
    CHECK(r.verdict == Verdict::pass);
  }
  SUBCASE("linear-plus-log: U satisfies the tangent condition, so does the restriction") {
    const auto eu = assemble(builtin_family("linear-plus-log", {}, 1), {0.25, 0.75});
    const auto r = verify_transfer_U_to_u(eu.as_field(), eu.dims(), cfg);
    CHECK(r.verdict == Verdict::pass);
  }
  SUBCASE("linear: precondition fails, reported as indeterminate") {
    const auto eu = assemble(builtin_family("linear", {}, 1), {0.5, 0.5});
    const auto r = verify_transfer_U_to_u(eu.as_field(), eu.dims(), cfg);
    CHECK(r.verdict == Verdict::indeterminate);
    CHECK(r.note.find("precondition-failed") != std::string::npos);
  }
}

TEST_CASE("tangency decomposition") {
  const Dimensions dims(1, 2);
  const auto u = builtin_family("crra", {2.0}, 1);
  const auto weights = ProbabilityWeights::make({0.5, 0.5});
  const ExpectedUtility eu(u, weights, dims);

  SUBCASE("weighted residuals reproduce DU.v on random inputs") {
    for (int i = 0; i < 500; ++i) {
      SplitMix64 rng(substream_seed(909, i));
      const Vector x = sample_log_uniform(3, SampleBox{}, rng);
      Vector v(3);
      for (int j = 0; j < 3; ++j) v[j] = rng.uniform(-1.0, 1.0);
      if (v.norm() == 0.0) v[0] = 1.0;
      const auto d = decompose_tangency(v, x, u, weights, dims);
      const double du_v = eu.gradient(x).dot(v);
      CHECK(std::abs(d.aggregate - du_v) <= 1e-12 * (1.0 + std::abs(du_v)));
    }
  }
  SUBCASE("aggregate-only tangency is flagged as the unresolved regime") {
    Vector x(3);
    x << 1.0, 2.0, 3.0;
    // v0 = 0, state parts chosen so a_1 r_1 + a_2 r_2 = 0 with r_s != 0.
    Vector pair1(2), pair2(2);
    pair1 << 1.0, 2.0;
    pair2 << 1.0, 3.0;
    const double g1 = u.gradient(pair1)[1];
    const double g2 = u.gradient(pair2)[1];
    Vector v(3);
    v << 0.0, 1.0 / g1, -1.0 / g2;
    const auto d = decompose_tangency(v, x, u, weights, dims);
    CHECK(!d.per_state_tangent);
    CHECK(d.unresolved_regime);
    CHECK(std::abs(d.aggregate) <= 1e-12);
    CHECK(std::abs(d.per_state[0] - 1.0) <= 1e-12);
    CHECK(std::abs(d.per_state[1] + 1.0) <= 1e-12);
  }
  SUBCASE("per-state tangent directions always produce strictly negative curvature") {
    CheckConfig cfg = quick_config();
    cfg.box = {1e-2, 1e2};
    for (const std::string name : {"log-additive", "crra", "sqrt-additive",
                                    "linear-plus-log"}) {
      const std::vector<double> params = name == std::string("crra")
                                             ? std::vector<double>{2.0}
                                             : std::vector<double>{};
      const auto fam = builtin_family(name, params, 1);
      const ExpectedUtility feu(fam, weights, dims);
      for (int i = 0; i < 50; ++i) {
        SplitMix64 rng(substream_seed(511, i));
        const Vector x = sample_log_uniform(3, cfg.box, rng);
        const Vector v = per_state_tangent_direction(fam, weights, dims, x, rng);
        const auto d = decompose_tangency(v, x, fam, weights, dims);
        for (int s = 0; s < 2; ++s) CHECK(std::abs(d.per_state[s]) <= 1e-10);
        CHECK(feu.hessian(x).quadratic_form(v) < -1e-12);
      }
    }
  }
}

TEST_CASE("counterexample search") {
  SUBCASE("default families over the standard box produce no candidates") {
    SearchConfig cfg = SearchConfig::with_default_families();
    cfg.tilt_grid = 3;
    cfg.dims_grid = {{1, 2}};
    cfg.weight_vectors = 1;
    cfg.points_per_cell = 8;
    cfg.seed = 77;
    const auto result = search_counterexample(cfg);
    CHECK(result.candidates.empty());
    CHECK(result.cells_total == static_cast<long>(6 + 9));
    CHECK(!result.budget_exhausted);
  }
  SUBCASE("budget exhaustion yields partial results with the flag set") {
    SearchConfig cfg = SearchConfig::with_default_families();
    cfg.tilt_grid = 2;
    cfg.dims_grid = {{1, 2}};
    cfg.budget = 10;
    const auto result = search_counterexample(cfg);
    CHECK(result.budget_exhausted);
    CHECK(result.evaluations_used <= 10);
  }
  SUBCASE("near-flat curvature at extreme coordinates is surfaced and re-verified") {
    // At coordinates ~1e4 the tangent curvature of linear-plus-log sits
    // within the emission tolerance of zero while u itself still certifies
    // cleanly; the machinery must emit and re-verify such candidates.
    SearchConfig cfg;
    cfg.families = {{"linear-plus-log", {}}};
    cfg.tilt_grid = 0;
    cfg.dims_grid = {{1, 2}};
    cfg.weight_vectors = 1;
    cfg.points_per_cell = 12;
    cfg.box = {8e3, 9.5e3};
    cfg.seed = 5;
    const auto result = search_counterexample(cfg);
    REQUIRE(!result.candidates.empty());
    for (const auto& c : result.candidates) {
      CHECK(c.u_certificate < -cfg.emission_tolerance);
      CHECK(c.curvature_value < 0.0);  // near-violations, not violations
      CHECK(c.curvature_value >= -1e-7);
      CHECK(c.gradient_residual <= 1e-10 * (1.0 + c.direction.norm()));
      CHECK(c.family == "linear-plus-log");
    }
  }
}
