#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "eukit/families.hpp"
#include "eukit/jsonl.hpp"
#include "eukit/properties.hpp"
#include "support/test_oracles.hpp"

using namespace eukit;

namespace {

CheckConfig quick_config(std::uint64_t seed = 7, long samples = 60) {
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

TEST_CASE("monotonicity verdicts") {
  const CheckConfig cfg = quick_config();
  SUBCASE("log-additive passes") {
    const auto u = builtin_family("log-additive", {}, 2);
    const auto r = check_monotonicity(u.field(), Target::vnm, cfg);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.witnesses.empty());
    CHECK(r.seed == cfg.seed);
  }
  SUBCASE("ln x0 - x1 fails on the second component") {
    const auto u = testing::log_minus_linear_oracle();
    const auto r = check_monotonicity(u.field(), Target::vnm, cfg);
    REQUIRE(r.verdict == Verdict::fail);
    REQUIRE(!r.witnesses.empty());
    REQUIRE(r.witnesses[0].direction.has_value());
    CHECK((*r.witnesses[0].direction)[1] == 1.0);  // unit vector marking component 2
    CHECK(r.witnesses[0].residual == -1.0);
  }
  SUBCASE("assembled U from a monotone u passes") {
    const auto eu = assemble(builtin_family("crra", {2.0}, 1), {0.25, 0.75});
    const auto r = check_monotonicity(eu.as_field(), Target::expected, cfg);
    CHECK(r.verdict == Verdict::pass);
  }
}

TEST_CASE("negative definiteness verdicts") {
  const CheckConfig cfg = quick_config();
  SUBCASE("crra gamma=2 passes on u") {
    const auto u = builtin_family("crra", {2.0}, 1);
    CHECK(check_negative_definiteness(u, cfg).verdict == Verdict::pass);
  }
  SUBCASE("log-of-sum fails on u with a zero-curvature witness") {
    const auto u = builtin_family("log-of-sum", {}, 1);
    const auto r = check_negative_definiteness(u, cfg);
    REQUIRE(r.verdict == Verdict::fail);
    REQUIRE(!r.witnesses.empty());
    const Witness& w = r.witnesses[0];
    REQUIRE(w.direction.has_value());
    // Any witness is orthogonal-ish to (1,1): curvature residual ~ 0.
    CHECK(std::abs(w.residual) <= 1e-9);
    const Vector d = *w.direction;
    CHECK(std::abs(d[0] + d[1]) <= 1e-9 * d.cwiseAbs().maxCoeff());
  }
  SUBCASE("assembled U from crra gamma=2 passes via the block-arrow route") {
    const auto eu = assemble(builtin_family("crra", {2.0}, 2), {0.5, 0.5});
    CHECK(check_negative_definiteness(eu, cfg).verdict == Verdict::pass);
  }
  SUBCASE("assembled U from linear fails") {
    const auto eu = assemble(builtin_family("linear", {}, 1), {0.5, 0.5});
    CHECK(check_negative_definiteness(eu, cfg).verdict == Verdict::fail);
  }
}

TEST_CASE("boundary divergence verdicts") {
  CheckConfig cfg = quick_config();
  SUBCASE("log-additive diverges on every default sequence") {
    const auto u = builtin_family("log-additive", {}, 1);
    const auto seqs = default_boundary_sequences_pair(1, cfg);
    const auto r = check_boundary_divergence(u.field(), Target::vnm, seqs, cfg);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.note.find("lower-unboundedness established") != std::string::npos);
  }
  SUBCASE("sqrt-additive converges to finite limits: certified non-divergent") {
    const auto u = builtin_family("sqrt-additive", {}, 1);
    const auto seqs = default_boundary_sequences_pair(1, cfg);
    const auto r = check_boundary_divergence(u.field(), Target::vnm, seqs, cfg);
    REQUIRE(r.verdict == Verdict::fail);
    REQUIRE(!r.witnesses.empty());
    CHECK(r.witnesses[0].residual > 0.0);  // tail min stays positive
    CHECK(r.note.find("not established") != std::string::npos);
  }
  SUBCASE("crra gamma=2 diverges like -n") {
    const auto u = builtin_family("crra", {2.0}, 1);
    const auto seqs = default_boundary_sequences_pair(1, cfg);
    CHECK(check_boundary_divergence(u.field(), Target::vnm, seqs, cfg).verdict ==
          Verdict::pass);
  }
  SUBCASE("log-of-sum fails on single-coordinate sequences only") {
    const auto u = builtin_family("log-of-sum", {}, 1);
    BoundarySequence single{Vector::Ones(2), BoundaryMode::single_coordinate_to_zero, {0}, 60};
    BoundarySequence all{Vector::Ones(2), BoundaryMode::all_coordinates_to_zero, {0, 1}, 60};
    const auto r_single =
        check_boundary_divergence(u.field(), Target::vnm, {single}, cfg);
    CHECK(r_single.verdict == Verdict::fail);
    const auto r_all = check_boundary_divergence(u.field(), Target::vnm, {all}, cfg);
    CHECK(r_all.verdict == Verdict::pass);
  }
}

TEST_CASE("boundary sequence trend analysis") {
  BoundaryConfig bcfg;
  BoundarySequence seq{Vector::Ones(2), BoundaryMode::single_coordinate_to_zero, {0}, 60};
  SUBCASE("logarithmic decay classifies divergent with unit log slope") {
    const auto t = analyze_sequence([](const Vector& x) { return std::log(x[0]); }, seq, bcfg);
    CHECK(t.classification == SequenceClass::divergent);
    CHECK(t.tail_monotone_decreasing);
    CHECK(t.decrement_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.slope_log == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(t.crosses_all_thresholds);
  }
  SUBCASE("power decay to a limit classifies convergent with ratio 1/sqrt(2)") {
    const auto t = analyze_sequence([](const Vector& x) { return 2.0 * std::sqrt(x[0]); },
                                    seq, bcfg);
    CHECK(t.classification == SequenceClass::convergent);
    CHECK(t.decrement_ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));
  }
  SUBCASE("linear divergence doubles its decrements") {
    const auto t = analyze_sequence([](const Vector& x) { return -1.0 / x[0]; }, seq, bcfg);
    CHECK(t.classification == SequenceClass::divergent);
    CHECK(t.decrement_ratio == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("constant values classify convergent") {
    const auto t = analyze_sequence([](const Vector&) { return 5.0; }, seq, bcfg);
    CHECK(t.classification == SequenceClass::convergent);
  }
  SUBCASE("generated points stay strictly positive and follow the 1/n schedule") {
    CHECK(seq.point_at(1)[0] == 1.0);
    CHECK(seq.point_at(60)[0] == doctest::Approx(1.0 / 60.0));
    CHECK(seq.point_at(60)[1] == 1.0);
    CHECK_THROWS_AS(seq.point_at(0), DomainError);
  }
}

TEST_CASE("divergence propagation through the assembly") {
  // Driving one state block moves only that state's term; the others are
  // bit-identical. Driving the x0 block moves every term.
  const auto u = builtin_family("log-additive", {}, 1);
  const auto eu = assemble(u, {0.25, 0.75});
  Vector base(3);
  base << 1.0, 2.0, 3.0;

  BoundarySequence state1{base, BoundaryMode::coordinate_subset, {1}, 60};
  const double untouched = 0.75 * u.value(Vector((Vector(2) << 1.0, 3.0).finished()));
  for (int n : {1, 10, 60}) {
    const Vector x = state1.point_at(n);
    Vector pair(2);
    pair << x[0], x[1];
    const double term1 = 0.25 * u.value(pair);
    CHECK(eu.eval(x) == doctest::Approx(term1 + untouched).epsilon(1e-14));
  }

  BoundarySequence x0_seq{base, BoundaryMode::coordinate_subset, {0}, 60};
  double prev_t1 = 0, prev_t2 = 0;
  for (int n : {1, 10, 60}) {
    const Vector x = x0_seq.point_at(n);
    Vector p1(2), p2(2);
    p1 << x[0], x[1];
    p2 << x[0], x[2];
    const double t1 = u.value(p1), t2 = u.value(p2);
    if (n > 1) {
      CHECK(t1 < prev_t1);  // every per-state term diverges
      CHECK(t2 < prev_t2);
    }
    prev_t1 = t1;
    prev_t2 = t2;
  }
}

TEST_CASE("smoothness proxy verdicts") {
  SUBCASE("analytic builtins pass") {
    const CheckConfig cfg = quick_config(11, 40);
    for (const std::string name : {"log-additive", "crra", "linear", "log-of-sum"}) {
      const std::vector<double> params = name == std::string("crra")
                                             ? std::vector<double>{2.0}
                                             : std::vector<double>{};
      const auto u = builtin_family(name, params, 2);
      const auto r = check_smoothness_proxy(u.field(), Target::vnm, cfg);
      CHECK(r.verdict == Verdict::pass);
      CHECK(r.note.find("proxy") != std::string::npos);
    }
  }
  SUBCASE("constant value passes") {
    const auto u = fd_oracle([](const Vector&) { return 2.5; }, 1, FdSteps::relative_steps());
    const CheckConfig cfg = quick_config(13, 30);
    const auto r = check_smoothness_proxy(u.field(), Target::vnm, cfg);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.note.find("analytic comparison skipped") != std::string::npos);
  }
  SUBCASE("kink in the value is caught by the gradient continuity walk") {
    const auto u = fd_oracle(testing::kink_value, 1, FdSteps::relative_steps());
    CheckConfig cfg = quick_config(3, 40);
    cfg.box = {0.8, 1.25};  // segments straddle the kink at x0 = 1
    cfg.segment_count = 64;
    const auto r = check_smoothness_proxy(u.field(), Target::vnm, cfg);
    CHECK(r.verdict == Verdict::fail);
    REQUIRE(!r.witnesses.empty());
    // The flagged waypoint sits next to the kink hyperplane x0 = 1.
    CHECK(std::abs(r.witnesses[0].point[0] - 1.0) < 0.05);
  }
}

TEST_CASE("check_all aggregates the four properties in order") {
  const CheckConfig cfg = quick_config(5, 40);
  SUBCASE("log-additive: four passes") {
    const auto result = check_all(builtin_family("log-additive", {}, 1), cfg);
    REQUIRE(!result.aborted);
    REQUIRE(result.reports.size() == 4);
    CHECK(result.reports[0].property == Property::smoothness);
    CHECK(result.reports[1].property == Property::monotonicity);
    CHECK(result.reports[2].property == Property::negative_definiteness);
    CHECK(result.reports[3].property == Property::boundary_divergence);
    for (const auto& r : result.reports) CHECK(r.verdict == Verdict::pass);
  }
  SUBCASE("sqrt-additive: only boundary divergence fails") {
    const auto result = check_all(builtin_family("sqrt-additive", {}, 1), cfg);
    REQUIRE(result.reports.size() == 4);
    CHECK(result.reports[0].verdict == Verdict::pass);
    CHECK(result.reports[1].verdict == Verdict::pass);
    CHECK(result.reports[2].verdict == Verdict::pass);
    CHECK(result.reports[3].verdict == Verdict::fail);
  }
  SUBCASE("linear: fails ND, passes monotonicity") {
    const auto result = check_all(builtin_family("linear", {}, 1), cfg);
    REQUIRE(result.reports.size() == 4);
    CHECK(result.reports[1].verdict == Verdict::pass);
    CHECK(result.reports[2].verdict == Verdict::fail);
  }
  SUBCASE("expected-utility target") {
    const auto eu = assemble(builtin_family("log-additive", {}, 1), {0.5, 0.5});
    const auto result = check_all(eu, cfg);
    REQUIRE(result.reports.size() == 4);
    for (const auto& r : result.reports) {
      CHECK(r.verdict == Verdict::pass);
      CHECK(r.target == Target::expected);
    }
  }
}

TEST_CASE("reports are reproducible and thread-count independent") {
  const auto u = builtin_family("log-of-sum", {}, 2);
  CheckConfig cfg = quick_config(123, 50);
  cfg.threads = 1;
  const auto r1 = check_all(u, cfg);
  cfg.threads = 4;
  const auto r2 = check_all(u, cfg);
  REQUIRE(r1.reports.size() == r2.reports.size());
  for (size_t i = 0; i < r1.reports.size(); ++i) {
    const std::string a = to_jsonl_line(report_to_json(r1.reports[i]));
    const std::string b = to_jsonl_line(report_to_json(r2.reports[i]));
    CHECK(a == b);
  }
}

TEST_CASE("report JSONL shape") {
  const auto u = testing::log_minus_linear_oracle();
  const auto r = check_monotonicity(u.field(), Target::vnm, quick_config());
  const OrderedJson j = report_to_json(r);
  CHECK(j.at("property") == "monotonicity");
  CHECK(j.at("target") == "vnm");
  CHECK(j.at("verdict") == "fail");
  CHECK(j.at("samples_used").get<long>() == 60);
  CHECK(j.contains("seed"));
  REQUIRE(!j.at("witnesses").empty());
  const auto& w = j.at("witnesses")[0];
  // 17-significant-digit decimal strings round-trip the doubles.
  const std::string coord = w.at("point")[0].get<std::string>();
  CHECK(coord.find('.') != std::string::npos);
  CHECK(std::stod(coord) == r.witnesses[0].point[0]);
}

TEST_CASE("config validation") {
  const auto u = builtin_family("linear", {}, 1);
  CheckConfig cfg = quick_config();
  cfg.samples = 0;
  CHECK_THROWS_AS(check_monotonicity(u.field(), Target::vnm, cfg), ConfigError);
}

TEST_CASE("report invariants are enforced") {
  PropertyReport r;
  r.property = Property::monotonicity;
  r.target = Target::vnm;
  r.verdict = Verdict::fail;  // fail without witnesses is an internal bug
  CHECK_THROWS_AS(finalize_report(r), std::logic_error);
  r.verdict = Verdict::pass;
  r.witnesses.push_back({Vector::Ones(2), std::nullopt, 0.0});
  CHECK_THROWS_AS(finalize_report(r), std::logic_error);
}

TEST_CASE("oracle failures propagate with the point attached") {
  ScalarField broken(2, [](const Vector&) { return 0.0; },
                     [](const Vector&) -> Vector { throw DomainError("oracle exploded"); },
                     [](const Vector&) { return Matrix(Matrix::Zero(2, 2)); },
                     DerivativeProvenance::analytic);
  try {
    check_monotonicity(broken, Target::vnm, quick_config());
    FAIL("expected a DomainError");
  } catch (const DomainError& e) {
    const std::string what = e.what();
    CHECK(what.find("oracle exploded") != std::string::npos);
    CHECK(what.find("at point") != std::string::npos);
  }
}

TEST_CASE("a checker error aborts check_all with partial results flagged") {
  // The value function itself throws, so the first checker (smoothness,
  // which builds fd shadows from values) aborts the run.
  auto broken_value = [](const Vector&) -> double { throw DomainError("value broke"); };
  VnmOracle broken(1, ScalarField(2, broken_value,
                                  [](const Vector& z) { return Vector(Vector::Ones(z.size())); },
                                  [](const Vector& z) {
                                    return Matrix(Matrix::Zero(z.size(), z.size()));
                                  },
                                  DerivativeProvenance::analytic));
  const auto result = check_all(broken, quick_config(1, 8));
  CHECK(result.aborted);
  CHECK(result.reports.empty());
  CHECK(result.error.find("smoothness") != std::string::npos);
  CHECK(result.error.find("value broke") != std::string::npos);
}
