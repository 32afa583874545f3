#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "eukit/assembly.hpp"
#include "eukit/blockarrow.hpp"
#include "eukit/families.hpp"
#include "eukit/rng.hpp"

using namespace eukit;

namespace {

BlockArrowHessian log_additive_arrow_at_ones() {
  const Dimensions dims(1, 2);
  const ExpectedUtility eu(builtin_family("log-additive", {}, 1),
                           ProbabilityWeights::make({0.5, 0.5}), dims);
  Vector x(3);
  x << 1.0, 1.0, 1.0;
  return eu.hessian(x);
}

BlockArrowHessian log_of_sum_arrow_at_ones() {
  const Dimensions dims(1, 2);
  const ExpectedUtility eu(builtin_family("log-of-sum", {}, 1),
                           ProbabilityWeights::make({0.5, 0.5}), dims);
  Vector x(3);
  x << 1.0, 1.0, 1.0;
  return eu.hessian(x);
}

}  // namespace

TEST_CASE("quadratic form frozen values") {
  const BlockArrowHessian h = log_additive_arrow_at_ones();
  Vector e0(3);
  e0 << 1.0, 0.0, 0.0;
  CHECK(h.quadratic_form(e0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(h.quadratic_form(Vector::Zero(3)) == 0.0);
}

TEST_CASE("quadratic form equals the dense bilinear form on random instances") {
  for (int i = 0; i < 500; ++i) {
    SplitMix64 rng(substream_seed(321, i));
    const Dimensions dims(1 + static_cast<int>(rng.next_u64() % 3),
                          1 + static_cast<int>(rng.next_u64() % 4));
    const auto kind = i % 2 == 0 ? ArrowInstanceKind::definite : ArrowInstanceKind::mixed;
    const BlockArrowHessian h = random_block_arrow(dims, kind, rng.next_u64());
    Vector v(dims.total());
    for (int j = 0; j < dims.total(); ++j) v[j] = rng.uniform(-1.0, 1.0);
    const double dense = v.dot(h.densify() * v);
    CHECK(std::abs(h.quadratic_form(v) - dense) <= 1e-10 * (1.0 + std::abs(dense)));
  }
}

TEST_CASE("quadratic form dimension check") {
  const BlockArrowHessian h = log_additive_arrow_at_ones();
  CHECK_THROWS_AS(h.quadratic_form(Vector::Ones(4)), DimensionError);
}

TEST_CASE("densify frozen values and round trip") {
  SUBCASE("log-additive at ones is diag(-1, -1/2, -1/2)") {
    const Matrix d = log_additive_arrow_at_ones().densify();
    Matrix expected = Matrix::Zero(3, 3);
    expected(0, 0) = -1.0;
    expected(1, 1) = -0.5;
    expected(2, 2) = -0.5;
    CHECK((d - expected).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("single state degenerates to a plain 2C x 2C matrix") {
    const Dimensions dims(2, 1);
    const ExpectedUtility eu(builtin_family("crra", {2.0}, 2), ProbabilityWeights::uniform(1),
                             dims);
    const Vector x = sample_point(4, SampleBox{}, 3, 0);
    const Matrix dense = eu.hessian(x).densify();
    const Matrix direct = eu.vnm().hessian(x);  // a_1 = 1
    CHECK((dense - direct).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("from_dense round trip is exact") {
    const BlockArrowHessian h = random_block_arrow(Dimensions(2, 3),
                                                   ArrowInstanceKind::mixed, 55);
    const Matrix dense = h.densify();
    const BlockArrowHessian back = BlockArrowHessian::from_dense(dense, h.dims());
    CHECK((back.densify() - dense).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("from_dense rejects off-pattern matrices") {
    Matrix full = Matrix::Identity(6, 6);
    full(2, 4) = 0.5;  // cross-state entry
    full(4, 2) = 0.5;
    CHECK_THROWS_AS(BlockArrowHessian::from_dense(full, Dimensions(2, 2)), DimensionError);
  }
}

TEST_CASE("negative definiteness frozen decisions") {
  SUBCASE("log-additive at ones is ND") {
    const NdResult r = is_negative_definite(log_additive_arrow_at_ones());
    CHECK(r.decision == Definiteness::negative_definite);
    CHECK(r.witness.size() == 0);
  }
  SUBCASE("the zero matrix is not ND, witness in a state block") {
    const Dimensions dims(1, 2);
    const ExpectedUtility eu(builtin_family("linear", {}, 1),
                             ProbabilityWeights::make({0.5, 0.5}), dims);
    Vector x(3);
    x << 1.0, 1.0, 1.0;
    const NdResult r = is_negative_definite(eu.hessian(x), 0.0);
    CHECK(r.decision == Definiteness::not_negative_definite);
    REQUIRE(r.witness.size() == 3);
    CHECK(r.witness_quadratic_form == doctest::Approx(0.0));
    CHECK(r.witness_quadratic_form >= -1e-15);
  }
  SUBCASE("log-of-sum at ones sits exactly on the boundary: not ND") {
    const NdResult r = is_negative_definite(log_of_sum_arrow_at_ones());
    CHECK(r.decision == Definiteness::not_negative_definite);
    REQUIRE(r.witness.size() == 3);
    // The Schur complement vanishes; the witness direction is the lift
    // (1, -1, -1) up to sign and scale, with zero curvature.
    CHECK(std::abs(r.witness_quadratic_form) <= 1e-12);
    const Vector w = r.witness / r.witness[0];
    CHECK(w[1] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(w[2] == doctest::Approx(-1.0).epsilon(1e-10));
  }
}

TEST_CASE("singular diagonal block with tol 0 reports not-ND with a state witness") {
  const Dimensions dims(1, 2);
  Matrix corner(1, 1), ones(1, 1), zero(1, 1);
  corner << -1.0;
  ones << -1.0;
  zero << 0.0;
  const BlockArrowHessian h(corner, {zero, zero}, {zero, ones}, dims);
  const NdResult r = is_negative_definite(h, 0.0);
  CHECK(r.decision == Definiteness::not_negative_definite);
  CHECK(r.block == 0);  // the singular first state
  CHECK(r.witness_quadratic_form == 0.0);
}

TEST_CASE("structured decision matches the eigenvalue oracle on margin-guarded instances") {
  long tested = 0;
  for (int i = 0; i < 300; ++i) {
    SplitMix64 rng(substream_seed(777, i));
    const Dimensions dims(1 + static_cast<int>(rng.next_u64() % 3),
                          1 + static_cast<int>(rng.next_u64() % 5));
    const BlockArrowHessian h =
        random_block_arrow(dims, ArrowInstanceKind::mixed, rng.next_u64());
    const double tol = default_nd_tolerance(h);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.densify(), Eigen::EigenvaluesOnly);
    bool margin_ok = true;
    for (int k = 0; k < es.eigenvalues().size(); ++k)
      if (std::abs(es.eigenvalues()[k] - (-tol)) <= 2.0 * tol) margin_ok = false;
    if (!margin_ok) continue;
    ++tested;
    const Definiteness oracle = nd_by_eigenvalues(h.densify(), tol);
    const NdResult structured = is_negative_definite(h, tol);
    CHECK(structured.decision == oracle);
  }
  CHECK(tested >= 250);  // the generator produces clear margins by design
}

TEST_CASE("not-ND witnesses satisfy the guaranteed inequality") {
  for (int i = 0; i < 200; ++i) {
    SplitMix64 rng(substream_seed(888, i));
    const Dimensions dims(1 + static_cast<int>(rng.next_u64() % 2),
                          1 + static_cast<int>(rng.next_u64() % 4));
    const BlockArrowHessian h =
        random_block_arrow(dims, ArrowInstanceKind::indefinite, rng.next_u64());
    const double tol = default_nd_tolerance(h);
    const NdResult r = is_negative_definite(h, tol);
    REQUIRE(r.decision == Definiteness::not_negative_definite);
    const double norm2 = r.witness.squaredNorm();
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));  // witnesses are unit vectors
    CHECK(r.witness_quadratic_form >= -tol * norm2);
  }
}

TEST_CASE("badly scaled but strictly definite arrows are still certified") {
  // crra-like curvature spanning 18 decades; equilibration keeps the
  // decision determinate.
  const Dimensions dims(1, 2);
  const ExpectedUtility eu(builtin_family("crra", {2.0}, 1),
                           ProbabilityWeights::make({0.5, 0.5}), dims);
  Vector x(3);
  x << 1e-3, 1.0, 1e3;
  const NdResult r = is_negative_definite(eu.hessian(x));
  CHECK(r.decision == Definiteness::negative_definite);
}

TEST_CASE("constructor validation") {
  const Dimensions dims(2, 2);
  Matrix corner = Matrix::Zero(2, 2);
  Matrix asym(2, 2);
  asym << 1.0, 2.0, 3.0, 4.0;
  std::vector<Matrix> arms = {Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
  std::vector<Matrix> diags = {Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
  CHECK_THROWS_AS(BlockArrowHessian(asym, arms, diags, dims), DomainError);
  CHECK_THROWS_AS(BlockArrowHessian(Matrix::Zero(3, 3), arms, diags, dims), DimensionError);
  std::vector<Matrix> bad_diags = {Matrix::Zero(2, 2), asym};
  CHECK_THROWS_AS(BlockArrowHessian(corner, arms, bad_diags, dims), DomainError);
}
