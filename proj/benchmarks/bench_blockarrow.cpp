// Microbenchmarks for the arrow-of-blocks kernels: quadratic forms and
// definiteness checks, structured against dense.

#include <benchmark/benchmark.h>

#include <Eigen/Cholesky>

#include "eukit/blockarrow.hpp"

namespace {

using eukit::ArrowInstanceKind;
using eukit::BlockArrowHessian;
using eukit::Dimensions;
using eukit::Matrix;
using eukit::Vector;

BlockArrowHessian make_instance(int commodities, int states) {
  return eukit::random_block_arrow(Dimensions(commodities, states),
                                   ArrowInstanceKind::definite, 12345);
}

void BM_QuadraticFormStructured(benchmark::State& state) {
  const auto h = make_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const Vector v = Vector::Ones(h.dims().total());
  for (auto _ : state) benchmark::DoNotOptimize(h.quadratic_form(v));
}
BENCHMARK(BM_QuadraticFormStructured)
    ->Args({1, 16})
    ->Args({4, 16})
    ->Args({4, 64})
    ->Args({16, 64});

void BM_QuadraticFormDense(benchmark::State& state) {
  const auto h = make_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const Matrix dense = h.densify();
  const Vector v = Vector::Ones(h.dims().total());
  for (auto _ : state) benchmark::DoNotOptimize(v.dot(dense * v));
}
BENCHMARK(BM_QuadraticFormDense)->Args({1, 16})->Args({4, 16})->Args({4, 64})->Args({16, 64});

void BM_NdStructured(benchmark::State& state) {
  const auto h = make_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(eukit::is_negative_definite(h).decision);
}
BENCHMARK(BM_NdStructured)->Args({1, 16})->Args({4, 16})->Args({4, 64})->Args({16, 64});

void BM_NdDenseLlt(benchmark::State& state) {
  const auto h = make_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const Matrix dense_neg = -h.densify();
  for (auto _ : state) {
    Eigen::LLT<Matrix> llt(dense_neg);
    benchmark::DoNotOptimize(llt.info());
  }
}
BENCHMARK(BM_NdDenseLlt)->Args({1, 16})->Args({4, 16})->Args({4, 64})->Args({16, 64});

}  // namespace

BENCHMARK_MAIN();
