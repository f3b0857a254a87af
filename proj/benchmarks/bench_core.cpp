#include <benchmark/benchmark.h>

#include "ivdae/expm.hpp"
#include "ivdae/ivchain.hpp"
#include "ivdae/pencil.hpp"
#include "ivdae/rng.hpp"

using namespace ivdae;

namespace {

Matrix gaussian(Index n, CounterRng& rng) {
  Matrix m(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) m(i, j) = rng.normal();
  return m;
}

// Orthogonally rotated (blockdiag(I, N_b), blockdiag(J, I)) with one nilpotent block of size b.
Pencil pencil_with_block(Index n, Index b) {
  CounterRng rng(42);
  Matrix e0 = Matrix::Identity(n, n);
  Matrix a0 = Matrix::Identity(n, n);
  a0.topLeftCorner(n - b, n - b) += 0.1 * gaussian(n - b, rng);
  for (Index i = n - b; i < n; ++i) {
    e0(i, i) = 0.0;
    if (i + 1 < n) e0(i, i + 1) = 1.0;
  }
  const Eigen::HouseholderQR<Matrix> p(gaussian(n, rng)), q(gaussian(n, rng));
  const Matrix pm = p.householderQ() * Matrix::Identity(n, n);
  const Matrix qm = q.householderQ() * Matrix::Identity(n, n);
  return Pencil(pm * e0 * qm, pm * a0 * qm);
}

void BM_ComputeChain(benchmark::State& state) {
  const Pencil p = pencil_with_block(state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(compute_chain(p));
}
BENCHMARK(BM_ComputeChain)->Arg(10)->Arg(20)->Arg(40);

void BM_IndexByNilpotency(benchmark::State& state) {
  const Pencil p = pencil_with_block(state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(index_by_nilpotency(p));
}
BENCHMARK(BM_IndexByNilpotency)->Arg(10)->Arg(20)->Arg(40);

void BM_IndexByGrowth(benchmark::State& state) {
  const Pencil p = pencil_with_block(state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(index_by_growth(p));
}
BENCHMARK(BM_IndexByGrowth)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Expm(benchmark::State& state) {
  CounterRng rng(7);
  const Matrix a = gaussian(state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(expm(a));
}
BENCHMARK(BM_Expm)->Arg(10)->Arg(40)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
