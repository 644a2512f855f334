#include <benchmark/benchmark.h>

#include <memory>

#include "rbeig/estimators/estimators.hpp"
#include "rbeig/hifi/hifi_solver.hpp"
#include "rbeig/hifi/sampling.hpp"
#include "rbeig/residual/residual_factors.hpp"
#include "rbeig/rom/basis.hpp"
#include "rbeig/rom/reduced_model.hpp"

using namespace rbeig;

namespace {

// Toy core at full size with a basis of up to 100 HF snapshots. Built
// once and shared by every benchmark.
struct Fixture {
  std::shared_ptr<const AffineOperatorFamily> family;
  std::unique_ptr<HighFidelitySolver> hf;
  ReducedBasis basis;
  ReducedOperators ops;
  ResidualFactorization factors;
  std::vector<ParameterPoint> params;

  Fixture() {
    const CaseGeometry g = toycore_geometry(30);
    family = std::make_shared<const AffineOperatorFamily>(
        assemble_affine_family(build_mesh(g.L, g.cells_per_side, g.partition, g.bc)));
    hf = std::make_unique<HighFidelitySolver>(family, PowerIterationSettings{});
    const auto train = sample_toycore(50, 11);
    std::vector<Vector> snaps;
    for (const auto& mu : train) {
      const EigenSolution s = hf->solve(mu);
      snaps.push_back(s.u);
      snaps.push_back(s.u_star);
    }
    basis = orthonormalize(snaps, family->X);
    ops = ReducedOperators::project(*family, basis.V);
    factors = ResidualFactorization::precompute(*family, basis.V);
    params = sample_toycore(16, 12);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_HighFidelitySolve(benchmark::State& state) {
  const Fixture& f = fixture();
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(f.hf->solve(f.params[i++ % f.params.size()]).k);
}

void BM_ReducedSolve(benchmark::State& state) {
  const Fixture& f = fixture();
  const ReducedOperators ops = f.ops.truncated(std::min<Index>(state.range(0), f.ops.dim()));
  const Matrix V = f.basis.V.leftCols(ops.dim());
  std::size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_reduced(ops, V, f.params[i++ % f.params.size()], PowerIterationSettings{}, false).k_N);
}

void BM_OnlineResidualNorm(benchmark::State& state) {
  const Fixture& f = fixture();
  const Index n = std::min<Index>(state.range(0), f.ops.dim());
  const Vector c = Vector::Ones(n) / std::sqrt(double(n));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(f.factors.online_norm(f.params[i++ % f.params.size()], c, 1.0));
}

void BM_OnlineEstimate(benchmark::State& state) {
  const Fixture& f = fixture();
  std::size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        online_estimate(f.ops, f.factors, f.basis.V, f.params[i++ % f.params.size()], PowerIterationSettings{}).eta_k);
}

}  // namespace

BENCHMARK(BM_HighFidelitySolve)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReducedSolve)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_OnlineResidualNorm)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_OnlineEstimate)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
