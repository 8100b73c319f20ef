#include <random>

#include <benchmark/benchmark.h>

#include "discgame/dynamics.hpp"
#include "discgame/embedding.hpp"
#include "discgame/games.hpp"
#include "discgame/perf.hpp"

using namespace discgame;

// Latent step cost should not depend on the original trait dimension.
static void BM_LatentStep(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const ReplicatorSystem sys = perf::latent_system_from_traits(400, d, 2, 0);
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(sys.dim(), 0.1);
  for (auto _ : state) {
    theta = step_implicit_midpoint(sys, theta, 0.01);
    benchmark::DoNotOptimize(theta.data());
  }
}
BENCHMARK(BM_LatentStep)->Arg(3)->Arg(10)->Arg(30)->Arg(100);

static void BM_DirectStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PayoutMatrix f = make_random_lowrank(n, 2, 0);
  const Eigen::VectorXd w0 = Eigen::VectorXd::Constant(n, 1.0 / n);
  for (auto _ : state) {
    const auto traj = direct_replicator(f.entries(), w0, GrowthLaw::Linear, 0.01, 0.01);
    benchmark::DoNotOptimize(traj.weights.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_DirectStep)->RangeMultiplier(2)->Range(100, 1600)->Complexity(benchmark::oNSquared);

static void BM_Embed(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PayoutMatrix f = make_random_lowrank(n, 6, 1);
  for (auto _ : state) {
    const DiscEmbedding e = embed(f);
    benchmark::DoNotOptimize(e.coords.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Embed)->RangeMultiplier(2)->Range(50, 400)->Complexity(benchmark::oNCubed);
BENCHMARK_MAIN();
