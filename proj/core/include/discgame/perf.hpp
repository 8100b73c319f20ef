#ifndef DISCGAME_PERF_HPP
#define DISCGAME_PERF_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "discgame/hamiltonian.hpp"

namespace discgame::perf {

struct BenchRow {
  std::string route;  // "latent" or "direct"
  int trait_dim = 0;  // 0 for the direct route
  int rank = 0;       // 0 for the direct route
  int agents = 0;
  int steps = 0;
  double seconds_per_step = 0.0;
};

struct BenchConfig {
  int particles = 400;
  std::vector<int> trait_dims{3, 30};
  int rank = 2;
  std::vector<int> direct_sizes{100, 200, 400, 800};
  int steps = 200;
  double dt = 0.01;
  std::uint64_t seed = 0;
  int repeats = 3;  // best of
};

/// Random traits in R^d with the bilinear skew game f(x, x') = x^T A x'
/// of rank `rank`; returns the embedded particle system (uniform masses).
ReplicatorSystem latent_system_from_traits(int particles, int trait_dim, int rank, std::uint64_t seed);

/// Per-step cost of the latent implicit-midpoint flow against trait
/// dimension, and of dense RK4 replicator steps against population size.
std::vector<BenchRow> decoupling_bench(const BenchConfig& config);

std::string format_bench_csv(const std::vector<BenchRow>& rows);

}  // namespace discgame::perf

#endif  // DISCGAME_PERF_HPP
