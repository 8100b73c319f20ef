#include "discgame/perf.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

#include "discgame/dynamics.hpp"
#include "discgame/embedding.hpp"
#include "discgame/error.hpp"
#include "discgame/io.hpp"

namespace discgame::perf {

namespace {

Eigen::MatrixXd gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

template <class F>
double best_seconds(int repeats, F&& body) {
  double best = 1e300;
  for (int k = 0; k < std::max(1, repeats); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

ReplicatorSystem latent_system_from_traits(int particles, int trait_dim, int rank, std::uint64_t seed) {
  if (trait_dim < rank) throw Error(Errc::InvalidArgument, "trait dimension must be at least the rank");
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXd x = gaussian_matrix(rng, particles, trait_dim);
  const Eigen::MatrixXd b = gaussian_matrix(rng, trait_dim, rank);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(trait_dim, trait_dim);
  for (int k = 0; k + 1 < rank; k += 2) {
    a += b.col(k) * b.col(k + 1).transpose() - b.col(k + 1) * b.col(k).transpose();
  }
  a /= static_cast<double>(trait_dim);
  Eigen::MatrixXd f = x * a * x.transpose();
  f = 0.5 * (f - f.transpose()).eval();
  const DiscEmbedding e = truncate(embed(PayoutMatrix(f)), rank);
  ParticleCloud cloud{e.coords, Eigen::VectorXd::Constant(particles, 1.0 / particles)};
  return ReplicatorSystem(rank, std::move(cloud), GrowthLaw::Linear, RateMode::LinearRate);
}

std::vector<BenchRow> decoupling_bench(const BenchConfig& config) {
  std::vector<BenchRow> rows;
  for (int d : config.trait_dims) {
    const ReplicatorSystem sys = latent_system_from_traits(config.particles, d, config.rank, config.seed);
    Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(config.rank);
    theta0(0) = 0.5;
    volatile double sink = 0.0;
    const double secs = best_seconds(config.repeats, [&] {
      Eigen::VectorXd th = theta0;
      for (int s = 0; s < config.steps; ++s) th = step_implicit_midpoint(sys, th, config.dt);
      sink = sink + th(0);
    });
    rows.push_back({"latent", d, config.rank, config.particles, config.steps, secs / config.steps});
  }
  for (int n : config.direct_sizes) {
    std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(n));
    Eigen::MatrixXd f = gaussian_matrix(rng, n, n);
    f = 0.5 * (f - f.transpose()).eval();
    const Eigen::VectorXd w0 = Eigen::VectorXd::Constant(n, 1.0 / n);
    const double t_max = config.dt * config.steps;
    const double secs = best_seconds(config.repeats, [&] {
      (void)direct_replicator(f, w0, GrowthLaw::Linear, config.dt, t_max, config.steps);
    });
    rows.push_back({"direct", 0, 0, n, config.steps, secs / config.steps});
  }
  return rows;
}

std::string format_bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "route,trait_dim,rank,agents,steps,seconds_per_step\n";
  for (const auto& r : rows) {
    out << r.route << ',' << r.trait_dim << ',' << r.rank << ',' << r.agents << ',' << r.steps << ','
        << io::format_double(r.seconds_per_step) << '\n';
  }
  return out.str();
}

}  // namespace discgame::perf
