#ifndef DISCGAME_GAMES_HPP
#define DISCGAME_GAMES_HPP

#include <array>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "discgame/payout.hpp"

namespace discgame {

/// Memory-one iterated prisoner's dilemma policy.
struct IpdAgent {
  double p_star = 0.5;  // innate cooperation preference, [0, 1]
  double alpha = 0.5;   // memory rate, [0, 1]
  double gamma = 0.0;   // reaction, [-1, 1]
};

struct IpdConfig {
  // CC, DD, defector against cooperator, cooperator against defector
  std::array<double, 4> payoffs{0.0, -1.0, 1.0, -2.0};
  double expected_rounds = 50.0;
  int moran_population = 20;
  double softmax_lambda = 1.0;
  int replicates = 200;
  std::uint64_t seed = 0;
  /// Use the per-round average instead of the raw cumulative utility as
  /// fitness in the selection step.
  bool average_fitness = false;
};

/// Throws InvalidArgument on out-of-range fields.
void validate(const IpdAgent& a);
void validate(const IpdConfig& c);

using IpdRng = std::mt19937_64;

struct IpdRound {
  bool a_cooperates;
  bool b_cooperates;
  double cumulative_a;
  double cumulative_b;
};

/// One match with a geometric number of rounds (mean expected_rounds).
std::pair<double, double> ipd_match(const IpdAgent& a, const IpdAgent& b, const IpdConfig& config, IpdRng& rng);

/// A match with a fixed number of rounds, keeping the play history.
std::vector<IpdRound> ipd_trace(const IpdAgent& a, const IpdAgent& b, const IpdConfig& config, int rounds,
                                IpdRng& rng);

/// 2 (p_fix - 1/2) where p_fix is the fraction of `replicates` selection
/// runs (half a, half b at the start) that end with a fixed. Exactly
/// antisymmetric in (a, b); 0 for bit-identical agents. `stream` selects an
/// independent random stream derived from config.seed.
double ipd_fixation_payout(const IpdAgent& a, const IpdAgent& b, const IpdConfig& config,
                           std::uint64_t stream = 0);

struct IpdPopulation {
  std::vector<IpdAgent> agents;
  PayoutMatrix payout;
};

/// n agents with p* ~ Beta(0.7, 0.7), alpha ~ U(0, 1), gamma = 2 (eta - 1/2)
/// with eta ~ Beta(3, 3), and all pairwise fixation payouts. Work is spread
/// over worker threads (capped by DISCGAME_THREADS); the result does not
/// depend on the thread count.
IpdPopulation ipd_population(int n, std::uint64_t seed, IpdConfig config = {});

/// Payouts for given agents, same threading and seeding as ipd_population.
PayoutMatrix ipd_payout_matrix(const std::vector<IpdAgent>& agents, const IpdConfig& config);

/// Worker count: hardware concurrency capped by DISCGAME_THREADS.
int worker_threads();

PayoutMatrix make_normal_form(const Eigen::MatrixXd& f);

/// F_ij = r_i - r_j.
PayoutMatrix make_transitive(const Eigen::VectorXd& ratings);

/// F_ij = r(x_i) - r(x_j) + x_i' Hxx' x_j with r(x) = g.x + x' Hxx x / 2,
/// sampled at the rows of grid. Throws NotSymmetric, NotSkew.
PayoutMatrix make_quadratic(const Eigen::VectorXd& g, const Eigen::MatrixXd& hxx,
                            const Eigen::MatrixXd& hxx_cross, const Eigen::MatrixXd& grid);

/// n sum_k omega_k (u_k v_k' - v_k u_k') with seeded orthonormal u, v, so
/// the uniform-weight embedding has frequencies omega. Default omega_k = 1/k.
PayoutMatrix make_random_lowrank(int n, int r, std::uint64_t seed, std::vector<double> omegas = {});

}  // namespace discgame

#endif  // DISCGAME_GAMES_HPP
