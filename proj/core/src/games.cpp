#include "discgame/games.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>
#include <thread>
#include <tuple>

#include <Eigen/QR>

#include "discgame/error.hpp"

namespace discgame {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t pair_stream(int i, int j) {
  return splitmix64((static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
                    static_cast<std::uint32_t>(j));
}

inline double unit(IpdRng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double react(const IpdAgent& ag, double p, bool opponent_cooperated) {
  const double delta = opponent_cooperated ? 1.0 : -1.0;
  const double g = std::abs(ag.gamma);
  const double sgn = ag.gamma > 0.0 ? 1.0 : (ag.gamma < 0.0 ? -1.0 : 0.0);
  return ag.alpha * p + (1.0 - ag.alpha) * ((1.0 - g) * ag.p_star + g * 0.5 * (1.0 + sgn * delta));
}

struct MatchOutcome {
  double ua = 0.0;
  double ub = 0.0;
  int rounds = 0;
};

inline void score(const IpdConfig& c, bool ca, bool cb, double& ua, double& ub) {
  if (ca && cb) {
    ua += c.payoffs[0];
    ub += c.payoffs[0];
  } else if (!ca && !cb) {
    ua += c.payoffs[1];
    ub += c.payoffs[1];
  } else if (!ca) {
    ua += c.payoffs[2];
    ub += c.payoffs[3];
  } else {
    ua += c.payoffs[3];
    ub += c.payoffs[2];
  }
}

MatchOutcome play(const IpdAgent& a, const IpdAgent& b, const IpdConfig& c, IpdRng& rng) {
  const double cont = 1.0 - 1.0 / c.expected_rounds;
  MatchOutcome out;
  double pa = a.p_star;
  double pb = b.p_star;
  while (true) {
    const bool ca = unit(rng) < pa;
    const bool cb = unit(rng) < pb;
    score(c, ca, cb, out.ua, out.ub);
    ++out.rounds;
    pa = react(a, pa, cb);
    pb = react(b, pb, ca);
    if (!(unit(rng) < cont)) break;
  }
  return out;
}

// Probability that a fixes, from one seeded batch of selection runs.
double fixation_fraction(const IpdAgent& a, const IpdAgent& b, const IpdConfig& c, IpdRng& rng) {
  const int n = c.moran_population;
  const long cap = 10L * n * n;
  const IpdAgent* types[2] = {&a, &b};
  std::vector<std::uint8_t> pop(static_cast<std::size_t>(n));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::vector<double> fit(static_cast<std::size_t>(n));
  std::vector<double> cum(static_cast<std::size_t>(n));
  std::vector<std::uint8_t> next(static_cast<std::size_t>(n));
  double wins = 0.0;
  for (int rep = 0; rep < c.replicates; ++rep) {
    for (int i = 0; i < n; ++i) pop[static_cast<std::size_t>(i)] = i < n / 2 ? 0 : 1;
    bool done = false;
    for (long gen = 0; gen < cap; ++gen) {
      const long count_a = std::count(pop.begin(), pop.end(), std::uint8_t{0});
      if (count_a == n) {
        wins += 1.0;
        done = true;
        break;
      }
      if (count_a == 0) {
        done = true;
        break;
      }
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      for (int k = 0; k + 1 < n; k += 2) {
        const auto x = static_cast<std::size_t>(order[static_cast<std::size_t>(k)]);
        const auto y = static_cast<std::size_t>(order[static_cast<std::size_t>(k + 1)]);
        const MatchOutcome m = play(*types[pop[x]], *types[pop[y]], c, rng);
        const double scale = c.average_fitness ? 1.0 / m.rounds : 1.0;
        fit[x] = m.ua * scale;
        fit[y] = m.ub * scale;
      }
      const double top = *std::max_element(fit.begin(), fit.end());
      double acc = 0.0;
      for (std::size_t i = 0; i < fit.size(); ++i) {
        acc += std::exp(c.softmax_lambda * (fit[i] - top));
        cum[i] = acc;
      }
      for (std::size_t i = 0; i < next.size(); ++i) {
        const double u = unit(rng) * acc;
        auto it = std::upper_bound(cum.begin(), cum.end(), u);
        if (it == cum.end()) --it;
        next[i] = pop[static_cast<std::size_t>(it - cum.begin())];
      }
      pop.swap(next);
    }
    if (!done) wins += 0.5;
  }
  return wins / c.replicates;
}

bool less_agent(const IpdAgent& a, const IpdAgent& b) {
  return std::tie(a.p_star, a.alpha, a.gamma) < std::tie(b.p_star, b.alpha, b.gamma);
}

bool same_agent(const IpdAgent& a, const IpdAgent& b) {
  return a.p_star == b.p_star && a.alpha == b.alpha && a.gamma == b.gamma;
}

double beta_sample(IpdRng& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

}  // namespace

void validate(const IpdAgent& a) {
  if (!(a.p_star >= 0.0 && a.p_star <= 1.0)) throw Error(Errc::InvalidArgument, "p_star must lie in [0, 1]");
  if (!(a.alpha >= 0.0 && a.alpha <= 1.0)) throw Error(Errc::InvalidArgument, "alpha must lie in [0, 1]");
  if (!(a.gamma >= -1.0 && a.gamma <= 1.0)) throw Error(Errc::InvalidArgument, "gamma must lie in [-1, 1]");
}

void validate(const IpdConfig& c) {
  if (!(c.expected_rounds > 1.0)) throw Error(Errc::InvalidArgument, "expected_rounds must exceed 1");
  if (c.moran_population < 2 || c.moran_population % 2 != 0) {
    throw Error(Errc::InvalidArgument, "moran_population must be even and at least 2");
  }
  if (c.replicates < 1) throw Error(Errc::InvalidArgument, "replicates must be at least 1");
  if (!std::isfinite(c.softmax_lambda)) throw Error(Errc::NonFinite, "softmax_lambda must be finite");
  for (double p : c.payoffs) {
    if (!std::isfinite(p)) throw Error(Errc::NonFinite, "payoffs must be finite");
  }
}

std::pair<double, double> ipd_match(const IpdAgent& a, const IpdAgent& b, const IpdConfig& config, IpdRng& rng) {
  const MatchOutcome m = play(a, b, config, rng);
  return {m.ua, m.ub};
}

std::vector<IpdRound> ipd_trace(const IpdAgent& a, const IpdAgent& b, const IpdConfig& config, int rounds,
                                IpdRng& rng) {
  std::vector<IpdRound> out;
  out.reserve(static_cast<std::size_t>(std::max(rounds, 0)));
  double pa = a.p_star;
  double pb = b.p_star;
  double ua = 0.0;
  double ub = 0.0;
  for (int k = 0; k < rounds; ++k) {
    const bool ca = unit(rng) < pa;
    const bool cb = unit(rng) < pb;
    score(config, ca, cb, ua, ub);
    out.push_back({ca, cb, ua, ub});
    pa = react(a, pa, cb);
    pb = react(b, pb, ca);
  }
  return out;
}

double ipd_fixation_payout(const IpdAgent& a, const IpdAgent& b, const IpdConfig& config, std::uint64_t stream) {
  validate(a);
  validate(b);
  validate(config);
  if (same_agent(a, b)) return 0.0;
  const bool swap = less_agent(b, a);
  IpdRng rng(splitmix64(config.seed ^ splitmix64(stream)));
  const double p = swap ? fixation_fraction(b, a, config, rng) : fixation_fraction(a, b, config, rng);
  const double v = 2.0 * (p - 0.5);
  return swap ? -v : v;
}

int worker_threads() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("DISCGAME_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

PayoutMatrix ipd_payout_matrix(const std::vector<IpdAgent>& agents, const IpdConfig& config) {
  validate(config);
  for (const auto& a : agents) validate(a);
  const int n = static_cast<int>(agents.size());
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(std::max(n - 1, 0)) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
  std::atomic<std::size_t> cursor{0};
  auto work = [&]() {
    while (true) {
      const std::size_t k = cursor.fetch_add(1);
      if (k >= pairs.size()) return;
      const auto [i, j] = pairs[k];
      const double v = ipd_fixation_payout(agents[static_cast<std::size_t>(i)], agents[static_cast<std::size_t>(j)],
                                           config, pair_stream(i, j));
      f(i, j) = v;
      f(j, i) = -v;
    }
  };
  const int threads = std::min<int>(worker_threads(), std::max<int>(1, static_cast<int>(pairs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return PayoutMatrix(std::move(f));
}

IpdPopulation ipd_population(int n, std::uint64_t seed, IpdConfig config) {
  if (n < 2) throw Error(Errc::InvalidArgument, "population needs at least two agents");
  config.seed = seed;
  IpdRng rng(splitmix64(seed));
  std::vector<IpdAgent> agents(static_cast<std::size_t>(n));
  for (auto& a : agents) {
    a.p_star = beta_sample(rng, 0.7, 0.7);
    a.alpha = beta_sample(rng, 1.0, 1.0);
    a.gamma = std::clamp(2.0 * (beta_sample(rng, 3.0, 3.0) - 0.5), -1.0, 1.0);
  }
  PayoutMatrix f = ipd_payout_matrix(agents, config);
  return IpdPopulation{std::move(agents), std::move(f)};
}

PayoutMatrix make_normal_form(const Eigen::MatrixXd& f) { return PayoutMatrix(f); }

PayoutMatrix make_transitive(const Eigen::VectorXd& ratings) {
  const auto n = ratings.size();
  if (n == 0) throw Error(Errc::InvalidArgument, "ratings must be nonempty");
  if (!ratings.allFinite()) throw Error(Errc::NonFinite, "ratings must be finite");
  Eigen::MatrixXd f = ratings.replicate(1, n) - ratings.transpose().replicate(n, 1);
  return PayoutMatrix(std::move(f));
}

PayoutMatrix make_quadratic(const Eigen::VectorXd& g, const Eigen::MatrixXd& hxx, const Eigen::MatrixXd& hxx_cross,
                            const Eigen::MatrixXd& grid) {
  const auto d = g.size();
  if (hxx.rows() != d || hxx.cols() != d || hxx_cross.rows() != d || hxx_cross.cols() != d || grid.cols() != d) {
    throw Error(Errc::DimensionMismatch, "quadratic game dimensions disagree");
  }
  if ((hxx - hxx.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw Error(Errc::NotSymmetric, "Hxx must be symmetric");
  if ((hxx_cross + hxx_cross.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(Errc::NotSkew, "Hxx' must be skew-symmetric");
  }
  const auto m = grid.rows();
  Eigen::VectorXd r(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::VectorXd x = grid.row(i).transpose();
    r(i) = g.dot(x) + 0.5 * x.dot(hxx * x);
  }
  Eigen::MatrixXd f = r.replicate(1, m) - r.transpose().replicate(m, 1) + grid * hxx_cross * grid.transpose();
  // The bilinear part is exactly skew in exact arithmetic; enforce it in floating point.
  f = 0.5 * (f - f.transpose()).eval();
  return PayoutMatrix(std::move(f));
}

PayoutMatrix make_random_lowrank(int n, int r, std::uint64_t seed, std::vector<double> omegas) {
  if (r <= 0 || r % 2 != 0) throw Error(Errc::OddRank, "rank must be positive and even");
  if (r > n) throw Error(Errc::RankTooLarge, "rank exceeds the number of agents");
  const int blocks = r / 2;
  if (omegas.empty()) {
    for (int k = 1; k <= blocks; ++k) omegas.push_back(1.0 / k);
  }
  if (static_cast<int>(omegas.size()) != blocks) throw Error(Errc::LengthMismatch, "need one frequency per block");
  std::mt19937_64 rng(splitmix64(seed));
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, r);
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < blocks; ++k) {
    const Eigen::VectorXd u = q.col(2 * k);
    const Eigen::VectorXd v = q.col(2 * k + 1);
    f += (n * omegas[static_cast<std::size_t>(k)]) * (u * v.transpose() - v * u.transpose());
  }
  f = 0.5 * (f - f.transpose()).eval();
  return PayoutMatrix(std::move(f));
}

}  // namespace discgame
