// discgame: embed payout tables, simulate latent replicator flows, analyze.
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "discgame/analysis.hpp"
#include "discgame/closedform.hpp"
#include "discgame/dynamics.hpp"
#include "discgame/embedding.hpp"
#include "discgame/error.hpp"
#include "discgame/games.hpp"
#include "discgame/io.hpp"
#include "discgame/perf.hpp"

using namespace discgame;

namespace {

struct Options {
  std::string input;
  std::string weights;
  std::string embedding;
  std::string out;
  std::string report;
  std::string weights_out;
  std::string agents_out;
  std::string theta0;
  std::string growth;
  std::string rate_mode;
  int rank = 0;
  double rank_tol = kDefaultRankTol;
  double dt = 0.01;
  double t_max = 10.0;
  int record_every = 1;
  std::uint64_t seed = 0;
  int replicates = 200;
  bool auto_symmetrize = false;
  double divergence = 1e6;
  // closed forms
  std::string curve;
  std::string y0 = "0,1";
  double a = 0.6;
  double rate = 1.0;
  int n = 5;
  std::string ratings = "1,0,-1";
  double hxx = -1.0;
  double sigma0 = 1.0;
  // ipd / bench
  int agents = 20;
  int steps = 200;
};

Eigen::VectorXd parse_list(const std::string& s, const char* what) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Errc::Parse, std::string("cannot parse ") + what + " '" + s + "'");
    }
  }
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    io::write_file(path, text);
  }
}

GrowthLaw growth_of(const std::string& s) {
  if (s == "linear") return GrowthLaw::Linear;
  if (s == "saturating") return GrowthLaw::Saturating;
  if (s == "allee") return GrowthLaw::Allee;
  throw Error(Errc::Parse, "unknown growth law '" + s + "'");
}

RateMode rate_of(const std::string& s) {
  if (s == "linear") return RateMode::LinearRate;
  if (s == "constant") return RateMode::ConstantRate;
  throw Error(Errc::Parse, "unknown rate mode '" + s + "'");
}

PayoutMatrix load_payout(const Options& o) {
  io::RawPayout raw = io::read_payout_csv(o.input);
  Eigen::VectorXd w;
  if (!o.weights.empty()) {
    w = io::read_weights_csv(o.weights);
    if (w.size() > 0 && w.minCoeff() < 0.0) throw Error(Errc::NotDistribution, "weights must be nonnegative");
    const double total = w.sum();
    if (!(total > 0.0)) throw Error(Errc::NotDistribution, "weights must have positive total");
    w /= total;
  }
  if (o.auto_symmetrize) return skew_symmetrize(raw.entries, raw.labels, w);
  return PayoutMatrix(raw.entries, raw.labels, w);
}

io::AnalysisReport analyze_embedding(const DiscEmbedding& e) {
  io::AnalysisReport rep;
  rep.rank = e.rank;
  rep.shares = e.shares;
  std::vector<int> idx;
  for (int i = 0; i < e.size(); ++i) {
    if (e.weights(i) > 0.0) idx.push_back(i);
  }
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(idx.size()), e.rank);
  Eigen::VectorXd masses(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    pts.row(static_cast<Eigen::Index>(k)) = e.coords.row(idx[k]);
    masses(static_cast<Eigen::Index>(k)) = e.weights(idx[k]);
  }
  try {
    rep.origin_interior = origin_in_hull_interior(pts);
  } catch (const Error& err) {
    if (err.code() != Errc::DegeneratePoints) throw;
    rep.origin_interior = false;
  }
  if (rep.origin_interior) {
    ReplicatorSystem sys(e.rank, ParticleCloud{pts, masses});
    rep.equilibrium = find_equilibrium(sys);
    if (rep.equilibrium) rep.frequencies = linearization_frequencies(sys, *rep.equilibrium);
  }
  return rep;
}

int cmd_embed(const Options& o) {
  const PayoutMatrix f = load_payout(o);
  DiscEmbedding e = embed(f, o.rank_tol);
  if (o.rank > 0 && o.rank < e.rank) e = truncate(e, o.rank);
  emit(o.out, io::format_embedding_json(e));
  if (!o.report.empty()) emit(o.report, io::format_report_json(analyze_embedding(e)));
  return 0;
}

int cmd_analyze(const Options& o) {
  DiscEmbedding e = io::parse_embedding_json(io::read_file(o.input));
  if (o.rank > 0 && o.rank < e.rank) e = truncate(e, o.rank);
  emit(o.out, io::format_report_json(analyze_embedding(e)));
  return 0;
}

IntegrateOptions integrate_options(const Options& o) {
  IntegrateOptions opts;
  opts.t_max = o.t_max;
  opts.dt = o.dt;
  opts.record_every = o.record_every;
  opts.divergence_threshold = o.divergence;
  return opts;
}

int cmd_simulate(const Options& o) {
  std::optional<ReplicatorSystem> sys;
  std::optional<Eigen::VectorXd> theta0;
  if (!o.embedding.empty()) {
    const DiscEmbedding e = io::parse_embedding_json(io::read_file(o.embedding));
    Eigen::VectorXd masses = o.weights.empty() ? Eigen::VectorXd(e.weights) : io::read_weights_csv(o.weights);
    if (masses.size() != e.size()) throw Error(Errc::LengthMismatch, "one weight per embedded agent required");
    const GrowthLaw g = o.growth.empty() ? GrowthLaw::Linear : growth_of(o.growth);
    const RateMode m = o.rate_mode.empty() ? RateMode::ConstantRate : rate_of(o.rate_mode);
    sys.emplace(e.rank, ParticleCloud{e.coords, masses}, g, m);
  } else {
    io::SystemSpec spec = io::parse_system_json(io::read_file(o.input));
    theta0 = spec.theta0;
    const GrowthLaw g = o.growth.empty() ? spec.system.growth() : growth_of(o.growth);
    const RateMode m = o.rate_mode.empty() ? spec.system.rate_mode() : rate_of(o.rate_mode);
    sys.emplace(spec.system.dim(), spec.system.base(), g, m);
  }
  if (!o.theta0.empty()) theta0 = parse_list(o.theta0, "--theta0");
  if (!theta0) theta0 = Eigen::VectorXd::Zero(sys->dim());
  const ParameterTrajectory traj = integrate(*sys, *theta0, integrate_options(o));
  emit(o.out, io::format_trajectory_csv(traj));
  if (!o.weights_out.empty()) {
    WeightTrajectory w;
    w.times = traj.times;
    w.weights.resize(traj.size(), sys->cloud().points.rows());
    for (int k = 0; k < traj.size(); ++k) w.weights.row(k) = sys->densities(traj.theta(k)).transpose();
    io::write_file(o.weights_out, io::format_weight_trajectory_csv(w));
  }
  if (traj.status == TrajectoryStatus::Divergent) std::cerr << "trajectory diverged at t = " << traj.times(traj.size() - 1) << "\n";
  return 0;
}

int cmd_simulate_meta(const Options& o) {
  const io::MetaSpec spec = io::parse_meta_json(io::read_file(o.input));
  Eigen::VectorXd theta0 = spec.theta0 ? *spec.theta0 : Eigen::VectorXd::Zero(spec.meta.total_dim());
  if (!o.theta0.empty()) theta0 = parse_list(o.theta0, "--theta0");
  emit(o.out, io::format_trajectory_csv(integrate_meta(spec.meta, theta0, integrate_options(o))));
  return 0;
}

int cmd_direct(const Options& o) {
  const io::RawPayout raw = io::read_payout_csv(o.input);
  const PayoutMatrix f = o.auto_symmetrize ? skew_symmetrize(raw.entries, raw.labels) : PayoutMatrix(raw.entries, raw.labels);
  const Eigen::VectorXd w0 = o.weights.empty() ? Eigen::VectorXd::Constant(f.size(), 1.0 / f.size())
                                               : io::read_weights_csv(o.weights);
  const GrowthLaw g = o.growth.empty() ? GrowthLaw::Linear : growth_of(o.growth);
  emit(o.out, io::format_weight_trajectory_csv(direct_replicator(f, w0, g, o.dt, o.t_max, o.record_every)));
  return 0;
}

int cmd_closedform(const Options& o) {
  io::Table t;
  const long samples = std::max(1L, std::lround(o.t_max / (o.dt * o.record_every)));
  auto time_at = [&](long k) { return o.t_max * static_cast<double>(k) / static_cast<double>(samples); };
  if (o.curve == "self-play") {
    const Eigen::VectorXd y0 = parse_list(o.y0, "--y0");
    if (y0.size() != 2) throw Error(Errc::DimensionMismatch, "--y0 needs two values");
    t.header = {"t", "y_1", "y_2"};
    t.values.resize(samples + 1, 3);
    for (long k = 0; k <= samples; ++k) {
      const Eigen::Vector2d y = closedform::self_play(y0, time_at(k));
      t.values.row(k) << time_at(k), y(0), y(1);
    }
  } else if (o.curve == "fictitious") {
    const Eigen::VectorXd y0 = parse_list(o.y0, "--y0");
    if (y0.size() != 2) throw Error(Errc::DimensionMismatch, "--y0 needs two values");
    t.header = {"t", "y_1", "y_2", "ybar_1", "ybar_2"};
    t.values.resize(samples + 1, 5);
    for (long k = 0; k <= samples; ++k) {
      const auto s = closedform::fictitious_self_play(y0, time_at(k));
      t.values.row(k) << time_at(k), s.agent(0), s.agent(1), s.average(0), s.average(1);
    }
  } else if (o.curve == "sga") {
    Eigen::MatrixXd ys0;
    if (!o.input.empty()) {
      ys0 = io::parse_csv(io::read_file(o.input)).values;
    } else {
      ys0.resize(o.n, 2);
      for (int j = 0; j < o.n; ++j) {
        const double ang = 2.0 * M_PI * j / o.n;
        ys0.row(j) << 1.0 + std::cos(ang), std::sin(ang);
      }
    }
    const auto n = ys0.rows();
    t.header = {"t"};
    for (Eigen::Index j = 1; j <= n; ++j) {
      t.header.push_back("y" + std::to_string(j) + "_1");
      t.header.push_back("y" + std::to_string(j) + "_2");
    }
    t.values.resize(samples + 1, 1 + 2 * n);
    for (long k = 0; k <= samples; ++k) {
      const Eigen::MatrixXd y = closedform::sga_epicycles(ys0, time_at(k));
      t.values(k, 0) = time_at(k);
      for (Eigen::Index j = 0; j < n; ++j) t.values.block(k, 1 + 2 * j, 1, 2) = y.row(j);
    }
  } else if (o.curve == "laplace") {
    t.header = {"t", "theta_1", "theta_2"};
    t.values.resize(samples + 1, 3);
    for (long k = 0; k <= samples; ++k) {
      const Eigen::Vector2d th = closedform::laplace_oscillator(o.a, time_at(k), o.rate);
      t.values.row(k) << time_at(k), th(0), th(1);
    }
  } else if (o.curve == "transitive") {
    const Eigen::VectorXd r = parse_list(o.ratings, "--ratings");
    const Eigen::VectorXd w0 = Eigen::VectorXd::Constant(r.size(), 1.0 / r.size());
    t.header = {"t"};
    for (Eigen::Index j = 1; j <= r.size(); ++j) t.header.push_back("w_" + std::to_string(j));
    t.values.resize(samples + 1, 1 + r.size());
    for (long k = 0; k <= samples; ++k) {
      t.values(k, 0) = time_at(k);
      t.values.row(k).tail(r.size()) = closedform::transitive_density(r, w0, 1.0, time_at(k)).transpose();
    }
  } else if (o.curve == "gaussian") {
    const Eigen::VectorXd m0 = Eigen::VectorXd::Zero(1);
    const Eigen::MatrixXd s0 = Eigen::MatrixXd::Constant(1, 1, o.sigma0);
    const Eigen::MatrixXd h = Eigen::MatrixXd::Constant(1, 1, o.hxx);
    const Eigen::VectorXd g = Eigen::VectorXd::Ones(1);
    t.header = {"t", "mean", "var"};
    t.values.resize(samples + 1, 3);
    for (long k = 0; k <= samples; ++k) {
      const auto mom = closedform::gaussian_quadratic(m0, s0, g, h, Eigen::MatrixXd::Zero(1, 1), time_at(k));
      t.values.row(k) << time_at(k), mom.mean(0), mom.cov(0, 0);
    }
  } else {
    throw Error(Errc::Parse, "unknown closed form '" + o.curve +
                                 "' (self-play, fictitious, sga, laplace, transitive, gaussian)");
  }
  emit(o.out, io::format_csv(t));
  return 0;
}

int cmd_ipd(const Options& o) {
  IpdConfig cfg;
  cfg.replicates = o.replicates;
  const IpdPopulation pop = ipd_population(o.agents, o.seed, cfg);
  emit(o.out, io::format_payout_csv(pop.payout));
  if (!o.agents_out.empty()) io::write_file(o.agents_out, io::format_agents_csv(pop.agents));
  return 0;
}

int cmd_bench(const Options& o) {
  perf::BenchConfig cfg;
  cfg.steps = o.steps;
  cfg.seed = o.seed;
  emit(o.out, perf::format_bench_csv(perf::decoupling_bench(cfg)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disc-game embeddings and latent replicator dynamics"};
  app.require_subcommand(1);
  Options o;

  auto common_out = [&](CLI::App* c) { c->add_option("--out", o.out, "output file (stdout if omitted)"); };
  auto sim_flags = [&](CLI::App* c) {
    c->add_option("--dt", o.dt, "time step")->check(CLI::PositiveNumber);
    c->add_option("--t-max", o.t_max, "final time")->check(CLI::PositiveNumber);
    c->add_option("--record-every", o.record_every, "record every k-th step")->check(CLI::PositiveNumber);
  };

  auto* embed_cmd = app.add_subcommand("embed", "payout CSV -> embedding JSON");
  embed_cmd->add_option("--input", o.input, "payout CSV")->required();
  embed_cmd->add_option("--weights", o.weights, "reference weights CSV");
  embed_cmd->add_option("--rank", o.rank, "truncate to this even rank")->check(CLI::NonNegativeNumber);
  embed_cmd->add_option("--rank-tol", o.rank_tol, "relative frequency cutoff")->check(CLI::PositiveNumber);
  embed_cmd->add_flag("--auto-symmetrize", o.auto_symmetrize, "replace M by (M - M^T)/2");
  embed_cmd->add_option("--report", o.report, "also write the analysis report");
  common_out(embed_cmd);

  auto* sim_cmd = app.add_subcommand("simulate", "latent parameter dynamics -> trajectory CSV");
  sim_cmd->add_option("--input", o.input, "system JSON");
  sim_cmd->add_option("--embedding", o.embedding, "embedding JSON used as a particle cloud");
  sim_cmd->add_option("--weights", o.weights, "initial particle masses (with --embedding)");
  sim_cmd->add_option("--weights-out", o.weights_out, "write particle densities along the trajectory");
  sim_cmd->add_option("--theta0", o.theta0, "initial parameters, comma separated");
  sim_cmd->add_option("--growth", o.growth, "linear|saturating|allee");
  sim_cmd->add_option("--rate-mode", o.rate_mode, "linear|constant");
  sim_cmd->add_option("--divergence", o.divergence, "norm at which a run counts as divergent");
  sim_flags(sim_cmd);
  common_out(sim_cmd);

  auto* meta_cmd = app.add_subcommand("simulate-meta", "metapopulation dynamics -> trajectory CSV");
  meta_cmd->add_option("--input", o.input, "meta system JSON")->required();
  meta_cmd->add_option("--theta0", o.theta0, "stacked initial parameters");
  sim_flags(meta_cmd);
  common_out(meta_cmd);

  auto* direct_cmd = app.add_subcommand("direct", "dense replicator RK4 -> weight trajectory CSV");
  direct_cmd->add_option("--input", o.input, "payout CSV")->required();
  direct_cmd->add_option("--weights", o.weights, "initial weights CSV (uniform if omitted)");
  direct_cmd->add_option("--growth", o.growth, "linear|saturating|allee");
  direct_cmd->add_flag("--auto-symmetrize", o.auto_symmetrize, "replace M by (M - M^T)/2");
  sim_flags(direct_cmd);
  common_out(direct_cmd);

  auto* analyze_cmd = app.add_subcommand("analyze", "embedding JSON -> report JSON");
  analyze_cmd->add_option("--input", o.input, "embedding JSON")->required();
  analyze_cmd->add_option("--rank", o.rank, "truncate before analysis")->check(CLI::NonNegativeNumber);
  common_out(analyze_cmd);

  auto* cf_cmd = app.add_subcommand("closedform", "sample a closed-form solution as CSV");
  cf_cmd->add_option("curve", o.curve, "self-play|fictitious|sga|laplace|transitive|gaussian")->required();
  cf_cmd->add_option("--y0", o.y0, "start point for self-play and fictitious play");
  cf_cmd->add_option("--a", o.a, "Laplace amplitude");
  cf_cmd->add_option("--rate", o.rate, "time rescaling of the Laplace orbit");
  cf_cmd->add_option("--n", o.n, "number of SGA agents")->check(CLI::PositiveNumber);
  cf_cmd->add_option("--input", o.input, "SGA start positions CSV (n x 2)");
  cf_cmd->add_option("--ratings", o.ratings, "transitive ratings");
  cf_cmd->add_option("--hxx", o.hxx, "1-d quadratic curvature");
  cf_cmd->add_option("--sigma0", o.sigma0, "1-d initial variance")->check(CLI::PositiveNumber);
  sim_flags(cf_cmd);
  common_out(cf_cmd);

  auto* ipd_cmd = app.add_subcommand("ipd-gen", "iterated prisoner's dilemma population payout");
  ipd_cmd->add_option("--n", o.agents, "number of agents")->check(CLI::Range(2, 100000));
  ipd_cmd->add_option("--seed", o.seed, "random seed");
  ipd_cmd->add_option("--replicates", o.replicates, "selection runs per pair")->check(CLI::PositiveNumber);
  ipd_cmd->add_option("--agents-out", o.agents_out, "write sampled agents CSV");
  common_out(ipd_cmd);

  auto* bench_cmd = app.add_subcommand("bench", "latent vs direct per-step cost table");
  bench_cmd->add_option("--steps", o.steps, "steps per timing")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", o.seed, "random seed");
  common_out(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*embed_cmd) return cmd_embed(o);
    if (*sim_cmd) {
      if (o.input.empty() == o.embedding.empty()) throw Error(Errc::Parse, "simulate needs exactly one of --input and --embedding");
      return cmd_simulate(o);
    }
    if (*meta_cmd) return cmd_simulate_meta(o);
    if (*direct_cmd) return cmd_direct(o);
    if (*analyze_cmd) return cmd_analyze(o);
    if (*cf_cmd) return cmd_closedform(o);
    if (*ipd_cmd) return cmd_ipd(o);
    if (*bench_cmd) return cmd_bench(o);
  } catch (const Error& e) {
    std::cerr << "discgame: " << e.what() << "\n";
    return is_input_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "discgame: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
