#include <random>

#include <gtest/gtest.h>

#include "discgame/embedding.hpp"
#include "discgame/error.hpp"
#include "discgame/games.hpp"
#include "discgame/io.hpp"
#include "oracles.hpp"

using namespace discgame;

namespace {

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected discgame::Error";
  return Errc::InvalidArgument;
}

}  // namespace

TEST(Csv, FixtureParses) {
  const io::RawPayout raw = io::read_payout_csv(std::string(DISCGAME_FIXTURE_DIR) + "/rps.csv");
  ASSERT_EQ(raw.entries.rows(), 3);
  EXPECT_EQ(raw.labels, (std::vector<std::string>{"rock", "paper", "scissors"}));
  EXPECT_EQ(raw.entries(0, 1), -1.0);
}

TEST(Csv, HeaderlessAndErrors) {
  const io::RawPayout raw = io::parse_payout_csv("0,2\n-2,0\n");
  EXPECT_TRUE(raw.labels.empty());
  EXPECT_EQ(raw.entries(0, 1), 2.0);
  EXPECT_EQ(code_of([] { io::parse_payout_csv("0,1\n-1\n"); }), Errc::Parse);
  EXPECT_EQ(code_of([] { io::parse_payout_csv("0,1\n-1,x\n"); }), Errc::Parse);
  EXPECT_EQ(code_of([] { io::read_file("/nonexistent/discgame.csv"); }), Errc::Parse);
}

TEST(Csv, DoublesRoundTripExactly) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd f = oracle::random_skew(7, rng);
  const PayoutMatrix p(f);
  const io::RawPayout back = io::parse_payout_csv(io::format_payout_csv(p));
  EXPECT_EQ(back.entries, f);
  const Eigen::VectorXd w = oracle::random_distribution(7, rng);
  EXPECT_EQ(io::parse_weights_csv(io::format_weights_csv(w)), w);
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
}

TEST(Json, EmbeddingRoundTrip) {
  std::mt19937_64 rng(2);
  const PayoutMatrix f(oracle::random_skew(6, rng), {}, oracle::random_distribution(6, rng));
  const DiscEmbedding e = embed(f);
  const std::string text = io::format_embedding_json(e);
  const DiscEmbedding back = io::parse_embedding_json(text);
  EXPECT_EQ(back.rank, e.rank);
  EXPECT_EQ(back.omegas, e.omegas);
  EXPECT_EQ(back.coords, e.coords);
  EXPECT_EQ(back.weights, e.weights);
  EXPECT_EQ(back.shares, e.shares);
  EXPECT_EQ(back.residual, e.residual);
  EXPECT_EQ(io::format_embedding_json(back), text);
}

TEST(Json, SystemRoundTrip) {
  std::mt19937_64 rng(3);
  ReplicatorSystem cloud(2, ParticleCloud{oracle::random_points(5, 2, rng), Eigen::VectorXd::Constant(5, 0.2)},
                         GrowthLaw::Allee);
  const std::string text = io::format_system_json(cloud, Eigen::VectorXd(Eigen::Vector2d(0.5, -0.25)));
  const io::SystemSpec spec = io::parse_system_json(text);
  EXPECT_EQ(spec.system.cloud().points, cloud.cloud().points);
  EXPECT_EQ(spec.system.growth(), GrowthLaw::Allee);
  ASSERT_TRUE(spec.theta0.has_value());
  EXPECT_EQ((*spec.theta0)(1), -0.25);
  EXPECT_EQ(io::format_system_json(spec.system, spec.theta0), text);

  ReplicatorSystem prod(2, ProductMarginals{{{MarginalKind::Uniform, 0.5}, {MarginalKind::Laplace, 1.0}}},
                        GrowthLaw::Linear, RateMode::ConstantRate);
  const io::SystemSpec p = io::parse_system_json(io::format_system_json(prod));
  EXPECT_FALSE(p.system.is_cloud());
  EXPECT_EQ(p.system.rate_mode(), RateMode::ConstantRate);
  EXPECT_EQ(p.system.hamiltonian(Eigen::Vector2d(0.2, 0.3)), prod.hamiltonian(Eigen::Vector2d(0.2, 0.3)));
  EXPECT_EQ(code_of([] { io::parse_system_json("{\"r\": 2, \"base\": {}}"); }), Errc::Parse);
  EXPECT_EQ(code_of([] { io::parse_system_json("not json"); }), Errc::Parse);
}

TEST(Json, MetaParses) {
  const std::string text = R"({"patches": [
      {"r": 2, "base": {"marginals": [{"kind": "uniform", "half_width": 1}, {"kind": "uniform", "half_width": 1}]}},
      {"r": 2, "base": {"marginals": [{"kind": "gaussian"}, {"kind": "gaussian"}]}}],
    "mixing": [[1, 0.2], [0.2, 1]], "theta0": [0.1, 0.2, 0.3, 0.4]})";
  const io::MetaSpec spec = io::parse_meta_json(text);
  EXPECT_EQ(spec.meta.patches(), 2);
  EXPECT_EQ(spec.meta.mixing()(0, 1), 0.2);
  ASSERT_TRUE(spec.theta0.has_value());
  EXPECT_EQ(spec.theta0->size(), 4);
}

TEST(Csv, TrajectoryRoundTrip) {
  ParameterTrajectory t;
  t.times = Eigen::Vector3d(0.0, 0.1, 0.2);
  t.thetas = Eigen::MatrixXd::Random(3, 2);
  t.centroids = Eigen::MatrixXd::Random(3, 2);
  t.hamiltonians = Eigen::Vector3d(1.0, 1.0 + 1e-15, 1.0 / 3.0);
  const std::string text = io::format_trajectory_csv(t);
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,theta_1,theta_2,ybar_1,ybar_2,H");
  const ParameterTrajectory back = io::parse_trajectory_csv(text);
  EXPECT_EQ(back.times, t.times);
  EXPECT_EQ(back.thetas, t.thetas);
  EXPECT_EQ(back.centroids, t.centroids);
  EXPECT_EQ(back.hamiltonians, t.hamiltonians);
}

TEST(Json, ReportRoundTrip) {
  io::AnalysisReport r;
  r.rank = 2;
  r.shares = {1.0};
  r.origin_interior = true;
  r.equilibrium = Eigen::VectorXd(Eigen::Vector2d(0.0, 1e-17));
  r.frequencies = {0.5773502691896258};
  const std::string text = io::format_report_json(r);
  const io::AnalysisReport back = io::parse_report_json(text);
  EXPECT_EQ(back.rank, 2);
  EXPECT_EQ(back.frequencies, r.frequencies);
  ASSERT_TRUE(back.equilibrium.has_value());
  EXPECT_EQ(*back.equilibrium, *r.equilibrium);
  r.equilibrium.reset();
  EXPECT_NE(io::format_report_json(r).find("\"equilibrium\": null"), std::string::npos);
  EXPECT_FALSE(io::parse_report_json(io::format_report_json(r)).equilibrium.has_value());
}

TEST(Csv, AgentsRoundTrip) {
  const IpdPopulation pop = ipd_population(6, 4, [] {
    IpdConfig c;
    c.replicates = 4;
    return c;
  }());
  const auto back = io::parse_agents_csv(io::format_agents_csv(pop.agents));
  ASSERT_EQ(back.size(), pop.agents.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].p_star, pop.agents[i].p_star);
    EXPECT_EQ(back[i].alpha, pop.agents[i].alpha);
    EXPECT_EQ(back[i].gamma, pop.agents[i].gamma);
  }
}
