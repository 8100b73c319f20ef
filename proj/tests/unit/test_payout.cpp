#include <random>

#include <gtest/gtest.h>

#include "discgame/error.hpp"
#include "discgame/payout.hpp"
#include "oracles.hpp"

using namespace discgame;

namespace {

Eigen::MatrixXd rps() {
  Eigen::MatrixXd m(3, 3);
  m << 0, 1, -1, -1, 0, 1, 1, -1, 0;
  return m;
}

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

TEST(ValidateSkew, ExactSkew) {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, -1, 0;
  const auto r = validate_skew(m, 1e-8);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.max_violation, 0.0);
}

TEST(ValidateSkew, SmallViolation) {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, -0.999, 0;
  const auto r = validate_skew(m, 1e-8);
  EXPECT_FALSE(r.ok);
  EXPECT_NEAR(r.max_violation, 1e-3, 1e-15);
}

TEST(ValidateSkew, RpsByEnumeration) {
  const Eigen::MatrixXd m = rps();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_EQ(m(i, j) + m(j, i), 0.0);
  }
  EXPECT_TRUE(validate_skew(m).ok);
}

TEST(ValidateSkew, Errors) {
  EXPECT_EQ(code_of([] { validate_skew(Eigen::MatrixXd::Zero(2, 3)); }), Errc::NonSquare);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(code_of([&] { validate_skew(m); }), Errc::NonFinite);
}

TEST(PayoutMatrix, DefaultsAndValidation) {
  PayoutMatrix f(rps());
  EXPECT_EQ(f.size(), 3);
  EXPECT_EQ(f.labels()[2], "agent2");
  EXPECT_DOUBLE_EQ(f.weights()(1), 1.0 / 3.0);
  Eigen::MatrixXd bad = rps();
  bad(0, 1) = 2.0;
  EXPECT_EQ(code_of([&] { PayoutMatrix g(bad); }), Errc::NotSkew);
  EXPECT_EQ(code_of([&] { PayoutMatrix g(rps(), {"a", "b"}); }), Errc::LengthMismatch);
  EXPECT_EQ(code_of([&] { PayoutMatrix g(rps(), {}, Eigen::Vector3d(0.5, 0.5, 0.5)); }), Errc::NotDistribution);
}

TEST(PayoutMatrix, ZeroWeightAgentsLeaveSupport) {
  PayoutMatrix f(rps(), {"r", "p", "s"}, Eigen::Vector3d(0.5, 0.5, 0.0));
  EXPECT_TRUE(f.in_support(0));
  EXPECT_FALSE(f.in_support(2));
  EXPECT_EQ(f.support(), (std::vector<int>{0, 1}));
  EXPECT_EQ(f.labels().size(), 3u);
}

TEST(SkewSymmetrize, Examples) {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, -1, 0;
  EXPECT_EQ(skew_symmetrize(m).entries(), m);
  Eigen::MatrixXd raw(2, 2);
  raw << 1, 2, 0, 3;
  EXPECT_EQ(skew_symmetrize(raw).entries(), m);
}

TEST(SkewSymmetrize, IdempotentOnRandom) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(10, 10);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) m(i, j) = normal(rng);
  }
  const Eigen::MatrixXd once = skew_symmetrize(m).entries();
  const Eigen::MatrixXd twice = skew_symmetrize(once).entries();
  EXPECT_EQ(once, twice);
}

TEST(MixedPayout, Examples) {
  PayoutMatrix f(rps());
  const Eigen::Vector3d u = Eigen::Vector3d::Constant(1.0 / 3.0);
  EXPECT_NEAR(mixed_payout(f, u, u), 0.0, 1e-15);
  EXPECT_EQ(mixed_payout(f, Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0)), 1.0);
  EXPECT_EQ(mixed_payout(f, Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(1, 0, 0)), -1.0);
  EXPECT_EQ(code_of([&] { mixed_payout(f, Eigen::Vector2d(0.5, 0.5), u); }), Errc::LengthMismatch);
  EXPECT_EQ(code_of([&] { mixed_payout(f, Eigen::Vector3d(1, 1, 0), u); }), Errc::NotDistribution);
}

TEST(MixedPayout, AntisymmetricOnRandomStrategies) {
  std::mt19937_64 rng(11);
  PayoutMatrix f(oracle::random_skew(8, rng));
  for (int k = 0; k < 100; ++k) {
    const Eigen::VectorXd p = oracle::random_distribution(8, rng, 0.0);
    const Eigen::VectorXd q = oracle::random_distribution(8, rng, 0.0);
    EXPECT_NEAR(mixed_payout(f, p, q), -mixed_payout(f, q, p), 1e-12);
  }
}
