#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/lambert_w.hpp>
#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "discgame/error.hpp"
#include "discgame/hamiltonian.hpp"
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

ReplicatorSystem uniform_square(RateMode mode = RateMode::LinearRate) {
  ProductMarginals p{{{MarginalKind::Uniform, 1.0}, {MarginalKind::Uniform, 1.0}}};
  return ReplicatorSystem(2, p, GrowthLaw::Linear, mode);
}

ReplicatorSystem single_particle() {
  ParticleCloud c{Eigen::MatrixXd(1, 2), Eigen::VectorXd::Ones(1)};
  c.points << 1.0, 0.0;
  return ReplicatorSystem(2, c);
}

Eigen::MatrixXd triangle() {
  Eigen::MatrixXd p(3, 2);
  for (int i = 0; i < 3; ++i) p.row(i) << std::cos(2 * M_PI * i / 3), std::sin(2 * M_PI * i / 3);
  return p;
}

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(1e-300, b.norm());
}

std::vector<ReplicatorSystem> random_systems(std::mt19937_64& rng) {
  std::vector<ReplicatorSystem> out;
  std::uniform_real_distribution<double> mass(0.2, 1.5);
  for (int r : {2, 4}) {
    for (GrowthLaw g : {GrowthLaw::Linear, GrowthLaw::Saturating, GrowthLaw::Allee}) {
      const int m = 12;
      Eigen::VectorXd masses(m);
      for (int i = 0; i < m; ++i) masses(i) = mass(rng);
      out.emplace_back(r, ParticleCloud{oracle::random_points(m, r, rng), masses}, g);
    }
    out.emplace_back(r, ParticleCloud{oracle::random_points(12, r, rng), Eigen::VectorXd::Constant(12, 0.3)},
                     GrowthLaw::Linear, RateMode::ConstantRate);
  }
  ProductMarginals mixed{{{MarginalKind::Uniform, 0.7}, {MarginalKind::Laplace, 1.0},
                          {MarginalKind::Gaussian, 1.0}, {MarginalKind::Uniform, 2.0}}};
  out.emplace_back(4, mixed);
  out.emplace_back(4, mixed, GrowthLaw::Linear, RateMode::ConstantRate);
  return out;
}

}  // namespace

TEST(Hamiltonian, UniformSquareValues) {
  const auto sys = uniform_square();
  EXPECT_NEAR(hamiltonian(sys, Eigen::Vector2d(0, 0)), 1.0, 1e-15);
  const double expect = std::sinh(1.0) * std::sinh(2.0) / 2.0;
  EXPECT_NEAR(hamiltonian(sys, Eigen::Vector2d(1, 2)), expect, 1e-13);
  EXPECT_NEAR(expect, 2.131145, 1e-6);
  EXPECT_NEAR(hamiltonian(sys, Eigen::Vector2d(1e-9, -3e-8)), 1.0, 1e-15);
}

TEST(Hamiltonian, SingleParticle) {
  const auto sys = single_particle();
  for (double t : {-2.0, 0.0, 0.5, 3.0}) {
    EXPECT_NEAR(hamiltonian(sys, Eigen::Vector2d(t, 0)), std::exp(t), 1e-13 * std::exp(t));
    const Eigen::VectorXd g = grad_hamiltonian(sys, Eigen::Vector2d(t, 0));
    EXPECT_NEAR(g(0), std::exp(t), 1e-13 * std::exp(t));
    EXPECT_EQ(g(1), 0.0);
  }
}

TEST(Hamiltonian, OverflowGuardAndDomain) {
  const auto sys = single_particle();
  EXPECT_EQ(code_of([&] { hamiltonian(sys, Eigen::Vector2d(800, 0)); }), Errc::Overflow);
  EXPECT_NEAR(sys.with_rate_mode(RateMode::ConstantRate).hamiltonian(Eigen::Vector2d(800, 0)), 800.0, 1e-12);
  ProductMarginals lap{{{MarginalKind::Laplace, 1.0}, {MarginalKind::Laplace, 1.0}}};
  ReplicatorSystem l(2, lap);
  EXPECT_EQ(code_of([&] { hamiltonian(l, Eigen::Vector2d(1.0, 0)); }), Errc::OutOfDomain);
  EXPECT_NEAR(hamiltonian(l, Eigen::Vector2d(0.5, 0)), 1.0 / 0.75, 1e-15);
}

TEST(Hamiltonian, ConstructionErrors) {
  EXPECT_EQ(code_of([] { ReplicatorSystem(3, ProductMarginals{}); }), Errc::OddRank);
  ParticleCloud c{Eigen::MatrixXd::Ones(2, 2), Eigen::VectorXd::Ones(3)};
  EXPECT_EQ(code_of([&] { ReplicatorSystem(2, c); }), Errc::LengthMismatch);
  ParticleCloud ok{Eigen::MatrixXd::Ones(2, 2), Eigen::VectorXd::Ones(2)};
  EXPECT_EQ(code_of([&] { ReplicatorSystem(2, ok, GrowthLaw::Allee, RateMode::ConstantRate); }), Errc::InvalidArgument);
  ProductMarginals p{{{MarginalKind::Gaussian, 1.0}, {MarginalKind::Gaussian, 1.0}}};
  EXPECT_EQ(code_of([&] { ReplicatorSystem(2, p, GrowthLaw::Saturating); }), Errc::InvalidArgument);
}

TEST(Gradient, SymmetricTriangleIsZero) {
  ReplicatorSystem sys(2, ParticleCloud{triangle(), Eigen::VectorXd::Ones(3)});
  EXPECT_LT(grad_hamiltonian(sys, Eigen::Vector2d::Zero()).norm(), 1e-15);
}

TEST(Gradient, UniformSquareMatchesClosedFormAndDifferences) {
  const auto sys = uniform_square();
  const Eigen::Vector2d th(1.0, 0.0);
  const Eigen::VectorXd g = grad_hamiltonian(sys, th);
  const double p = hamiltonian(sys, th);
  EXPECT_NEAR(g(0), (1.0 / std::tanh(1.0) - 1.0) * p, 1e-14);
  EXPECT_NEAR(g(1), 0.0, 1e-15);
  const Eigen::VectorXd fd = oracle::fd_gradient([&](const Eigen::VectorXd& t) { return sys.hamiltonian(t); }, th, 1e-4);
  EXPECT_LT((g - fd).norm(), 1e-8);
}

TEST(Gradient, FiniteDifferenceConsistency) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  int checked = 0;
  while (checked < 100) {
    for (const auto& sys : random_systems(rng)) {
      Eigen::VectorXd th(sys.dim());
      for (int j = 0; j < sys.dim(); ++j) th(j) = u(rng);
      const Eigen::VectorXd g = sys.gradient(th);
      const Eigen::VectorXd fd = oracle::fd_gradient([&](const Eigen::VectorXd& t) { return sys.hamiltonian(t); }, th, 1e-5);
      EXPECT_LT(rel(g, fd), 1e-6);
      const Eigen::MatrixXd h = sys.hessian(th);
      const Eigen::MatrixXd fdh = oracle::fd_jacobian([&](const Eigen::VectorXd& t) { return sys.gradient(t); }, th, 1e-5);
      EXPECT_LT(rel(h, fdh), 1e-5);
      EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-14 * h.norm());
      ++checked;
    }
  }
}

TEST(Hessian, UnitCircleSecondMoment) {
  const int m = 360;
  Eigen::MatrixXd p(m, 2);
  for (int i = 0; i < m; ++i) p.row(i) << std::cos(2 * M_PI * i / m), std::sin(2 * M_PI * i / m);
  ReplicatorSystem sys(2, ParticleCloud{p, Eigen::VectorXd::Constant(m, 1.0 / m)});
  const Eigen::MatrixXd h = hess_hamiltonian(sys, Eigen::Vector2d::Zero());
  const double total = hamiltonian(sys, Eigen::Vector2d::Zero());
  EXPECT_LT((h - 0.5 * total * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Hessian, PositiveDefiniteOnRandomClouds) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    ReplicatorSystem sys(2, ParticleCloud{oracle::random_points(6, 2, rng), Eigen::VectorXd::Constant(6, 0.5)});
    EXPECT_FALSE(sys.degenerate_support());
    const Eigen::Vector2d th(u(rng), u(rng));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.hessian(th));
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Hessian, DegenerateSupportFlagged) {
  Eigen::MatrixXd p(3, 2);
  p << 1, 1, -2, -2, 0.5, 0.5;
  ReplicatorSystem sys(2, ParticleCloud{p, Eigen::VectorXd::Ones(3)});
  EXPECT_TRUE(sys.degenerate_support());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.hessian(Eigen::Vector2d(0.1, 0.2)));
  EXPECT_LT(es.eigenvalues().minCoeff(), 1e-12);
}

TEST(Hamiltonian, ProductLogGradientSeparates) {
  ProductMarginals p{{{MarginalKind::Uniform, 1.5}, {MarginalKind::Laplace, 1.0}}};
  ReplicatorSystem sys(2, p, GrowthLaw::Linear, RateMode::ConstantRate);
  const Eigen::VectorXd a = sys.gradient(Eigen::Vector2d(0.3, 0.2));
  const Eigen::VectorXd b = sys.gradient(Eigen::Vector2d(0.3, -0.6));
  EXPECT_EQ(a(0), b(0));
  EXPECT_NEAR(a(1), 2 * 0.2 / (1 - 0.04), 1e-15);
  const double lin = ReplicatorSystem(2, p).hamiltonian(Eigen::Vector2d(0.3, 0.2));
  EXPECT_NEAR(lin, std::sinh(0.45) / 0.45 / (1 - 0.04), 1e-14);
}

TEST(Hamiltonian, GeneralizedGrowthMatchesQuadrature) {
  // H for nonlinear growth is sum_i int^{u_i} h^{-1}: compare increments
  // against adaptive Gauss-Kronrod.
  for (GrowthLaw g : {GrowthLaw::Saturating, GrowthLaw::Allee}) {
    Eigen::MatrixXd p(2, 2);
    p << 1.0, 0.0, -0.5, 0.8;
    const Eigen::Vector2d m(0.7, 1.3);
    ReplicatorSystem sys(2, ParticleCloud{p, m}, g);
    const Eigen::Vector2d th(0.9, -0.4);
    double quad = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double u0 = growth_h(g, m(i));
      const double u1 = p.row(i).dot(th) + u0;
      quad += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double u) { return growth_h_inv(g, u); }, u0, u1, 15, 1e-12);
    }
    const double diff = sys.hamiltonian(th) - sys.hamiltonian(Eigen::Vector2d::Zero());
    EXPECT_NEAR(diff, quad, 1e-11);
  }
}

TEST(GrowthLaw, RoundTripAndAnchors) {
  for (GrowthLaw g : {GrowthLaw::Linear, GrowthLaw::Saturating, GrowthLaw::Allee}) {
    for (double u = -30.0; u <= 30.0; u += 0.25) EXPECT_LT(growth_round_trip(g, u), 1e-10) << u;
  }
  EXPECT_NEAR(growth_h_inv(GrowthLaw::Saturating, 0.0), 1.0, 1e-15);
  EXPECT_EQ(growth_h_inv(GrowthLaw::Linear, 0.0), 1.0);
  EXPECT_NEAR(growth_h_inv(GrowthLaw::Allee, 0.0), 1.0, 1e-15);
  double prev = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double v = growth_h_inv(GrowthLaw::Allee, -30.0 + 60.0 * k / 999.0);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(GrowthLaw, SaturatingAgreesWithBoostLambert) {
  for (double u = -20.0; u <= 20.0; u += 0.5) {
    const double ref = boost::math::lambert_w0(std::exp(u + 1.0));
    EXPECT_NEAR(growth_h_inv(GrowthLaw::Saturating, u), ref, 1e-14 * std::max(1.0, ref));
  }
}

TEST(Meta, IdentityMixingDecouples) {
  std::mt19937_64 rng(9);
  ReplicatorSystem a(2, ParticleCloud{oracle::random_points(5, 2, rng), Eigen::VectorXd::Ones(5)});
  ReplicatorSystem b = uniform_square();
  MetaSystem meta({a, b}, Eigen::Matrix2d::Identity());
  Eigen::Vector4d th(0.1, -0.2, 0.3, 0.4);
  const Eigen::VectorXd r = meta_rhs(meta, th);
  EXPECT_EQ(r.head(2), apply_U(a.gradient(th.head(2))));
  EXPECT_EQ(r.tail(2), apply_U(b.gradient(th.tail(2))));
  EXPECT_EQ(meta_hamiltonian(meta, th), a.hamiltonian(th.head(2)) + b.hamiltonian(th.tail(2)));
}

TEST(Meta, KroneckerOperatorIsSkew) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = u(rng);
  }
  const auto s = uniform_square();
  MetaSystem meta({s, s, s}, m);
  const Eigen::MatrixXd k = meta_operator(meta);
  EXPECT_EQ(k.transpose(), -k);
  const Eigen::VectorXd th = Eigen::VectorXd::LinSpaced(6, -0.5, 0.5);
  EXPECT_LT((meta_rhs(meta, th) - k * meta_gradient(meta, th)).norm(), 1e-14);
}

TEST(Meta, SinglePatchIsBitExact) {
  const auto s = uniform_square();
  MetaSystem meta({s}, Eigen::MatrixXd::Ones(1, 1));
  const Eigen::Vector2d th(0.7, -0.3);
  EXPECT_EQ(meta_rhs(meta, th), apply_U(s.gradient(th)));
  EXPECT_EQ(code_of([&] { meta_rhs(meta, Eigen::Vector3d::Zero()); }), Errc::DimensionMismatch);
  Eigen::Matrix2d asym;
  asym << 1, 0.2, 0.3, 1;
  EXPECT_EQ(code_of([&] { MetaSystem({s, s}, asym); }), Errc::NotSymmetric);
}
