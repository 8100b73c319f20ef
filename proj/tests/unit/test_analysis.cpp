#include <cmath>
#include <random>

#include <boost/math/special_functions/ellint_1.hpp>
#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "discgame/analysis.hpp"
#include "discgame/dynamics.hpp"
#include "discgame/embedding.hpp"
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

Eigen::MatrixXd square() {
  Eigen::MatrixXd p(4, 2);
  p << 1, 1, -1, 1, -1, -1, 1, -1;
  return p;
}

Eigen::MatrixXd ring(int m, double radius = 1.0, double phase = 0.0) {
  Eigen::MatrixXd p(m, 2);
  for (int i = 0; i < m; ++i) {
    p.row(i) << radius * std::cos(phase + 2 * M_PI * i / m), radius * std::sin(phase + 2 * M_PI * i / m);
  }
  return p;
}

// min over sampled unit directions d of max_i d . y_i; positive iff the
// origin is interior (up to sampling resolution).
double support_margin(const Eigen::MatrixXd& pts, std::mt19937_64& rng, int samples = 20000) {
  std::normal_distribution<double> n;
  double worst = 1e300;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd d(pts.cols());
    for (Eigen::Index j = 0; j < d.size(); ++j) d(j) = n(rng);
    d.normalize();
    worst = std::min(worst, (pts * d).maxCoeff());
  }
  return worst;
}

IntegrateOptions opts(double t_max, double dt, int record_every = 1) {
  IntegrateOptions o;
  o.t_max = t_max;
  o.dt = dt;
  o.record_every = record_every;
  return o;
}

}  // namespace

TEST(Geometry, ShoelaceAndPolygon) {
  Eigen::MatrixXd tri(3, 2);
  tri << 0, 0, 1, 0, 0, 1;
  EXPECT_DOUBLE_EQ(shoelace_area(tri), 0.5);
  EXPECT_DOUBLE_EQ(shoelace_area(tri.colwise().reverse()), -0.5);
  EXPECT_EQ(code_of([&] { Polygon2D p(tri.colwise().reverse()); }), Errc::InvalidArgument);
  EXPECT_DOUBLE_EQ(Polygon2D(tri).signed_area(), 0.5);
}

TEST(Geometry, ConvexHullDropsInteriorPoints) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  Eigen::MatrixXd pts(24, 2);
  pts.topRows(4) = square();
  for (int i = 4; i < 24; ++i) pts.row(i) << u(rng), u(rng);
  const Polygon2D hull = convex_hull(pts);
  EXPECT_EQ(hull.size(), 4);
  EXPECT_DOUBLE_EQ(hull.signed_area(), 4.0);
  Eigen::MatrixXd line(3, 2);
  line << 0, 0, 1, 1, 2, 2;
  EXPECT_EQ(code_of([&] { convex_hull(line); }), Errc::DegeneratePoints);
}

TEST(OriginInHull, PlanarCases) {
  EXPECT_TRUE(origin_in_hull_interior(ring(3)));
  Eigen::MatrixXd shifted = ring(3, 0.4);
  shifted.col(0).array() += 0.9;
  EXPECT_FALSE(origin_in_hull_interior(shifted));
  Eigen::MatrixXd edge(3, 2);
  edge << -1, 0, 1, 0, 0, 1;  // origin on an edge
  EXPECT_FALSE(origin_in_hull_interior(edge));
  Eigen::MatrixXd line(3, 2);
  line << -1, -1, 1, 1, 2, 2;
  EXPECT_EQ(code_of([&] { origin_in_hull_interior(line); }), Errc::DegeneratePoints);
}

TEST(OriginInHull, RpsEmbedding) {
  Eigen::Matrix3d f;
  f << 0, -1, 1, 1, 0, -1, -1, 1, 0;
  EXPECT_TRUE(origin_in_hull_interior(embed(PayoutMatrix(f)).coords));
}

TEST(OriginInHull, ProductOfSquaresInFourDimensions) {
  auto product = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd p(a.rows() * b.rows(), 4);
    int k = 0;
    for (int i = 0; i < a.rows(); ++i) {
      for (int j = 0; j < b.rows(); ++j) p.row(k++) << a.row(i), b.row(j);
    }
    return p;
  };
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd centred = product(square(), square());
  EXPECT_TRUE(origin_in_hull_interior(centred));
  EXPECT_GT(support_margin(centred, rng), 0.0);
  Eigen::MatrixXd moved = square();
  moved.col(0).array() += 2.0;
  const Eigen::MatrixXd off = product(moved, square());
  EXPECT_FALSE(origin_in_hull_interior(off));
  EXPECT_LT(support_margin(off, rng), 0.0);
}

TEST(OriginInHull, LpAgreesWithDirectionSampling) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> shift(-1.2, 1.2);
  int agree = 0;
  for (int k = 0; k < 30; ++k) {
    Eigen::MatrixXd pts = oracle::random_points(12, 4, rng);
    pts.col(k % 4).array() += shift(rng);
    const double margin = support_margin(pts, rng, 5000);
    if (std::abs(margin) < 0.05) continue;  // too close to call by sampling
    EXPECT_EQ(origin_in_hull_interior(pts), margin > 0.0) << k;
    ++agree;
  }
  EXPECT_GT(agree, 15);
}

TEST(Equilibrium, SymmetricAndProductBases) {
  ReplicatorSystem sym(2, ParticleCloud{ring(5), Eigen::VectorXd::Ones(5)});
  const auto a = find_equilibrium(sym);
  ASSERT_TRUE(a.has_value());
  EXPECT_LT(a->norm(), 1e-12);
  ReplicatorSystem sq(2, ProductMarginals{{{MarginalKind::Uniform, 1.0}, {MarginalKind::Uniform, 1.0}}});
  const auto b = find_equilibrium(sq);
  ASSERT_TRUE(b.has_value());
  EXPECT_LT(b->norm(), 1e-12);
  EXPECT_NEAR(sq.hamiltonian(*b), 1.0, 1e-15);
}

TEST(Equilibrium, ShiftedCloudHasNone) {
  Eigen::MatrixXd p = ring(3, 0.4);
  p.col(0).array() += 0.9;
  EXPECT_FALSE(find_equilibrium(ReplicatorSystem(2, ParticleCloud{p, Eigen::VectorXd::Ones(3)})).has_value());
}

TEST(Equilibrium, DichotomyWithHullTest) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> shift(-1.5, 1.5);
  for (int k = 0; k < 50; ++k) {
    Eigen::MatrixXd p = oracle::random_points(6, 2, rng);
    p.col(0).array() += shift(rng);
    ReplicatorSystem sys(2, ParticleCloud{p, oracle::random_distribution(6, rng)});
    const bool interior = origin_in_hull_interior(p);
    const auto eq = find_equilibrium(sys);
    EXPECT_EQ(eq.has_value(), interior);
    if (eq) EXPECT_LT(sys.gradient(*eq).norm(), 1e-9 * sys.hamiltonian(*eq));
  }
}

TEST(InvertCentroid, RoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ReplicatorSystem sys(2, ParticleCloud{oracle::random_points(10, 2, rng), Eigen::VectorXd::Ones(10)});
  EXPECT_LT(invert_centroid(sys, sys.gradient(Eigen::Vector2d::Zero())).norm(), 1e-10);
  ReplicatorSystem sys4(4, ParticleCloud{oracle::random_points(16, 4, rng), Eigen::VectorXd::Constant(16, 0.1)},
                        GrowthLaw::Linear, RateMode::ConstantRate);
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd th(4);
    for (int j = 0; j < 4; ++j) th(j) = u(rng);
    th *= 3.0 * std::abs(u(rng)) / th.norm();
    const Eigen::VectorXd back = invert_centroid(sys4, sys4.gradient(th));
    EXPECT_LT((back - th).norm(), 1e-8 * std::max(1.0, th.norm()));
  }
}

TEST(InvertCentroid, BoundaryTargetUnattainable) {
  ReplicatorSystem sys(2, ParticleCloud{square(), Eigen::VectorXd::Constant(4, 0.25)}, GrowthLaw::Linear,
                       RateMode::ConstantRate);
  EXPECT_EQ(code_of([&] { invert_centroid(sys, Eigen::Vector2d(1.0, 0.0)); }), Errc::Unattainable);
  EXPECT_EQ(code_of([&] { invert_centroid(sys, Eigen::Vector2d(1.5, 0.0)); }), Errc::Unattainable);
}

TEST(Linearization, CircleCloudFrequencyAndPeriod) {
  const int m = 240;
  ReplicatorSystem sys(2, ParticleCloud{ring(m, 1.3), Eigen::VectorXd::Constant(m, 1.0 / m)});
  const auto freqs = linearization_frequencies(sys, Eigen::Vector2d::Zero());
  ASSERT_EQ(freqs.size(), 1u);
  EXPECT_NEAR(freqs[0], 0.5 * 1.3 * 1.3, 1e-12);  // second moment
  const auto traj = integrate(sys, Eigen::Vector2d(0.01, 0.0), opts(40.0, 0.005, 1));
  const auto period = period_estimate(traj, Eigen::Vector2d::Zero());
  ASSERT_TRUE(period.has_value());
  EXPECT_NEAR(*period, 2 * M_PI / freqs[0], 0.01 * 2 * M_PI / freqs[0]);
}

TEST(Linearization, PurelyImaginarySpectrum) {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 50; ++k) {
    Eigen::MatrixXd p = oracle::random_points(10, 4, rng);
    p.rowwise() -= p.colwise().mean();
    ReplicatorSystem sys(4, ParticleCloud{p, Eigen::VectorXd::Constant(10, 0.1)});
    const auto eq = find_equilibrium(sys);
    ASSERT_TRUE(eq.has_value());
    const Eigen::MatrixXd j = rotation_U(4) * sys.hessian(*eq);
    Eigen::EigenSolver<Eigen::MatrixXd> es(j, false);
    const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
    EXPECT_LT(es.eigenvalues().real().cwiseAbs().maxCoeff(), 1e-8 * radius);
    const auto freqs = linearization_frequencies(sys, *eq);
    ASSERT_EQ(freqs.size(), 2u);
    EXPECT_GE(freqs[0], freqs[1]);
    EXPECT_GT(freqs[1], 0.0);
  }
}

TEST(Linearization, RejectsNonEquilibrium) {
  ReplicatorSystem sys(2, ParticleCloud{ring(3), Eigen::VectorXd::Ones(3)});
  EXPECT_EQ(code_of([&] { linearization_frequencies(sys, Eigen::Vector2d(0.5, 0.0)); }), Errc::NotEquilibrium);
}

TEST(Dual, SquareToDiamondAndBack) {
  const Polygon2D d = dual_polygon(Polygon2D(square()));
  ASSERT_EQ(d.size(), 4);
  EXPECT_NEAR(d.signed_area(), 2.0, 1e-14);
  for (int j = 0; j < 4; ++j) {
    const Eigen::Vector2d v = d.vertex(j);
    EXPECT_NEAR(v.cwiseAbs().sum(), 1.0, 1e-14);
    EXPECT_NEAR(v.cwiseAbs().minCoeff(), 0.0, 1e-14);
  }
  const Polygon2D back = dual_polygon(d);
  for (int j = 0; j < 4; ++j) {
    double best = 1e300;
    for (int i = 0; i < 4; ++i) best = std::min(best, (back.vertex(j) - Eigen::Vector2d(square().row(i))).norm());
    EXPECT_LT(best, 1e-10);
  }
}

TEST(Dual, RegularPentagon) {
  const Polygon2D p(ring(5, 2.0));
  const Polygon2D d = dual_polygon(p);
  const double apothem = 2.0 * std::cos(M_PI / 5);
  for (int j = 0; j < 5; ++j) {
    EXPECT_NEAR(d.vertex(j).norm(), 1.0 / apothem, 1e-14);
    const double ang = std::atan2(d.vertex(j)(1), d.vertex(j)(0));
    const double steps = (ang - M_PI / 5) / (2 * M_PI / 5);
    EXPECT_NEAR(steps, std::round(steps), 1e-12);
  }
  Eigen::MatrixXd off = ring(5);
  off.col(0).array() += 3.0;
  EXPECT_EQ(code_of([&] { dual_polygon(Polygon2D(off)); }), Errc::OriginNotInterior);
}

TEST(Curl, SignConventionAndDegenerateCycles) {
  Eigen::MatrixXd tri(3, 2);
  tri << 0, 0, 1, 0, 0, 1;
  EXPECT_DOUBLE_EQ(curl_cycle(tri), -1.0);
  EXPECT_DOUBLE_EQ(curl_cycle(tri.colwise().reverse()), 1.0);
  Eigen::MatrixXd back(3, 2);
  back << 0.3, 0.7, -1.1, 0.2, 0.3, 0.7;
  EXPECT_NEAR(curl_cycle(back), 0.0, 1e-15);
  Eigen::MatrixXd line(4, 2);
  line << 0, 0, 1, 2, 2, 4, -1, -2;
  EXPECT_NEAR(curl_cycle(line), 0.0, 1e-15);
  EXPECT_THROW(curl_cycle(tri.topRows(2)), Error);
}

TEST(Curl, EqualsReconstructedCycleSum) {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd f = oracle::random_skew(6, rng);
  const DiscEmbedding e = truncate(embed(PayoutMatrix(f)), 2);
  Eigen::MatrixXd cycle = e.coords.leftCols(2);
  double sum = 0.0;
  for (int j = 0; j < 6; ++j) sum += reconstruct(e, (j + 1) % 6, j);
  EXPECT_NEAR(curl_cycle(cycle), sum, 1e-12);
}

TEST(Boundary, Distances) {
  const Polygon2D sq(square());
  EXPECT_NEAR(boundary_proximity(sq, Eigen::Vector2d(1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(boundary_proximity(sq, Eigen::Vector2d(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(boundary_proximity(sq, Eigen::Vector2d(2, 0)), -1.0, 1e-15);
  EXPECT_NEAR(boundary_proximity(square(), Eigen::Vector2d(0.5, 0)), 0.5, 1e-15);
}

TEST(Boundary, Hausdorff) {
  const Polygon2D d = dual_polygon(Polygon2D(square()));
  Eigen::MatrixXd on(400, 2);
  for (int k = 0; k < 400; ++k) {
    const double s = 4.0 * k / 400;
    const int edge = static_cast<int>(s);
    on.row(k) = (1 - (s - edge)) * d.vertices.row(edge) + (s - edge) * d.vertices.row((edge + 1) % 4);
  }
  EXPECT_LT(hausdorff_to_polygon(on, d), 0.01);
  EXPECT_NEAR(hausdorff_to_polygon(1.1 * on, d), 0.1, 0.01);
}

TEST(Period, RotationallySymmetricBase) {
  const int m = 720;
  ReplicatorSystem sys(2, ParticleCloud{ring(m), Eigen::VectorXd::Constant(m, 1.0 / m)});
  const Eigen::Vector2d th0(2.0, 0.0);
  const double expect = 2 * M_PI * th0.norm() / sys.gradient(th0).norm();
  const auto traj = integrate(sys, th0, opts(3 * expect, 0.002, 1));
  const auto period = period_estimate(traj, Eigen::Vector2d::Zero());
  ASSERT_TRUE(period.has_value());
  EXPECT_NEAR(*period, expect, 0.01 * expect);
}

TEST(Period, LaplaceBase) {
  ReplicatorSystem sys(2, ProductMarginals{{{MarginalKind::Laplace, 1.0}, {MarginalKind::Laplace, 1.0}}},
                       GrowthLaw::Linear, RateMode::ConstantRate);
  const double a = 0.6;
  const double expect = 2 * (1 - a * a) * boost::math::ellint_1(a);
  const auto traj = integrate(sys, Eigen::Vector2d(0.0, a), opts(3.5 * expect, 1e-3, 1));
  const auto period = period_estimate(traj, Eigen::Vector2d::Zero());
  ASSERT_TRUE(period.has_value());
  EXPECT_NEAR(*period, expect, 1e-3 * expect);
}

TEST(Period, DivergentHasNone) {
  Eigen::MatrixXd p = ring(3, 0.4);
  p.col(0).array() += 0.9;
  ReplicatorSystem sys(2, ParticleCloud{p, Eigen::VectorXd::Ones(3)}, GrowthLaw::Linear, RateMode::ConstantRate);
  auto o = opts(500.0, 0.01, 10);
  o.divergence_threshold = 100.0;
  const auto traj = integrate(sys, Eigen::Vector2d(0.1, 0.0), o);
  EXPECT_FALSE(period_estimate(traj, Eigen::Vector2d::Zero()).has_value());
}
