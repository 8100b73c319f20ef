#ifndef DISCGAME_DYNAMICS_HPP
#define DISCGAME_DYNAMICS_HPP

#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "discgame/embedding.hpp"
#include "discgame/hamiltonian.hpp"
#include "discgame/payout.hpp"

namespace discgame {

enum class TrajectoryStatus { Completed, Divergent };

/// Recorded integration output. Row k of thetas / centroids belongs to
/// times[k]; centroids hold grad H (the unnormalized embedded centroid in
/// LinearRate mode, the normalized one in ConstantRate mode).
struct ParameterTrajectory {
  Eigen::VectorXd times;
  Eigen::MatrixXd thetas;
  Eigen::VectorXd hamiltonians;
  Eigen::MatrixXd centroids;
  TrajectoryStatus status = TrajectoryStatus::Completed;
  int halvings = 0;  // total dt halvings performed by the step controller

  int size() const { return static_cast<int>(times.size()); }
  Eigen::VectorXd theta(int k) const { return thetas.row(k).transpose(); }
  /// max_k |H_k - H_0| / |H_0|
  double max_relative_drift() const;
};

struct IntegrateOptions {
  double t_max = 10.0;
  double dt = 0.01;
  int record_every = 1;
  double divergence_threshold = 1e6;  // on ||theta||_2
  int max_halvings = 20;
};

/// U grad H(theta): blockwise (d theta_1, d theta_2) = (dH/d2, -dH/d1).
Eigen::VectorXd rhs(const ReplicatorSystem& sys, const Eigen::VectorXd& theta);

using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// One implicit-midpoint step by fixed-point iteration (tolerance
/// 1e-13 max(1, ||x||_inf), at most 100 sweeps). Throws NoConvergence.
Eigen::VectorXd implicit_midpoint_step(const VectorField& f, const Eigen::VectorXd& x, double dt);

Eigen::VectorXd step_implicit_midpoint(const ReplicatorSystem& sys, const Eigen::VectorXd& theta, double dt);

/// Integrates d theta / dt = U grad H. A step that fails to converge is
/// retried as two half steps, recursively up to max_halvings times. Growth
/// past the divergence threshold (or an Overflow) ends the run with status
/// Divergent.
ParameterTrajectory integrate(const ReplicatorSystem& sys, const Eigen::VectorXd& theta0,
                              const IntegrateOptions& opts);

/// Metapopulation flow d Theta / dt = (M kron U) grad H(Theta); thetas are
/// stacked per patch, centroids likewise.
ParameterTrajectory integrate_meta(const MetaSystem& meta, const Eigen::VectorXd& big_theta0,
                                   const IntegrateOptions& opts);

struct WeightTrajectory {
  Eigen::VectorXd times;
  Eigen::MatrixXd weights;  // k x n
  int halvings = 0;
};

/// Classic RK4 on w_i' = g(w_i) sum_j f_ij w_j. A step producing a
/// nonpositive weight is bisected (StepTooLarge after max_halvings).
WeightTrajectory direct_replicator(const Eigen::MatrixXd& f, const Eigen::VectorXd& w0, GrowthLaw growth,
                                   double dt, double t_max, int record_every = 1, int max_halvings = 20);
WeightTrajectory direct_replicator(const PayoutMatrix& f, const Eigen::VectorXd& w0, GrowthLaw growth,
                                   double dt, double t_max, int record_every = 1);
/// Payouts reconstructed from the embedding.
WeightTrajectory direct_replicator(const DiscEmbedding& e, const Eigen::VectorXd& w0, GrowthLaw growth,
                                   double dt, double t_max, int record_every = 1);

/// Relative mismatch between the chain-rule derivative of the centroid
/// along the flow, taken by a central difference of grad H in the flow
/// direction, and Hess U grad H.
double centroid_rhs_check(const ReplicatorSystem& sys, const Eigen::VectorXd& theta);

/// Max over interior samples of ||(c_{k+1} - c_{k-1}) / (t_{k+1} - t_{k-1})
/// - Hess U grad H at theta_k|| / ||Hess U grad H||, skipping samples where
/// the reference is below `floor` in norm.
double centroid_trajectory_residual(const ReplicatorSystem& sys, const ParameterTrajectory& traj,
                                    double floor = 1e-12);

/// First time after departure (distance > 2 eps) at which the piecewise
/// linear trajectory comes within eps of theta_ref.
std::optional<double> recurrence_return(const ParameterTrajectory& traj, const Eigen::VectorXd& theta_ref,
                                        double eps);

}  // namespace discgame

#endif  // DISCGAME_DYNAMICS_HPP
