#ifndef DISCGAME_CLOSEDFORM_HPP
#define DISCGAME_CLOSEDFORM_HPP

#include <Eigen/Dense>

namespace discgame::closedform {

/// Self-play y' = U y: clockwise rotation at unit rate.
Eigen::Vector2d self_play(const Eigen::Vector2d& y0, double t);

/// Fictitious self-play y' = U ybar, ybar' = (y - ybar) / t, ybar(0) = y(0).
struct FictitiousState {
  Eigen::Vector2d agent;    // y(t)
  Eigen::Vector2d average;  // ybar(t), running mean of the past trajectory
};

/// Reference solution from y(0) = (0, 1):
///   y(t)    = (bei_0(2 sqrt t), ber_0(2 sqrt t))
///   ybar(t) = -(ber_1 + bei_1, ber_1 - bei_1)(2 sqrt t) / sqrt(2 t)
/// Domain 0 <= t <= 100. Throws OutOfDomain.
FictitiousState fictitious_self_play(double t);

/// Same dynamic from an arbitrary start: scale and rotate the reference
/// solution (the flow commutes with rotations).
FictitiousState fictitious_self_play(const Eigen::Vector2d& y0, double t);

/// Simultaneous gradient ascent of n agents (rows of ys0, two columns):
/// the centroid turns clockwise at rate 1 - 1/n and every offset from it
/// turns counterclockwise at rate 1/n.
Eigen::MatrixXd sga_epicycles(const Eigen::MatrixXd& ys0, double t);

/// Transitive replicator solution w_i(t) ∝ w0_i exp(t P r_i), renormalized
/// to total P. Requires sum(w0) = P.
Eigen::VectorXd transitive_density(const Eigen::VectorXd& ratings, const Eigen::VectorXd& w0,
                                   double total, double t);

struct GaussianMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// First time Sigma0^{-1} - Hxx t stops being positive definite (infinity if
/// never).
double gaussian_blowup_time(const Eigen::MatrixXd& sigma0, const Eigen::MatrixXd& hxx);

/// Mean and covariance of a Gaussian population under a quadratic game:
/// Sigma(t) = (Sigma0^{-1} - Hxx t)^{-1}, mean by RK4 on
/// xbar' = Sigma(t) (g + (Hxx + Hxx') xbar). Throws BlowUp, NotSymmetric,
/// NotSkew.
GaussianMoments gaussian_quadratic(const Eigen::VectorXd& mean0, const Eigen::MatrixXd& sigma0,
                                   const Eigen::VectorXd& g, const Eigen::MatrixXd& hxx,
                                   const Eigen::MatrixXd& hxx_cross, double t);

/// Parameter orbit of the product-Laplace disc game started at (0, a):
///   theta = (a sn(2 P s t | a^2), a cn / dn), P = 1 / (1 - a^2),
/// where `rate` s rescales time (1 for the log-Hamiltonian flow, P for the
/// linear-rate flow). Throws OutOfDomain unless 0 < a < 1.
Eigen::Vector2d laplace_oscillator(double a, double t, double rate = 1.0);

/// Period 2 (1 - a^2) K(a^2) / rate of the orbit above.
double laplace_period(double a, double rate = 1.0);

}  // namespace discgame::closedform

#endif  // DISCGAME_CLOSEDFORM_HPP
