#ifndef DISCGAME_ANALYSIS_HPP
#define DISCGAME_ANALYSIS_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "discgame/dynamics.hpp"
#include "discgame/hamiltonian.hpp"

namespace discgame {

/// Simple polygon with counterclockwise vertices (k x 2).
struct Polygon2D {
  Eigen::MatrixXd vertices;

  /// Throws InvalidArgument unless there are at least three vertices with
  /// positive signed area.
  explicit Polygon2D(Eigen::MatrixXd v);
  int size() const { return static_cast<int>(vertices.rows()); }
  Eigen::Vector2d vertex(int j) const { return vertices.row(j).transpose(); }
  double signed_area() const;
};

/// Shoelace signed area of a closed k x 2 cycle.
double shoelace_area(const Eigen::MatrixXd& cycle);

/// Counterclockwise convex hull without collinear vertices. Throws
/// DegeneratePoints if the points span less than a plane.
Polygon2D convex_hull(const Eigen::MatrixXd& points);

/// Whether the origin lies in the interior of conv(points) with clearance
/// above tol. r = 2 uses the exact hull; larger r solves 2r linear programs
/// max +-d_j s.t. d . y_i <= 1 and asks all of them to be bounded.
/// Throws DegeneratePoints when the affine hull is not full dimensional.
bool origin_in_hull_interior(const Eigen::MatrixXd& points, double tol = 1e-9);

/// Interior equilibrium by damped Newton on the convex Hamiltonian, or
/// nullopt if the origin is not interior to the support. Throws
/// NoConvergence after 200 iterations.
std::optional<Eigen::VectorXd> find_equilibrium(const ReplicatorSystem& sys);

/// theta with grad H(theta) = target. Throws Unattainable for targets on or
/// outside the boundary of the attainable moments.
Eigen::VectorXd invert_centroid(const ReplicatorSystem& sys, const Eigen::VectorXd& target);

/// Frequencies of the linearized flow at an equilibrium: the imaginary parts
/// of eig(U Hess), one per conjugate pair, non-increasing. Throws
/// NotEquilibrium.
std::vector<double> linearization_frequencies(const ReplicatorSystem& sys, const Eigen::VectorXd& theta_star);

/// Polar reciprocal with respect to the unit circle. Throws
/// OriginNotInterior.
Polygon2D dual_polygon(const Polygon2D& p);

/// sum_j disc(y_{j+1}, y_j) over the closed cycle; -2 x shoelace area.
double curl_cycle(const Eigen::MatrixXd& cycle);

/// Mean time between successive same-direction crossings of the ray from
/// theta_star through theta(0). r = 2 only.
std::optional<double> period_estimate(const ParameterTrajectory& traj, const Eigen::VectorXd& theta_star);

/// Distance from x to the polygon boundary, positive inside.
double boundary_proximity(const Polygon2D& hull, const Eigen::Vector2d& x);
double boundary_proximity(const Eigen::MatrixXd& points, const Eigen::Vector2d& x);

/// Symmetric Hausdorff distance between a point set (k x 2) and the
/// polygon boundary; the boundary is sampled with `samples_per_edge`.
double hausdorff_to_polygon(const Eigen::MatrixXd& points, const Polygon2D& poly, int samples_per_edge = 200);

}  // namespace discgame

#endif  // DISCGAME_ANALYSIS_HPP
