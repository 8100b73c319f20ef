#include "discgame/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "discgame/embedding.hpp"
#include "discgame/error.hpp"
#include "simplex.hpp"

namespace discgame {

double shoelace_area(const Eigen::MatrixXd& cycle) {
  if (cycle.cols() != 2) throw Error(Errc::DimensionMismatch, "cycle must have two columns");
  double acc = 0.0;
  const Eigen::Index k = cycle.rows();
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::Index n = (j + 1) % k;
    acc += cycle(j, 0) * cycle(n, 1) - cycle(n, 0) * cycle(j, 1);
  }
  return 0.5 * acc;
}

Polygon2D::Polygon2D(Eigen::MatrixXd v) : vertices(std::move(v)) {
  if (vertices.cols() != 2 || vertices.rows() < 3) {
    throw Error(Errc::InvalidArgument, "polygon needs at least three 2-d vertices");
  }
  if (!vertices.allFinite()) throw Error(Errc::NonFinite, "polygon vertices must be finite");
  if (!(signed_area() > 0.0)) throw Error(Errc::InvalidArgument, "polygon vertices must be counterclockwise");
}

double Polygon2D::signed_area() const { return shoelace_area(vertices); }

namespace {

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

double segment_distance(const Eigen::Vector2d& x, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d d = b - a;
  const double len2 = d.squaredNorm();
  double s = len2 > 0.0 ? (x - a).dot(d) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return (x - (a + s * d)).norm();
}

bool inside_convex(const Polygon2D& p, const Eigen::Vector2d& x) {
  for (int j = 0; j < p.size(); ++j) {
    if (cross2(p.vertex(j), p.vertex((j + 1) % p.size()), x) < 0.0) return false;
  }
  return true;
}

double boundary_distance(const Polygon2D& p, const Eigen::Vector2d& x) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < p.size(); ++j) best = std::min(best, segment_distance(x, p.vertex(j), p.vertex((j + 1) % p.size())));
  return best;
}

void require_full_dimension(const Eigen::MatrixXd& points) {
  const auto r = points.cols();
  if (points.rows() < r + 1) {
    throw Error(Errc::DegeneratePoints, "need at least r + 1 points for a full-dimensional hull");
  }
  const Eigen::MatrixXd centered = points.rowwise() - points.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double top = sv(0);
  if (top == 0.0 || sv(r - 1) <= 1e-12 * top) {
    std::ostringstream msg;
    msg << "points have affine dimension below " << r << "; deficient direction [";
    const Eigen::VectorXd dir = svd.matrixV().col(r - 1);
    for (Eigen::Index j = 0; j < dir.size(); ++j) msg << (j ? ", " : "") << dir(j);
    msg << "]";
    throw Error(Errc::DegeneratePoints, msg.str());
  }
}

}  // namespace

Polygon2D convex_hull(const Eigen::MatrixXd& points) {
  if (points.cols() != 2) throw Error(Errc::DimensionMismatch, "convex_hull expects 2-d points");
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) pts.emplace_back(points(i, 0), points(i, 1));
  std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a(0) < b(0) || (a(0) == b(0) && a(1) < b(1));
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw Error(Errc::DegeneratePoints, "fewer than three distinct points");
  std::vector<Eigen::Vector2d> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw Error(Errc::DegeneratePoints, "points are collinear");
  Eigen::MatrixXd v(static_cast<Eigen::Index>(hull.size()), 2);
  for (std::size_t i = 0; i < hull.size(); ++i) v.row(static_cast<Eigen::Index>(i)) = hull[i].transpose();
  return Polygon2D(std::move(v));
}

bool origin_in_hull_interior(const Eigen::MatrixXd& points, double tol) {
  const auto r = points.cols();
  if (r < 1) throw Error(Errc::DimensionMismatch, "points need at least one column");
  if (!points.allFinite()) throw Error(Errc::NonFinite, "points must be finite");
  require_full_dimension(points);
  if (r == 2) {
    const Polygon2D hull = convex_hull(points);
    return boundary_proximity(hull, Eigen::Vector2d::Zero()) > tol;
  }
  // Polar body {d : d . y_i <= 1} is bounded iff 0 is interior.
  const auto m = points.rows();
  Eigen::MatrixXd a(m, 2 * r);
  a.leftCols(r) = points;
  a.rightCols(r) = -points;
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(m);
  for (Eigen::Index j = 0; j < r; ++j) {
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * r);
      c(j) = sign;
      c(r + j) = -sign;
      const auto res = detail::maximize(c, a, b, 1e-9);
      if (res.status == detail::LpStatus::Unbounded || res.value > 1.0 / tol) return false;
    }
  }
  return true;
}

namespace {

double gradient_scale(const ReplicatorSystem& sys, const Eigen::VectorXd& theta) {
  double ymax = 1.0;
  if (sys.is_cloud()) ymax = std::max(1e-300, sys.cloud().points.rowwise().norm().maxCoeff());
  if (sys.rate_mode() == RateMode::ConstantRate) return ymax;
  if (sys.growth() == GrowthLaw::Linear) return std::max(1.0, std::abs(sys.hamiltonian(theta))) * ymax;
  return std::max(1.0, sys.densities(theta).sum()) * ymax;
}

bool symmetric_product(const ReplicatorSystem& sys) { return !sys.is_cloud(); }

struct NewtonOutcome {
  Eigen::VectorXd theta;
  bool converged = false;
  bool escaped = false;
  int iterations = 0;
};

// Damped Newton on G(theta) = H(theta) - target . theta.
NewtonOutcome newton_minimize(const ReplicatorSystem& sys, const Eigen::VectorXd& target, int max_iter,
                              double escape_norm) {
  NewtonOutcome out;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(sys.dim());
  auto objective = [&](const Eigen::VectorXd& t) { return sys.hamiltonian(t) - target.dot(t); };
  double g_val = objective(theta);
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it;
    const Eigen::VectorXd grad = sys.gradient(theta) - target;
    if (grad.norm() <= 1e-10 * gradient_scale(sys, theta)) {
      out.theta = theta;
      out.converged = true;
      return out;
    }
    const Eigen::MatrixXd hess = sys.hessian(theta);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
    Eigen::VectorXd step = -ldlt.solve(grad);
    if (!step.allFinite() || step.dot(grad) >= 0.0) step = -grad;
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd trial = theta + alpha * step;
      try {
        const double v = objective(trial);
        if (std::isfinite(v) && v <= g_val + 1e-4 * alpha * grad.dot(step) + 1e-15 * std::abs(g_val)) {
          theta = trial;
          g_val = v;
          accepted = true;
          break;
        }
      } catch (const Error& e) {
        if (e.code() != Errc::Overflow && e.code() != Errc::OutOfDomain) throw;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    if (theta.norm() > escape_norm) {
      out.escaped = true;
      break;
    }
  }
  out.theta = theta;
  return out;
}

// Exact membership where the attainable set is known: the open hull of the
// cloud for normalized centroids, the open box for uniform marginals.
bool attainable(const ReplicatorSystem& sys, const Eigen::VectorXd& target) {
  if (sys.rate_mode() != RateMode::ConstantRate) return true;
  if (!sys.is_cloud()) {
    const auto& marg = std::get<ProductMarginals>(sys.base()).marginals;
    for (int j = 0; j < sys.dim(); ++j) {
      const Marginal& m = marg[static_cast<std::size_t>(j)];
      if (m.kind == MarginalKind::Uniform && !(std::abs(target(j)) < m.half_width)) return false;
    }
    return true;
  }
  try {
    return origin_in_hull_interior(sys.cloud().points.rowwise() - target.transpose());
  } catch (const Error& e) {
    if (e.code() != Errc::DegeneratePoints) throw;
    return true;  // lower-dimensional cloud: leave it to Newton
  }
}

}  // namespace

std::optional<Eigen::VectorXd> find_equilibrium(const ReplicatorSystem& sys) {
  if (sys.is_cloud()) {
    if (!origin_in_hull_interior(sys.cloud().points)) return std::nullopt;
  } else if (!symmetric_product(sys)) {
    return std::nullopt;
  }
  const auto res = newton_minimize(sys, Eigen::VectorXd::Zero(sys.dim()), 200, 1e8);
  if (!res.converged) {
    throw Error(Errc::NoConvergence, "Newton search for the equilibrium did not converge; last |theta| = " +
                                         std::to_string(res.theta.norm()));
  }
  return res.theta;
}

Eigen::VectorXd invert_centroid(const ReplicatorSystem& sys, const Eigen::VectorXd& target) {
  if (target.size() != sys.dim()) throw Error(Errc::DimensionMismatch, "target has wrong length");
  if (!target.allFinite()) throw Error(Errc::NonFinite, "target must be finite");
  if (!attainable(sys, target)) throw Error(Errc::Unattainable, "target centroid lies outside the attainable region");
  NewtonOutcome res;
  try {
    res = newton_minimize(sys, target, 500, 1e4);
  } catch (const Error& e) {
    if (e.code() == Errc::Overflow) throw Error(Errc::Unattainable, "target centroid is not attainable");
    throw;
  }
  if (res.converged) return res.theta;
  if (res.escaped || res.theta.norm() > 50.0) {
    throw Error(Errc::Unattainable, "target centroid is not attainable (|theta| grew to " +
                                        std::to_string(res.theta.norm()) + ")");
  }
  throw Error(Errc::NoConvergence, "centroid inversion did not converge");
}

std::vector<double> linearization_frequencies(const ReplicatorSystem& sys, const Eigen::VectorXd& theta_star) {
  const Eigen::VectorXd grad = sys.gradient(theta_star);
  if (grad.norm() > 1e-6 * gradient_scale(sys, theta_star)) {
    throw Error(Errc::NotEquilibrium, "gradient norm " + std::to_string(grad.norm()) + " at the supplied point");
  }
  const Eigen::MatrixXd j = rotation_U(sys.dim()) * sys.hessian(theta_star);
  Eigen::EigenSolver<Eigen::MatrixXd> es(j, false);
  if (es.info() != Eigen::Success) throw Error(Errc::EigenFailure, "eigensolver failed on the linearization");
  const Eigen::VectorXcd ev = es.eigenvalues();
  const double radius = ev.cwiseAbs().maxCoeff();
  if (ev.real().cwiseAbs().maxCoeff() > 1e-8 * radius) {
    throw Error(Errc::EigenFailure, "linearization has eigenvalues off the imaginary axis");
  }
  std::vector<double> im;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k).imag() > 0.0) im.push_back(ev(k).imag());
  }
  std::sort(im.begin(), im.end(), std::greater<>());
  return im;
}

Polygon2D dual_polygon(const Polygon2D& p) {
  const int k = p.size();
  Eigen::MatrixXd v(k, 2);
  for (int j = 0; j < k; ++j) {
    const Eigen::Vector2d a = p.vertex(j);
    const Eigen::Vector2d e = p.vertex((j + 1) % k) - a;
    const Eigen::Vector2d n(e(1), -e(0));
    const double support = n.dot(a);
    if (!(support > 1e-12 * n.norm())) throw Error(Errc::OriginNotInterior, "origin is not inside the polygon");
    v.row(j) = (n / support).transpose();
  }
  for (int j = 0; j < k; ++j) {
    if (cross2(p.vertex(j), p.vertex((j + 1) % k), p.vertex((j + 2) % k)) <= 0.0) {
      throw Error(Errc::InvalidArgument, "polygon must be strictly convex");
    }
  }
  return Polygon2D(std::move(v));
}

double curl_cycle(const Eigen::MatrixXd& cycle) {
  if (cycle.cols() != 2) throw Error(Errc::DimensionMismatch, "cycle must have two columns");
  if (cycle.rows() < 3) throw Error(Errc::InvalidArgument, "cycle needs at least three points");
  double acc = 0.0;
  const Eigen::Index k = cycle.rows();
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::Vector2d a = cycle.row((j + 1) % k).transpose();
    const Eigen::Vector2d b = cycle.row(j).transpose();
    acc += disc(a, b);
  }
  return acc;
}

std::optional<double> period_estimate(const ParameterTrajectory& traj, const Eigen::VectorXd& theta_star) {
  if (traj.thetas.cols() != 2 || theta_star.size() != 2) {
    throw Error(Errc::DimensionMismatch, "period_estimate needs r = 2");
  }
  if (traj.size() < 3) return std::nullopt;
  const Eigen::Vector2d c = theta_star;
  Eigen::Vector2d e = traj.theta(0) - c;
  if (e.norm() == 0.0) return std::nullopt;
  e.normalize();
  auto side = [&](int k) {
    const Eigen::Vector2d d = traj.theta(k) - c;
    return e(0) * d(1) - e(1) * d(0);
  };
  // orientation of the first departure from the ray
  double sigma = 0.0;
  for (int k = 1; k < traj.size() && sigma == 0.0; ++k) sigma = side(k) > 0.0 ? 1.0 : (side(k) < 0.0 ? -1.0 : 0.0);
  if (sigma == 0.0) return std::nullopt;
  std::vector<double> crossings{traj.times(0)};
  for (int k = 1; k + 1 < traj.size(); ++k) {
    const double s0 = sigma * side(k);
    const double s1 = sigma * side(k + 1);
    if (s0 < 0.0 && s1 >= 0.0) {
      const double f = s0 / (s0 - s1);
      const Eigen::Vector2d at = (1.0 - f) * traj.theta(k) + f * traj.theta(k + 1);
      if ((at - c).dot(e) > 0.0) crossings.push_back(traj.times(k) + f * (traj.times(k + 1) - traj.times(k)));
    }
  }
  if (crossings.size() < 2) return std::nullopt;
  return (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
}

double boundary_proximity(const Polygon2D& hull, const Eigen::Vector2d& x) {
  const double d = boundary_distance(hull, x);
  return inside_convex(hull, x) ? d : -d;
}

double boundary_proximity(const Eigen::MatrixXd& points, const Eigen::Vector2d& x) {
  return boundary_proximity(convex_hull(points), x);
}

double hausdorff_to_polygon(const Eigen::MatrixXd& points, const Polygon2D& poly, int samples_per_edge) {
  if (points.cols() != 2 || points.rows() == 0) throw Error(Errc::DimensionMismatch, "points must be k x 2");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    worst = std::max(worst, boundary_distance(poly, points.row(i).transpose()));
  }
  const int k = poly.size();
  for (int j = 0; j < k; ++j) {
    const Eigen::Vector2d a = poly.vertex(j);
    const Eigen::Vector2d b = poly.vertex((j + 1) % k);
    for (int s = 0; s < samples_per_edge; ++s) {
      const Eigen::Vector2d q = a + (static_cast<double>(s) / samples_per_edge) * (b - a);
      const double nearest = (points.rowwise() - q.transpose()).rowwise().squaredNorm().minCoeff();
      worst = std::max(worst, std::sqrt(nearest));
    }
  }
  return worst;
}

}  // namespace discgame
