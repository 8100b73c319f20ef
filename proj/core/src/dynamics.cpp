#include "discgame/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "discgame/error.hpp"

namespace discgame {

double ParameterTrajectory::max_relative_drift() const {
  if (hamiltonians.size() == 0) return 0.0;
  const double h0 = hamiltonians(0);
  const double scale = h0 != 0.0 ? std::abs(h0) : 1.0;
  return (hamiltonians.array() - h0).abs().maxCoeff() / scale;
}

Eigen::VectorXd rhs(const ReplicatorSystem& sys, const Eigen::VectorXd& theta) {
  return apply_U(sys.gradient(theta));
}

Eigen::VectorXd implicit_midpoint_step(const VectorField& f, const Eigen::VectorXd& x, double dt) {
  if (!(dt > 0.0)) throw Error(Errc::InvalidArgument, "dt must be positive");
  const double tol = 1e-13 * std::max(1.0, x.lpNorm<Eigen::Infinity>());
  Eigen::VectorXd next = x + dt * f(x);
  double prev_change = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd trial = x + dt * f(0.5 * (x + next));
    const double change = (trial - next).lpNorm<Eigen::Infinity>();
    next.swap(trial);
    if (!next.allFinite()) break;
    if (change <= tol) return next;
    // Rounding floor: the iteration has stopped contracting at a level far
    // below anything the step error could see.
    if (change >= prev_change && change <= 1e3 * tol) return next;
    prev_change = change;
  }
  throw Error(Errc::NoConvergence, "implicit midpoint fixed-point iteration did not converge");
}

Eigen::VectorXd step_implicit_midpoint(const ReplicatorSystem& sys, const Eigen::VectorXd& theta, double dt) {
  return implicit_midpoint_step([&](const Eigen::VectorXd& v) { return rhs(sys, v); }, theta, dt);
}

namespace {

struct Flow {
  VectorField field;
  std::function<double(const Eigen::VectorXd&)> energy;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> centroid;
};

// Advances x by dt, splitting into halves on NoConvergence.
Eigen::VectorXd controlled_step(const Flow& flow, const Eigen::VectorXd& x, double dt, int depth, int max_depth,
                                int& halvings) {
  try {
    return implicit_midpoint_step(flow.field, x, dt);
  } catch (const Error& e) {
    if (e.code() != Errc::NoConvergence || depth >= max_depth) throw;
  }
  ++halvings;
  const Eigen::VectorXd mid = controlled_step(flow, x, 0.5 * dt, depth + 1, max_depth, halvings);
  return controlled_step(flow, mid, 0.5 * dt, depth + 1, max_depth, halvings);
}

ParameterTrajectory run_flow(const Flow& flow, const Eigen::VectorXd& x0, const IntegrateOptions& opts) {
  if (!(opts.t_max > 0.0)) throw Error(Errc::InvalidArgument, "t_max must be positive");
  if (!(opts.dt > 0.0)) throw Error(Errc::InvalidArgument, "dt must be positive");
  if (opts.record_every < 1) throw Error(Errc::InvalidArgument, "record_every must be at least 1");
  if (!x0.allFinite()) throw Error(Errc::NonFinite, "initial parameters are not finite");
  const long steps = std::max(1L, std::lround(std::ceil(opts.t_max / opts.dt - 1e-9)));
  const double dt = opts.t_max / static_cast<double>(steps);

  std::vector<double> times;
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> hs;
  std::vector<Eigen::VectorXd> cs;
  auto record = [&](double t, const Eigen::VectorXd& x) {
    times.push_back(t);
    xs.push_back(x);
    hs.push_back(flow.energy(x));
    cs.push_back(flow.centroid(x));
  };

  ParameterTrajectory traj;
  record(0.0, x0);
  Eigen::VectorXd x = x0;
  for (long k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    try {
      x = controlled_step(flow, x, dt, 0, opts.max_halvings, traj.halvings);
    } catch (const Error& e) {
      if (e.code() != Errc::Overflow && e.code() != Errc::OutOfDomain) throw;
      traj.status = TrajectoryStatus::Divergent;
      break;
    }
    const bool diverged = !x.allFinite() || x.norm() > opts.divergence_threshold;
    if (diverged || k % opts.record_every == 0 || k == steps) {
      try {
        if (x.allFinite()) record(t, x);
      } catch (const Error& e) {
        if (e.code() != Errc::Overflow) throw;
        traj.status = TrajectoryStatus::Divergent;
        break;
      }
    }
    if (diverged) {
      traj.status = TrajectoryStatus::Divergent;
      break;
    }
  }

  const auto n = static_cast<Eigen::Index>(times.size());
  const auto dim = x0.size();
  traj.times.resize(n);
  traj.thetas.resize(n, dim);
  traj.hamiltonians.resize(n);
  traj.centroids.resize(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    traj.times(i) = times[k];
    traj.thetas.row(i) = xs[k].transpose();
    traj.hamiltonians(i) = hs[k];
    traj.centroids.row(i) = cs[k].transpose();
  }
  return traj;
}

}  // namespace

ParameterTrajectory integrate(const ReplicatorSystem& sys, const Eigen::VectorXd& theta0,
                              const IntegrateOptions& opts) {
  if (theta0.size() != sys.dim()) throw Error(Errc::DimensionMismatch, "theta0 does not match the system dimension");
  Flow flow{[&](const Eigen::VectorXd& v) { return rhs(sys, v); },
            [&](const Eigen::VectorXd& v) { return sys.hamiltonian(v); },
            [&](const Eigen::VectorXd& v) { return sys.gradient(v); }};
  return run_flow(flow, theta0, opts);
}

ParameterTrajectory integrate_meta(const MetaSystem& meta, const Eigen::VectorXd& big_theta0,
                                   const IntegrateOptions& opts) {
  if (big_theta0.size() != meta.total_dim()) {
    throw Error(Errc::DimensionMismatch, "stacked theta0 does not match the meta system");
  }
  Flow flow{[&](const Eigen::VectorXd& v) { return meta_rhs(meta, v); },
            [&](const Eigen::VectorXd& v) { return meta_hamiltonian(meta, v); },
            [&](const Eigen::VectorXd& v) { return meta_gradient(meta, v); }};
  return run_flow(flow, big_theta0, opts);
}

namespace {

Eigen::VectorXd replicator_field(const Eigen::MatrixXd& f, GrowthLaw growth, const Eigen::VectorXd& w) {
  Eigen::VectorXd payoff = f * w;
  for (Eigen::Index i = 0; i < w.size(); ++i) payoff(i) *= growth_g(growth, w(i));
  return payoff;
}

Eigen::VectorXd rk4(const Eigen::MatrixXd& f, GrowthLaw growth, const Eigen::VectorXd& w, double h) {
  const Eigen::VectorXd k1 = replicator_field(f, growth, w);
  const Eigen::VectorXd k2 = replicator_field(f, growth, w + 0.5 * h * k1);
  const Eigen::VectorXd k3 = replicator_field(f, growth, w + 0.5 * h * k2);
  const Eigen::VectorXd k4 = replicator_field(f, growth, w + h * k3);
  return w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Eigen::VectorXd rk4_controlled(const Eigen::MatrixXd& f, GrowthLaw growth, const Eigen::VectorXd& w, double h,
                               int depth, int max_depth, int& halvings) {
  Eigen::VectorXd next = rk4(f, growth, w, h);
  if (next.allFinite() && next.minCoeff() > 0.0) return next;
  if (depth >= max_depth) throw Error(Errc::StepTooLarge, "replicator step keeps producing nonpositive weights");
  ++halvings;
  const Eigen::VectorXd mid = rk4_controlled(f, growth, w, 0.5 * h, depth + 1, max_depth, halvings);
  return rk4_controlled(f, growth, mid, 0.5 * h, depth + 1, max_depth, halvings);
}

}  // namespace

WeightTrajectory direct_replicator(const Eigen::MatrixXd& f, const Eigen::VectorXd& w0, GrowthLaw growth,
                                   double dt, double t_max, int record_every, int max_halvings) {
  if (f.rows() != f.cols()) throw Error(Errc::NonSquare, "payout matrix must be square");
  if (f.rows() != w0.size()) throw Error(Errc::LengthMismatch, "one initial weight per agent required");
  if (!w0.allFinite() || w0.size() == 0 || w0.minCoeff() <= 0.0) {
    throw Error(Errc::InvalidArgument, "initial weights must be positive");
  }
  if (!(dt > 0.0) || !(t_max > 0.0)) throw Error(Errc::InvalidArgument, "dt and t_max must be positive");
  if (record_every < 1) throw Error(Errc::InvalidArgument, "record_every must be at least 1");
  const long steps = std::max(1L, std::lround(std::ceil(t_max / dt - 1e-9)));
  const double h = t_max / static_cast<double>(steps);

  std::vector<double> times{0.0};
  std::vector<Eigen::VectorXd> ws{w0};
  WeightTrajectory out;
  Eigen::VectorXd w = w0;
  for (long k = 1; k <= steps; ++k) {
    w = rk4_controlled(f, growth, w, h, 0, max_halvings, out.halvings);
    if (k % record_every == 0 || k == steps) {
      times.push_back(static_cast<double>(k) * h);
      ws.push_back(w);
    }
  }
  out.times.resize(static_cast<Eigen::Index>(times.size()));
  out.weights.resize(static_cast<Eigen::Index>(times.size()), w0.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    out.times(static_cast<Eigen::Index>(i)) = times[i];
    out.weights.row(static_cast<Eigen::Index>(i)) = ws[i].transpose();
  }
  return out;
}

WeightTrajectory direct_replicator(const PayoutMatrix& f, const Eigen::VectorXd& w0, GrowthLaw growth, double dt,
                                   double t_max, int record_every) {
  return direct_replicator(f.entries(), w0, growth, dt, t_max, record_every);
}

WeightTrajectory direct_replicator(const DiscEmbedding& e, const Eigen::VectorXd& w0, GrowthLaw growth, double dt,
                                   double t_max, int record_every) {
  return direct_replicator(reconstruct_matrix(e), w0, growth, dt, t_max, record_every);
}

double centroid_rhs_check(const ReplicatorSystem& sys, const Eigen::VectorXd& theta) {
  const Eigen::VectorXd v = rhs(sys, theta);
  const Eigen::VectorXd chain = sys.hessian(theta) * v;
  const double vn = v.norm();
  if (vn == 0.0) return chain.norm();
  const double eps = 1e-5 * std::max(1.0, theta.norm()) / vn;
  const Eigen::VectorXd fd = (sys.gradient(theta + eps * v) - sys.gradient(theta - eps * v)) / (2.0 * eps);
  return (fd - chain).norm() / std::max(chain.norm(), 1e-300);
}

double centroid_trajectory_residual(const ReplicatorSystem& sys, const ParameterTrajectory& traj, double floor) {
  double worst = 0.0;
  for (int k = 1; k + 1 < traj.size(); ++k) {
    const double span = traj.times(k + 1) - traj.times(k - 1);
    const Eigen::VectorXd fd = (traj.centroids.row(k + 1) - traj.centroids.row(k - 1)).transpose() / span;
    const Eigen::VectorXd th = traj.theta(k);
    const Eigen::VectorXd ref = sys.hessian(th) * rhs(sys, th);
    if (ref.norm() < floor) continue;
    worst = std::max(worst, (fd - ref).norm() / ref.norm());
  }
  return worst;
}

std::optional<double> recurrence_return(const ParameterTrajectory& traj, const Eigen::VectorXd& theta_ref,
                                        double eps) {
  if (traj.size() == 0) return std::nullopt;
  if (theta_ref.size() != traj.thetas.cols()) throw Error(Errc::DimensionMismatch, "reference has wrong length");
  int k = 0;
  while (k < traj.size() && (traj.theta(k) - theta_ref).norm() <= 2.0 * eps) ++k;
  if (k >= traj.size()) return std::nullopt;
  for (; k + 1 < traj.size(); ++k) {
    const Eigen::VectorXd a = traj.theta(k) - theta_ref;
    const Eigen::VectorXd d = traj.theta(k + 1) - traj.theta(k);
    // smallest s in [0, 1] with |a + s d| <= eps
    const double qa = d.squaredNorm();
    const double qb = 2.0 * a.dot(d);
    const double qc = a.squaredNorm() - eps * eps;
    if (qc <= 0.0) return traj.times(k);
    if (qa == 0.0) continue;
    const double disc_ = qb * qb - 4.0 * qa * qc;
    if (disc_ < 0.0) continue;
    const double s = (-qb - std::sqrt(disc_)) / (2.0 * qa);
    if (s >= 0.0 && s <= 1.0) return traj.times(k) + s * (traj.times(k + 1) - traj.times(k));
  }
  return std::nullopt;
}

}  // namespace discgame
