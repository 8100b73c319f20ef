#include "discgame/closedform.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "discgame/error.hpp"
#include "discgame/special_functions.hpp"

namespace discgame::closedform {

namespace {

// exp(U phi) with U = [[0, 1], [-1, 0]]: clockwise by phi.
Eigen::Matrix2d clockwise(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Eigen::Matrix2d r;
  r << c, s, -s, c;
  return r;
}

}  // namespace

Eigen::Vector2d self_play(const Eigen::Vector2d& y0, double t) { return clockwise(t) * y0; }

FictitiousState fictitious_self_play(double t) {
  if (!(t >= 0.0 && t <= 100.0)) throw Error(Errc::OutOfDomain, "fictitious self-play needs 0 <= t <= 100");
  FictitiousState out;
  if (t == 0.0) {
    out.agent = Eigen::Vector2d(0.0, 1.0);
    out.average = out.agent;
    return out;
  }
  const double x = 2.0 * std::sqrt(t);
  const auto k0 = kelvin_ber_bei(0, x).values;
  const auto k1 = kelvin_ber_bei(1, x).values;
  out.agent = Eigen::Vector2d(k0[1], k0[0]);
  const double s = 1.0 / std::sqrt(2.0 * t);
  out.average = Eigen::Vector2d(-(k1[0] + k1[1]) * s, -(k1[0] - k1[1]) * s);
  return out;
}

FictitiousState fictitious_self_play(const Eigen::Vector2d& y0, double t) {
  const FictitiousState ref = fictitious_self_play(t);
  // Map (0, 1) onto y0 with a rotation-scaling [[b, a], [-a, b]].
  Eigen::Matrix2d m;
  m << y0(1), y0(0), -y0(0), y0(1);
  return FictitiousState{m * ref.agent, m * ref.average};
}

Eigen::MatrixXd sga_epicycles(const Eigen::MatrixXd& ys0, double t) {
  if (ys0.cols() != 2 || ys0.rows() < 1) {
    throw Error(Errc::DimensionMismatch, "sga_epicycles expects n x 2 positions with n >= 1");
  }
  const double n = static_cast<double>(ys0.rows());
  const Eigen::RowVector2d c0 = ys0.colwise().mean();
  const Eigen::Matrix2d centroid_map = clockwise((1.0 - 1.0 / n) * t);
  const Eigen::Matrix2d offset_map = clockwise(-t / n);
  const Eigen::RowVector2d c = (centroid_map * c0.transpose()).transpose();
  Eigen::MatrixXd out(ys0.rows(), 2);
  for (Eigen::Index j = 0; j < ys0.rows(); ++j) {
    out.row(j) = c + (offset_map * (ys0.row(j) - c0).transpose()).transpose();
  }
  return out;
}

Eigen::VectorXd transitive_density(const Eigen::VectorXd& ratings, const Eigen::VectorXd& w0,
                                   double total, double t) {
  if (ratings.size() != w0.size()) throw Error(Errc::LengthMismatch, "ratings and weights differ in length");
  if (w0.size() == 0 || w0.minCoeff() <= 0.0) throw Error(Errc::InvalidArgument, "weights must be positive");
  if (std::abs(w0.sum() - total) > 1e-10 * std::max(1.0, std::abs(total))) {
    throw Error(Errc::InvalidArgument, "initial weights must sum to the population size");
  }
  Eigen::ArrayXd logw = w0.array().log() + t * total * ratings.array();
  logw -= logw.maxCoeff();
  Eigen::ArrayXd w = logw.exp();
  return (total / w.sum()) * w.matrix();
}

double gaussian_blowup_time(const Eigen::MatrixXd& sigma0, const Eigen::MatrixXd& hxx) {
  // Sigma0^{-1} - Hxx t > 0  <=>  I - t S^{1/2} Hxx S^{1/2} > 0.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sig(sigma0);
  if (sig.info() != Eigen::Success || sig.eigenvalues().minCoeff() <= 0.0) {
    throw Error(Errc::InvalidArgument, "initial covariance must be symmetric positive definite");
  }
  const Eigen::MatrixXd root = sig.operatorSqrt();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> h(root * hxx * root);
  const double top = h.eigenvalues().maxCoeff();
  return top > 0.0 ? 1.0 / top : std::numeric_limits<double>::infinity();
}

GaussianMoments gaussian_quadratic(const Eigen::VectorXd& mean0, const Eigen::MatrixXd& sigma0,
                                   const Eigen::VectorXd& g, const Eigen::MatrixXd& hxx,
                                   const Eigen::MatrixXd& hxx_cross, double t) {
  const auto d = mean0.size();
  if (sigma0.rows() != d || sigma0.cols() != d || g.size() != d || hxx.rows() != d || hxx.cols() != d ||
      hxx_cross.rows() != d || hxx_cross.cols() != d) {
    throw Error(Errc::DimensionMismatch, "gaussian_quadratic dimensions disagree");
  }
  if ((hxx - hxx.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw Error(Errc::NotSymmetric, "Hxx must be symmetric");
  if ((hxx_cross + hxx_cross.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(Errc::NotSkew, "Hxx' must be skew-symmetric");
  }
  if (t < 0.0) throw Error(Errc::InvalidArgument, "time must be nonnegative");
  const double blowup = gaussian_blowup_time(sigma0, hxx);
  if (t >= blowup) throw Error(Errc::BlowUp, "covariance blows up at t = " + std::to_string(blowup));

  const Eigen::MatrixXd prec0 = sigma0.inverse();
  auto sigma_at = [&](double s) -> Eigen::MatrixXd {
    Eigen::MatrixXd cov = (prec0 - hxx * s).inverse();
    return 0.5 * (cov + cov.transpose());
  };
  const Eigen::MatrixXd jac = hxx + hxx_cross;
  auto rhs = [&](double s, const Eigen::VectorXd& m) -> Eigen::VectorXd {
    return sigma_at(s) * (g + jac * m);
  };
  const int steps = std::max(100, static_cast<int>(std::ceil(t / 1e-3)));
  const double h = t / steps;
  Eigen::VectorXd m = mean0;
  for (int k = 0; k < steps; ++k) {
    const double s = k * h;
    const Eigen::VectorXd k1 = rhs(s, m);
    const Eigen::VectorXd k2 = rhs(s + 0.5 * h, m + 0.5 * h * k1);
    const Eigen::VectorXd k3 = rhs(s + 0.5 * h, m + 0.5 * h * k2);
    const Eigen::VectorXd k4 = rhs(s + h, m + h * k3);
    m += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return GaussianMoments{m, sigma_at(t)};
}

Eigen::Vector2d laplace_oscillator(double a, double t, double rate) {
  if (!(a > 0.0 && a < 1.0)) throw Error(Errc::OutOfDomain, "Laplace amplitude must satisfy 0 < a < 1");
  const double pop = 1.0 / (1.0 - a * a);
  const auto j = jacobi_sn_cn_dn(2.0 * pop * rate * t, a * a).values;
  return Eigen::Vector2d(a * j[0], a * j[1] / j[2]);
}

double laplace_period(double a, double rate) {
  if (!(a > 0.0 && a < 1.0)) throw Error(Errc::OutOfDomain, "Laplace amplitude must satisfy 0 < a < 1");
  return 2.0 * (1.0 - a * a) * elliptic_K(a * a).values[0] / rate;
}

}  // namespace discgame::closedform
