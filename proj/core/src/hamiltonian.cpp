#include "discgame/hamiltonian.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "discgame/error.hpp"
#include "discgame/special_functions.hpp"
#include "pairwise.hpp"

namespace discgame {

namespace {

constexpr double kOverflowLog = 700.0;

// log(sinh(x) / x)
double log_sinhc(double x) {
  const double a = std::abs(x);
  if (a < 0.1) {
    const double x2 = a * a;
    return x2 * (1.0 / 6.0 + x2 * (-1.0 / 180.0 + x2 * (1.0 / 2835.0 - x2 / 37800.0)));
  }
  if (a <= 20.0) return std::log(std::sinh(a) / a);
  return a + std::log1p(-std::exp(-2.0 * a)) - std::log(2.0 * a);
}

// coth(x) - 1/x
double coth_minus_inv(double x) {
  const double a = std::abs(x);
  if (a < 0.05) {
    const double x2 = x * x;
    return x * (1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0 - x2 / 4725.0)));
  }
  return 1.0 / std::tanh(x) - 1.0 / x;
}

// 1/x^2 - 1/sinh(x)^2
double inv_sq_minus_csch_sq(double x) {
  const double a = std::abs(x);
  if (a < 0.05) {
    const double x2 = x * x;
    return 1.0 / 3.0 + x2 * (-1.0 / 15.0 + x2 * (2.0 / 189.0 - x2 / 675.0));
  }
  const double s = std::sinh(a);
  return 1.0 / (a * a) - (a > 350.0 ? 0.0 : 1.0 / (s * s));
}

struct MarginalTerms {
  double l0;  // log MGF
  double l1;  // first derivative
  double l2;  // second derivative
};

MarginalTerms marginal_terms(const Marginal& m, double t) {
  switch (m.kind) {
    case MarginalKind::Uniform: {
      const double h = m.half_width;
      return {log_sinhc(h * t), h * coth_minus_inv(h * t), h * h * inv_sq_minus_csch_sq(h * t)};
    }
    case MarginalKind::Laplace: {
      if (!(std::abs(t) < 1.0)) throw Error(Errc::OutOfDomain, "Laplace marginal requires |theta| < 1");
      const double q = 1.0 - t * t;
      return {-std::log1p(-t * t), 2.0 * t / q, 2.0 * (1.0 + t * t) / (q * q)};
    }
    case MarginalKind::Gaussian:
      return {0.5 * t * t, t, 1.0};
  }
  throw Error(Errc::InvalidArgument, "unknown marginal kind");
}

void require_theta(const Eigen::VectorXd& theta, int r) {
  if (theta.size() != r) {
    throw Error(Errc::DimensionMismatch,
                "theta has length " + std::to_string(theta.size()) + ", system dimension is " + std::to_string(r));
  }
  if (!theta.allFinite()) throw Error(Errc::NonFinite, "theta has non-finite entries");
}

// Shifted exponentials of a Linear cloud: e_i = exp(s_i - smax) with
// s_i = theta . y_i + log m_i. Returns smax.
double tilt_weights(const ParticleCloud& c, const Eigen::VectorXd& theta, Eigen::VectorXd& e) {
  e = c.points * theta + c.masses.array().log().matrix();
  const double smax = e.maxCoeff();
  e = (e.array() - smax).exp().matrix();
  return smax;
}

}  // namespace

double growth_g(GrowthLaw law, double pi) {
  switch (law) {
    case GrowthLaw::Linear: return pi;
    case GrowthLaw::Saturating: return pi / (1.0 + pi);
    case GrowthLaw::Allee: return pi * pi / (1.0 + pi);
  }
  return pi;
}

double growth_h(GrowthLaw law, double pi) {
  if (!(pi > 0.0)) throw Error(Errc::OutOfDomain, "growth law h needs a positive density");
  switch (law) {
    case GrowthLaw::Linear: return std::log(pi);
    case GrowthLaw::Saturating: return pi - 1.0 + std::log(pi);
    case GrowthLaw::Allee: return 1.0 - 1.0 / pi + std::log(pi);
  }
  return std::log(pi);
}

double growth_h_inv(GrowthLaw law, double u) {
  switch (law) {
    case GrowthLaw::Linear: return std::exp(u);
    case GrowthLaw::Saturating: return lambert_w_of_exp(u + 1.0).values[0];
    case GrowthLaw::Allee: return 1.0 / lambert_w_of_exp(1.0 - u).values[0];
  }
  return std::exp(u);
}

double growth_G(GrowthLaw law, double pi) {
  switch (law) {
    case GrowthLaw::Linear: return pi;
    case GrowthLaw::Saturating: return pi + 0.5 * pi * pi;
    case GrowthLaw::Allee: return pi + std::log(pi);
  }
  return pi;
}

double growth_round_trip(GrowthLaw law, double u) { return std::abs(growth_h(law, growth_h_inv(law, u)) - u); }

ReplicatorSystem::ReplicatorSystem(int r, BaseMeasure base, GrowthLaw growth, RateMode rate_mode)
    : r_(r), base_(std::move(base)), growth_(growth), rate_mode_(rate_mode) {
  if (r < 2) throw Error(Errc::InvalidArgument, "latent dimension must be at least 2");
  if (r % 2 != 0) throw Error(Errc::OddRank, "latent dimension must be even");
  if (rate_mode_ == RateMode::ConstantRate && growth_ != GrowthLaw::Linear) {
    throw Error(Errc::InvalidArgument, "constant-rate mode requires linear growth");
  }
  if (auto* c = std::get_if<ParticleCloud>(&base_)) {
    if (c->points.cols() != r) throw Error(Errc::DimensionMismatch, "cloud points must have r columns");
    if (c->points.rows() == 0) throw Error(Errc::InvalidArgument, "cloud has no particles");
    if (c->masses.size() != c->points.rows()) throw Error(Errc::LengthMismatch, "one mass per particle required");
    if (!c->points.allFinite() || !c->masses.allFinite()) throw Error(Errc::NonFinite, "cloud has non-finite values");
    if (c->masses.minCoeff() <= 0.0) throw Error(Errc::InvalidArgument, "particle masses must be positive");
    offsets_.resize(c->masses.size());
    for (Eigen::Index i = 0; i < c->masses.size(); ++i) offsets_(i) = growth_h(growth_, c->masses(i));
  } else {
    const auto& p = std::get<ProductMarginals>(base_);
    if (static_cast<int>(p.marginals.size()) != r) {
      throw Error(Errc::DimensionMismatch, "product base needs one marginal per coordinate");
    }
    for (const auto& m : p.marginals) {
      if (m.kind == MarginalKind::Uniform && !(m.half_width > 0.0 && std::isfinite(m.half_width))) {
        throw Error(Errc::InvalidArgument, "uniform half width must be positive");
      }
    }
    if (growth_ != GrowthLaw::Linear) throw Error(Errc::InvalidArgument, "product bases support linear growth only");
  }
}

const ParticleCloud& ReplicatorSystem::cloud() const {
  if (!is_cloud()) throw Error(Errc::InvalidArgument, "system base is not a particle cloud");
  return std::get<ParticleCloud>(base_);
}

ReplicatorSystem ReplicatorSystem::with_rate_mode(RateMode mode) const {
  return ReplicatorSystem(r_, base_, growth_, mode);
}

double ReplicatorSystem::log_total(const Eigen::VectorXd& theta) const {
  require_theta(theta, r_);
  if (growth_ != GrowthLaw::Linear) throw Error(Errc::InvalidArgument, "log_total needs linear growth");
  if (const auto* c = std::get_if<ParticleCloud>(&base_)) {
    Eigen::VectorXd e;
    const double smax = tilt_weights(*c, theta, e);
    return smax + std::log(detail::pairwise_sum(e));
  }
  double acc = 0.0;
  const auto& p = std::get<ProductMarginals>(base_);
  for (int j = 0; j < r_; ++j) acc += marginal_terms(p.marginals[static_cast<std::size_t>(j)], theta(j)).l0;
  return acc;
}

Eigen::VectorXd ReplicatorSystem::densities(const Eigen::VectorXd& theta) const {
  require_theta(theta, r_);
  const auto& c = cloud();
  const Eigen::VectorXd u = c.points * theta + offsets_;
  Eigen::VectorXd pi(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) pi(i) = growth_h_inv(growth_, u(i));
  return pi;
}

double ReplicatorSystem::hamiltonian(const Eigen::VectorXd& theta) const {
  if (growth_ == GrowthLaw::Linear) {
    const double lp = log_total(theta);
    if (rate_mode_ == RateMode::ConstantRate) return lp;
    if (lp > kOverflowLog) throw Error(Errc::Overflow, "total population exceeds e^700");
    return std::exp(lp);
  }
  const Eigen::VectorXd pi = densities(theta);
  Eigen::VectorXd g(pi.size());
  for (Eigen::Index i = 0; i < pi.size(); ++i) g(i) = growth_G(growth_, pi(i));
  return detail::pairwise_sum(g);
}

Eigen::VectorXd ReplicatorSystem::gradient(const Eigen::VectorXd& theta) const {
  require_theta(theta, r_);
  if (growth_ != GrowthLaw::Linear) return detail::pairwise_weighted_rows(cloud().points, densities(theta));
  if (const auto* c = std::get_if<ParticleCloud>(&base_)) {
    Eigen::VectorXd e;
    const double smax = tilt_weights(*c, theta, e);
    const double s = detail::pairwise_sum(e);
    const Eigen::VectorXd m = detail::pairwise_weighted_rows(c->points, e);
    if (rate_mode_ == RateMode::ConstantRate) return m / s;
    const double lp = smax + std::log(s);
    if (lp > kOverflowLog) throw Error(Errc::Overflow, "total population exceeds e^700");
    return m * std::exp(smax);
  }
  const auto& p = std::get<ProductMarginals>(base_);
  Eigen::VectorXd d(r_);
  double lp = 0.0;
  for (int j = 0; j < r_; ++j) {
    const auto t = marginal_terms(p.marginals[static_cast<std::size_t>(j)], theta(j));
    d(j) = t.l1;
    lp += t.l0;
  }
  if (rate_mode_ == RateMode::ConstantRate) return d;
  if (lp > kOverflowLog) throw Error(Errc::Overflow, "total population exceeds e^700");
  return std::exp(lp) * d;
}

Eigen::MatrixXd ReplicatorSystem::hessian(const Eigen::VectorXd& theta) const {
  require_theta(theta, r_);
  if (growth_ != GrowthLaw::Linear) {
    const Eigen::VectorXd pi = densities(theta);
    Eigen::VectorXd g(pi.size());
    for (Eigen::Index i = 0; i < pi.size(); ++i) g(i) = growth_g(growth_, pi(i));
    return detail::pairwise_weighted_gram(cloud().points, g);
  }
  if (const auto* c = std::get_if<ParticleCloud>(&base_)) {
    Eigen::VectorXd e;
    const double smax = tilt_weights(*c, theta, e);
    const double s = detail::pairwise_sum(e);
    const Eigen::MatrixXd second = detail::pairwise_weighted_gram(c->points, e);
    if (rate_mode_ == RateMode::ConstantRate) {
      const Eigen::VectorXd mean = detail::pairwise_weighted_rows(c->points, e) / s;
      Eigen::MatrixXd cov = second / s - mean * mean.transpose();
      return 0.5 * (cov + cov.transpose());
    }
    if (smax + std::log(s) > kOverflowLog) throw Error(Errc::Overflow, "total population exceeds e^700");
    return second * std::exp(smax);
  }
  const auto& p = std::get<ProductMarginals>(base_);
  Eigen::VectorXd d1(r_);
  Eigen::VectorXd d2(r_);
  double lp = 0.0;
  for (int j = 0; j < r_; ++j) {
    const auto t = marginal_terms(p.marginals[static_cast<std::size_t>(j)], theta(j));
    d1(j) = t.l1;
    d2(j) = t.l2;
    lp += t.l0;
  }
  Eigen::MatrixXd hess = d2.asDiagonal();
  if (rate_mode_ == RateMode::ConstantRate) return hess;
  if (lp > kOverflowLog) throw Error(Errc::Overflow, "total population exceeds e^700");
  hess += d1 * d1.transpose();
  return std::exp(lp) * hess;
}

bool ReplicatorSystem::degenerate_support() const {
  if (!is_cloud()) return false;
  const auto& pts = std::get<ParticleCloud>(base_).points;
  if (pts.rows() < r_) return true;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(pts);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) <= 1e-12 * std::max(1.0, sv(0));
}

double hamiltonian(const ReplicatorSystem& sys, const Eigen::VectorXd& theta) { return sys.hamiltonian(theta); }

Eigen::VectorXd grad_hamiltonian(const ReplicatorSystem& sys, const Eigen::VectorXd& theta) {
  return sys.gradient(theta);
}

Eigen::MatrixXd hess_hamiltonian(const ReplicatorSystem& sys, const Eigen::VectorXd& theta) {
  return sys.hessian(theta);
}

Eigen::VectorXd apply_U(const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index k = 0; k + 1 < v.size(); k += 2) {
    out(k) = v(k + 1);
    out(k + 1) = -v(k);
  }
  return out;
}

Eigen::MatrixXd rotation_U(int r) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(r, r);
  for (int k = 0; k + 1 < r; k += 2) {
    u(k, k + 1) = 1.0;
    u(k + 1, k) = -1.0;
  }
  return u;
}

MetaSystem::MetaSystem(std::vector<ReplicatorSystem> patches, Eigen::MatrixXd mixing)
    : patches_(std::move(patches)), mixing_(std::move(mixing)), r_(0) {
  if (patches_.empty()) throw Error(Errc::InvalidArgument, "meta system needs at least one patch");
  r_ = patches_.front().dim();
  for (const auto& p : patches_) {
    if (p.dim() != r_) throw Error(Errc::DimensionMismatch, "patches must share the latent dimension");
  }
  const auto l = static_cast<Eigen::Index>(patches_.size());
  if (mixing_.rows() != l || mixing_.cols() != l) throw Error(Errc::DimensionMismatch, "mixing must be l x l");
  if (!mixing_.allFinite()) throw Error(Errc::NonFinite, "mixing has non-finite entries");
  if ((mixing_ - mixing_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(Errc::NotSymmetric, "mixing matrix must be symmetric");
  }
  if (mixing_.diagonal().minCoeff() <= 0.0 || mixing_.minCoeff() < 0.0) {
    throw Error(Errc::InvalidArgument, "mixing needs a positive diagonal and nonnegative entries");
  }
}

namespace {

void require_big_theta(const MetaSystem& meta, const Eigen::VectorXd& big_theta) {
  if (big_theta.size() != meta.total_dim()) {
    throw Error(Errc::DimensionMismatch, "stacked parameters have length " + std::to_string(big_theta.size()) +
                                             ", expected " + std::to_string(meta.total_dim()));
  }
}

}  // namespace

double meta_hamiltonian(const MetaSystem& meta, const Eigen::VectorXd& big_theta) {
  require_big_theta(meta, big_theta);
  const int r = meta.dim();
  double h = 0.0;
  for (int i = 0; i < meta.patches(); ++i) h += meta.patch(i).hamiltonian(big_theta.segment(i * r, r));
  return h;
}

Eigen::VectorXd meta_gradient(const MetaSystem& meta, const Eigen::VectorXd& big_theta) {
  require_big_theta(meta, big_theta);
  const int r = meta.dim();
  Eigen::VectorXd g(meta.total_dim());
  for (int i = 0; i < meta.patches(); ++i) g.segment(i * r, r) = meta.patch(i).gradient(big_theta.segment(i * r, r));
  return g;
}

Eigen::VectorXd meta_rhs(const MetaSystem& meta, const Eigen::VectorXd& big_theta) {
  const Eigen::VectorXd g = meta_gradient(meta, big_theta);
  const int r = meta.dim();
  const int l = meta.patches();
  std::vector<Eigen::VectorXd> rotated(static_cast<std::size_t>(l));
  for (int j = 0; j < l; ++j) rotated[static_cast<std::size_t>(j)] = apply_U(g.segment(j * r, r));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(meta.total_dim());
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < l; ++j) out.segment(i * r, r) += meta.mixing()(i, j) * rotated[static_cast<std::size_t>(j)];
  }
  return out;
}

Eigen::MatrixXd meta_operator(const MetaSystem& meta) {
  const int r = meta.dim();
  const int l = meta.patches();
  const Eigen::MatrixXd u = rotation_U(r);
  Eigen::MatrixXd k(l * r, l * r);
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < l; ++j) k.block(i * r, j * r, r, r) = meta.mixing()(i, j) * u;
  }
  return k;
}

}  // namespace discgame
