#ifndef DISCGAME_HAMILTONIAN_HPP
#define DISCGAME_HAMILTONIAN_HPP

#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace discgame {

/// Weighted particles in latent space. masses are the initial densities of
/// the particles (unit quadrature weight each).
struct ParticleCloud {
  Eigen::MatrixXd points;  // m x r
  Eigen::VectorXd masses;  // m
};

enum class MarginalKind { Uniform, Laplace, Gaussian };

/// One coordinate of a separable base measure. half_width is used by the
/// uniform marginal only.
struct Marginal {
  MarginalKind kind = MarginalKind::Uniform;
  double half_width = 1.0;
};

struct ProductMarginals {
  std::vector<Marginal> marginals;
};

using BaseMeasure = std::variant<ParticleCloud, ProductMarginals>;

enum class GrowthLaw { Linear, Saturating, Allee };

/// LinearRate: Hamiltonian is the total population P (or its generalized
/// analogue). ConstantRate: Hamiltonian log P, Linear growth only.
enum class RateMode { LinearRate, ConstantRate };

/// Per-capita growth factor g(pi).
double growth_g(GrowthLaw law, double pi);
/// h with h'(pi) = 1 / g(pi).
double growth_h(GrowthLaw law, double pi);
/// Inverse of h; positive and increasing on the real line.
double growth_h_inv(GrowthLaw law, double u);
/// Antiderivative of h^{-1} in u, written in terms of pi = h^{-1}(u).
double growth_G(GrowthLaw law, double pi);
/// |h(h^{-1}(u)) - u|.
double growth_round_trip(GrowthLaw law, double u);

class ReplicatorSystem {
 public:
  /// Throws DimensionMismatch, OddRank, InvalidArgument, NonFinite.
  ReplicatorSystem(int r, BaseMeasure base, GrowthLaw growth = GrowthLaw::Linear,
                   RateMode rate_mode = RateMode::LinearRate);

  int dim() const { return r_; }
  const BaseMeasure& base() const { return base_; }
  GrowthLaw growth() const { return growth_; }
  RateMode rate_mode() const { return rate_mode_; }
  bool is_cloud() const { return std::holds_alternative<ParticleCloud>(base_); }
  /// Throws InvalidArgument for product bases.
  const ParticleCloud& cloud() const;

  /// Same base and growth with another rate mode.
  ReplicatorSystem with_rate_mode(RateMode mode) const;

  double hamiltonian(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& theta) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& theta) const;

  /// log P(theta) for Linear growth, in either rate mode.
  double log_total(const Eigen::VectorXd& theta) const;
  /// Particle densities pi_i(theta) = h^{-1}(theta . y_i + h(m_i)).
  Eigen::VectorXd densities(const Eigen::VectorXd& theta) const;

  /// True when the cloud lies in a hyperplane through the origin, so the
  /// Hessian is singular.
  bool degenerate_support() const;

 private:
  int r_;
  BaseMeasure base_;
  GrowthLaw growth_;
  RateMode rate_mode_;
  Eigen::VectorXd offsets_;  // h(m_i), cloud only
};

double hamiltonian(const ReplicatorSystem& sys, const Eigen::VectorXd& theta);
Eigen::VectorXd grad_hamiltonian(const ReplicatorSystem& sys, const Eigen::VectorXd& theta);
Eigen::MatrixXd hess_hamiltonian(const ReplicatorSystem& sys, const Eigen::VectorXd& theta);

/// v -> U v with U = blockdiag([[0, 1], [-1, 0]]).
Eigen::VectorXd apply_U(const Eigen::VectorXd& v);
/// The dense matrix U of dimension r.
Eigen::MatrixXd rotation_U(int r);

class MetaSystem {
 public:
  /// Throws DimensionMismatch, NotSymmetric, InvalidArgument.
  MetaSystem(std::vector<ReplicatorSystem> patches, Eigen::MatrixXd mixing);

  int patches() const { return static_cast<int>(patches_.size()); }
  int dim() const { return r_; }
  int total_dim() const { return r_ * patches(); }
  const ReplicatorSystem& patch(int i) const { return patches_[static_cast<std::size_t>(i)]; }
  const Eigen::MatrixXd& mixing() const { return mixing_; }

 private:
  std::vector<ReplicatorSystem> patches_;
  Eigen::MatrixXd mixing_;
  int r_;
};

/// Sum of patch Hamiltonians at the stacked parameters.
double meta_hamiltonian(const MetaSystem& meta, const Eigen::VectorXd& big_theta);
Eigen::VectorXd meta_gradient(const MetaSystem& meta, const Eigen::VectorXd& big_theta);
/// (M kron U) grad H.
Eigen::VectorXd meta_rhs(const MetaSystem& meta, const Eigen::VectorXd& big_theta);
/// Dense M kron U.
Eigen::MatrixXd meta_operator(const MetaSystem& meta);

}  // namespace discgame

#endif  // DISCGAME_HAMILTONIAN_HPP
