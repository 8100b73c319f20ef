#ifndef DISCGAME_PAYOUT_HPP
#define DISCGAME_PAYOUT_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace discgame {

inline constexpr double kDefaultSkewTol = 1e-8;

struct ValidationReport {
  double max_violation = 0.0;  // max |M_ij + M_ji|
  bool ok = false;
};

/// Checks skew symmetry relative to max(1, max|M|).
/// Throws NonSquare / NonFinite.
ValidationReport validate_skew(const Eigen::MatrixXd& m, double skew_tol = kDefaultSkewTol);

/// Finite payout table of a symmetric zero-sum game together with agent
/// labels and a reference measure over the agents.
///
/// Immutable once constructed. Construction validates skew symmetry (within
/// skew_tol, relative), finiteness and that weights form a distribution.
/// Missing labels become "agent0", "agent1", ...; missing weights become uniform.
class PayoutMatrix {
 public:
  explicit PayoutMatrix(Eigen::MatrixXd entries,
                        std::vector<std::string> labels = {},
                        Eigen::VectorXd weights = {},
                        double skew_tol = kDefaultSkewTol);

  int size() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  /// Agents with zero weight stay in the table but are excluded from the
  /// weighted operator.
  bool in_support(int i) const { return weights_(i) > 0.0; }
  std::vector<int> support() const;

  /// Same entries and labels, new reference measure.
  PayoutMatrix with_weights(Eigen::VectorXd weights) const;

 private:
  Eigen::MatrixXd entries_;
  std::vector<std::string> labels_;
  Eigen::VectorXd weights_;
};

/// (M - M^T) / 2. Exactly skew; idempotent on skew input.
PayoutMatrix skew_symmetrize(const Eigen::MatrixXd& m,
                             std::vector<std::string> labels = {},
                             Eigen::VectorXd weights = {});

/// p^T F q for mixed strategies p, q.
double mixed_payout(const PayoutMatrix& f, const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// Throws NotDistribution unless v is nonnegative and sums to 1 within tol.
void require_distribution(const Eigen::VectorXd& v, double tol, const char* what);

}  // namespace discgame

#endif  // DISCGAME_PAYOUT_HPP
