#ifndef DISCGAME_EMBEDDING_HPP
#define DISCGAME_EMBEDDING_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "discgame/payout.hpp"

namespace discgame {

inline constexpr double kDefaultRankTol = 1e-10;

/// disc(a, b) = a1*b2 - a2*b1.
inline double disc(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a(0) * b(1) - a(1) * b(0);
}

/// Latent disc-game coordinates of a finite game.
///
/// Columns (2k, 2k+1) of `coords` hold disc game k; its frequency is
/// omegas[k]. Row i is the image y(i) of agent i. Agents outside the support
/// of the reference measure get coordinates from the eigenfunction
/// extension and are flagged in `in_support`.
struct DiscEmbedding {
  int rank = 0;
  std::vector<double> omegas;
  Eigen::MatrixXd coords;
  Eigen::VectorXd weights;
  std::vector<double> shares;
  double residual = 0.0;
  std::vector<std::string> labels;
  std::vector<bool> in_support;
  /// Runs of blocks whose frequencies agree within 1e-10 * omegas[0]. Their
  /// mutual rotation is not canonical.
  std::vector<std::vector<int>> tied_blocks;

  int blocks() const { return rank / 2; }
  int size() const { return static_cast<int>(coords.rows()); }
  Eigen::Vector2d block(int agent, int k) const {
    return coords.block<1, 2>(agent, 2 * k).transpose();
  }
};

/// Spectral disc-game embedding of F under its weights.
/// Throws ZeroOperator when every frequency falls below the tolerance and
/// EigenFailure if the eigensolver does not converge.
DiscEmbedding embed(const PayoutMatrix& f, double rank_tol = kDefaultRankTol);

/// Runs of consecutive frequencies equal within 1e-10 * omegas[0].
std::vector<std::vector<int>> find_tied_blocks(const std::vector<double>& omegas);

/// Keeps the leading r_new / 2 disc games. Throws OddRank, RankTooLarge.
DiscEmbedding truncate(const DiscEmbedding& e, int r_new);

/// Sum of disc games between agents i and j. Throws IndexOutOfRange.
double reconstruct(const DiscEmbedding& e, int i, int j);

/// All pairwise reconstructed payouts.
Eigen::MatrixXd reconstruct_matrix(const DiscEmbedding& e);

/// omega_k^2 / (sum_j omega_j^2 + residual / 2).
std::vector<double> variance_shares(const DiscEmbedding& e);

/// Rotates each disc so that its largest-norm supported agent (lowest
/// index on ties) sits on the positive first axis.
DiscEmbedding canonical_rotation(DiscEmbedding e);

/// Squared nu x nu error between F and the embedding's reconstruction,
/// computed directly from the entries.
double weighted_squared_error(const PayoutMatrix& f, const DiscEmbedding& e);

struct EquivalenceClasses {
  std::vector<int> class_of;
  std::vector<int> representatives;
  std::vector<double> merged_weights;

  int count() const { return static_cast<int>(representatives.size()); }
};

/// Groups agents whose payout rows agree within merge_tol in sup norm,
/// closed transitively.
EquivalenceClasses merge_equivalent(const PayoutMatrix& f, double merge_tol);

/// Game restricted to class representatives, carrying the merged weights.
PayoutMatrix merge_payout(const PayoutMatrix& f, const EquivalenceClasses& classes);

struct BasisProjection {
  PayoutMatrix coefficients;      // b' x b' skew coefficient matrix
  Eigen::MatrixXd orthonormal;    // m x b' basis values, orthonormal under grid weights
  std::vector<int> kept_columns;  // input columns that survived orthonormalization

  /// Payout reconstructed on the grid from the coefficient matrix.
  Eigen::MatrixXd reconstruct_on_grid() const;
};

/// Galerkin projection of a sampled payout onto a function basis.
/// Throws DegenerateBasis when every column is dropped.
BasisProjection basis_project(const Eigen::MatrixXd& f_samples, const Eigen::MatrixXd& basis_values,
                              const Eigen::VectorXd& grid_weights);

}  // namespace discgame

#endif  // DISCGAME_EMBEDDING_HPP
