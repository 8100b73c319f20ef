#ifndef DISCGAME_SRC_PAIRWISE_HPP
#define DISCGAME_SRC_PAIRWISE_HPP

#include <cstddef>

#include <Eigen/Dense>

namespace discgame::detail {

// Pairwise (cascade) reduction: leaf(lo, hi) sums a short run directly and
// runs are combined in a fixed binary tree, so the result depends only on n.
template <class T, class Leaf>
T pairwise_reduce(Eigen::Index lo, Eigen::Index hi, const Leaf& leaf) {
  constexpr Eigen::Index kLeaf = 64;
  if (hi - lo <= kLeaf) return leaf(lo, hi);
  const Eigen::Index mid = lo + (hi - lo) / 2;
  T left = pairwise_reduce<T>(lo, mid, leaf);
  left += pairwise_reduce<T>(mid, hi, leaf);
  return left;
}

inline double pairwise_sum(const Eigen::VectorXd& v) {
  return pairwise_reduce<double>(0, v.size(), [&](Eigen::Index lo, Eigen::Index hi) {
    double acc = 0.0;
    for (Eigen::Index i = lo; i < hi; ++i) acc += v(i);
    return acc;
  });
}

// Y^T w with rows of Y as particles.
inline Eigen::VectorXd pairwise_weighted_rows(const Eigen::MatrixXd& y, const Eigen::VectorXd& w) {
  if (y.rows() == 0) return Eigen::VectorXd::Zero(y.cols());
  return pairwise_reduce<Eigen::VectorXd>(0, y.rows(), [&](Eigen::Index lo, Eigen::Index hi) {
    return Eigen::VectorXd(y.middleRows(lo, hi - lo).transpose() * w.segment(lo, hi - lo));
  });
}

// Y^T diag(w) Y.
inline Eigen::MatrixXd pairwise_weighted_gram(const Eigen::MatrixXd& y, const Eigen::VectorXd& w) {
  if (y.rows() == 0) return Eigen::MatrixXd::Zero(y.cols(), y.cols());
  return pairwise_reduce<Eigen::MatrixXd>(0, y.rows(), [&](Eigen::Index lo, Eigen::Index hi) {
    const auto block = y.middleRows(lo, hi - lo);
    return Eigen::MatrixXd(block.transpose() * w.segment(lo, hi - lo).asDiagonal() * block);
  });
}

}  // namespace discgame::detail

#endif  // DISCGAME_SRC_PAIRWISE_HPP
