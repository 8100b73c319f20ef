#include "simplex.hpp"

#include <limits>
#include <vector>

#include "discgame/error.hpp"

namespace discgame::detail {

LpResult maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double tol) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (c.size() != n || b.size() != m) throw Error(Errc::DimensionMismatch, "LP dimensions disagree");
  if (m > 0 && b.minCoeff() < 0.0) throw Error(Errc::InvalidArgument, "LP right-hand side must be nonnegative");

  // Columns: n structural, m slack, then rhs. Last row holds reduced costs.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  t.topLeftCorner(m, n) = a;
  t.block(0, n, m, m).setIdentity();
  t.col(n + m).head(m) = b;
  t.row(m).head(n) = -c.transpose();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  LpResult res;
  const Eigen::Index max_pivots = 50 * (n + m) + 1000;
  while (true) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (t(m, j) < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (t(i, enter) > tol) {
        const double ratio = t(i, n + m) / t(i, enter);
        if (ratio < best - tol ||
            (ratio <= best + tol && leave >= 0 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          if (ratio < best) best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) {
      res.status = LpStatus::Unbounded;
      res.value = std::numeric_limits<double>::infinity();
      return res;
    }
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i != leave && t(i, enter) != 0.0) t.row(i) -= t(i, enter) * t.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
    if (++res.pivots > max_pivots) throw Error(Errc::NoConvergence, "simplex exceeded its pivot budget");
  }
  res.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto j = basis[static_cast<std::size_t>(i)];
    if (j < n) res.x(j) = t(i, n + m);
  }
  res.value = t(m, n + m);
  return res;
}

}  // namespace discgame::detail
