#ifndef DISCGAME_SRC_SIMPLEX_HPP
#define DISCGAME_SRC_SIMPLEX_HPP

#include <Eigen/Dense>

namespace discgame::detail {

enum class LpStatus { Optimal, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  double value = 0.0;
  Eigen::VectorXd x;
  int pivots = 0;
};

// max c.x  s.t.  A x <= b, x >= 0, with b >= 0 so the slack basis is
// feasible. Dense tableau, Bland's rule.
LpResult maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                  double tol = 1e-9);

}  // namespace discgame::detail

#endif  // DISCGAME_SRC_SIMPLEX_HPP
