#include "discgame/payout.hpp"

#include <cmath>
#include <utility>

#include "discgame/error.hpp"

namespace discgame {

namespace {

void require_square_finite(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw Error(Errc::NonSquare, "payout matrix is " + std::to_string(m.rows()) + "x" +
                                     std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw Error(Errc::NonFinite, "payout matrix has non-finite entries");
}

}  // namespace

ValidationReport validate_skew(const Eigen::MatrixXd& m, double skew_tol) {
  require_square_finite(m);
  ValidationReport report;
  if (m.size() == 0) {
    report.ok = true;
    return report;
  }
  report.max_violation = (m + m.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  report.ok = report.max_violation <= skew_tol * scale;
  return report;
}

void require_distribution(const Eigen::VectorXd& v, double tol, const char* what) {
  if (!v.allFinite()) throw Error(Errc::NonFinite, std::string(what) + " has non-finite entries");
  if (v.size() > 0 && v.minCoeff() < 0.0) {
    throw Error(Errc::NotDistribution, std::string(what) + " has negative entries");
  }
  if (std::abs(v.sum() - 1.0) > tol) {
    throw Error(Errc::NotDistribution, std::string(what) + " does not sum to 1");
  }
}

PayoutMatrix::PayoutMatrix(Eigen::MatrixXd entries, std::vector<std::string> labels,
                           Eigen::VectorXd weights, double skew_tol)
    : entries_(std::move(entries)), labels_(std::move(labels)), weights_(std::move(weights)) {
  const auto report = validate_skew(entries_, skew_tol);
  if (!report.ok) {
    throw Error(Errc::NotSkew,
                "max |F_ij + F_ji| = " + std::to_string(report.max_violation) + " exceeds tolerance");
  }
  const int n = size();
  if (n == 0) throw Error(Errc::InvalidArgument, "empty payout matrix");
  if (labels_.empty()) {
    labels_.reserve(n);
    for (int i = 0; i < n; ++i) labels_.push_back("agent" + std::to_string(i));
  }
  if (static_cast<int>(labels_.size()) != n) {
    throw Error(Errc::LengthMismatch, "label count does not match matrix size");
  }
  if (weights_.size() == 0) weights_ = Eigen::VectorXd::Constant(n, 1.0 / n);
  if (weights_.size() != n) throw Error(Errc::LengthMismatch, "weight count does not match matrix size");
  require_distribution(weights_, 1e-12, "weights");
}

std::vector<int> PayoutMatrix::support() const {
  std::vector<int> idx;
  for (int i = 0; i < size(); ++i) {
    if (in_support(i)) idx.push_back(i);
  }
  return idx;
}

PayoutMatrix PayoutMatrix::with_weights(Eigen::VectorXd weights) const {
  return PayoutMatrix(entries_, labels_, std::move(weights), kDefaultSkewTol);
}

PayoutMatrix skew_symmetrize(const Eigen::MatrixXd& m, std::vector<std::string> labels,
                             Eigen::VectorXd weights) {
  require_square_finite(m);
  Eigen::MatrixXd s = 0.5 * (m - m.transpose());
  return PayoutMatrix(std::move(s), std::move(labels), std::move(weights), 0.0);
}

double mixed_payout(const PayoutMatrix& f, const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != f.size() || q.size() != f.size()) {
    throw Error(Errc::LengthMismatch, "strategy length does not match game size");
  }
  require_distribution(p, 1e-10, "p");
  require_distribution(q, 1e-10, "q");
  return p.dot(f.entries() * q);
}

}  // namespace discgame
