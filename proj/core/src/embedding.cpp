#include "discgame/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "discgame/error.hpp"

namespace discgame {

namespace {

constexpr double kTieTol = 1e-10;

void fill_shares(DiscEmbedding& e) { e.shares = variance_shares(e); }

void fill_ties(DiscEmbedding& e) { e.tied_blocks = find_tied_blocks(e.omegas); }

}  // namespace

std::vector<std::vector<int>> find_tied_blocks(const std::vector<double>& omegas) {
  std::vector<std::vector<int>> out;
  if (omegas.empty()) return out;
  const double tol = kTieTol * omegas.front();
  std::vector<int> run{0};
  for (int k = 1; k < static_cast<int>(omegas.size()); ++k) {
    if (omegas[k - 1] - omegas[k] <= tol) {
      run.push_back(k);
    } else {
      if (run.size() > 1) out.push_back(run);
      run = {k};
    }
  }
  if (run.size() > 1) out.push_back(run);
  return out;
}

DiscEmbedding embed(const PayoutMatrix& f, double rank_tol) {
  const int n = f.size();
  const std::vector<int> support = f.support();
  const int s = static_cast<int>(support.size());

  Eigen::VectorXd sqrt_w(s);
  for (int a = 0; a < s; ++a) sqrt_w(a) = std::sqrt(f.weights()(support[a]));

  // A = D^{1/2} F D^{1/2} on the support; i*A is Hermitian.
  Eigen::MatrixXcd ia(s, s);
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) {
      const double v = sqrt_w(a) * f(support[a], support[b]) * sqrt_w(b);
      ia(a, b) = std::complex<double>(0.0, v);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(ia);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::EigenFailure, "Hermitian eigensolver did not converge");
  }
  const Eigen::VectorXd& mu = solver.eigenvalues();  // ascending
  const double omega_max = s > 0 ? mu.cwiseAbs().maxCoeff() : 0.0;
  if (!(omega_max > 0.0)) throw Error(Errc::ZeroOperator, "payout operator is identically zero");

  // A psi = i omega psi  <=>  (iA) psi = -omega psi: keep the negative half of the spectrum.
  std::vector<int> kept;
  double dropped_sq = 0.0;
  for (int k = 0; k < s; ++k) {
    if (mu(k) >= 0.0) break;
    const double omega = -mu(k);
    if (omega > rank_tol * omega_max) {
      kept.push_back(k);
    } else {
      dropped_sq += omega * omega;
    }
  }
  if (kept.empty()) throw Error(Errc::ZeroOperator, "no frequency above rank tolerance");

  DiscEmbedding e;
  e.rank = 2 * static_cast<int>(kept.size());
  e.coords = Eigen::MatrixXd::Zero(n, e.rank);
  e.weights = f.weights();
  e.labels = f.labels();
  e.in_support.resize(n);
  for (int i = 0; i < n; ++i) e.in_support[i] = f.in_support(i);
  e.residual = 2.0 * dropped_sq;

  for (int b = 0; b < static_cast<int>(kept.size()); ++b) {
    const double omega = -mu(kept[b]);
    e.omegas.push_back(omega);
    const Eigen::VectorXcd psi = solver.eigenvectors().col(kept[b]);
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(n);
    for (int a = 0; a < s; ++a) phi(support[a]) = psi(a) / sqrt_w(a);
    if (s < n) {
      // phi(x) = (1 / (i omega)) sum_j F(x, j) w_j phi_j
      const std::complex<double> inv(0.0, -1.0 / omega);
      for (int i = 0; i < n; ++i) {
        if (f.in_support(i)) continue;
        std::complex<double> acc = 0.0;
        for (int a = 0; a < s; ++a) acc += f(i, support[a]) * f.weights()(support[a]) * phi(support[a]);
        phi(i) = inv * acc;
      }
    }
    const double scale = std::sqrt(2.0 * omega);
    e.coords.col(2 * b) = scale * phi.real();
    e.coords.col(2 * b + 1) = scale * phi.imag();
  }
  fill_shares(e);
  fill_ties(e);
  return canonical_rotation(std::move(e));
}

DiscEmbedding truncate(const DiscEmbedding& e, int r_new) {
  if (r_new % 2 != 0) throw Error(Errc::OddRank, "truncation rank must be even");
  if (r_new > e.rank) throw Error(Errc::RankTooLarge, "truncation rank exceeds embedding rank");
  if (r_new <= 0) throw Error(Errc::InvalidArgument, "truncation rank must be positive");
  DiscEmbedding out = e;
  const int keep = r_new / 2;
  double tail = 0.0;
  for (int k = keep; k < e.blocks(); ++k) tail += e.omegas[k] * e.omegas[k];
  out.rank = r_new;
  out.omegas.resize(keep);
  out.coords = e.coords.leftCols(r_new);
  out.residual = e.residual + 2.0 * tail;
  fill_shares(out);
  fill_ties(out);
  return out;
}

double reconstruct(const DiscEmbedding& e, int i, int j) {
  if (i < 0 || j < 0 || i >= e.size() || j >= e.size()) {
    throw Error(Errc::IndexOutOfRange, "agent index out of range");
  }
  double acc = 0.0;
  for (int k = 0; k < e.blocks(); ++k) {
    acc += e.coords(i, 2 * k) * e.coords(j, 2 * k + 1) - e.coords(i, 2 * k + 1) * e.coords(j, 2 * k);
  }
  return acc;
}

Eigen::MatrixXd reconstruct_matrix(const DiscEmbedding& e) {
  const int n = e.size();
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = reconstruct(e, i, j);
  }
  return out;
}

std::vector<double> variance_shares(const DiscEmbedding& e) {
  double total = 0.5 * e.residual;
  for (double w : e.omegas) total += w * w;
  std::vector<double> shares;
  shares.reserve(e.omegas.size());
  for (double w : e.omegas) shares.push_back(total > 0.0 ? w * w / total : 0.0);
  return shares;
}

DiscEmbedding canonical_rotation(DiscEmbedding e) {
  const int n = e.size();
  for (int k = 0; k < e.blocks(); ++k) {
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      if (!e.in_support.empty() && !e.in_support[i]) continue;
      best = std::max(best, e.block(i, k).norm());
    }
    const double tie = 1e-12 * std::max(1.0, best);
    int ref = -1;
    for (int i = 0; i < n && ref < 0; ++i) {
      if (!e.in_support.empty() && !e.in_support[i]) continue;
      if (e.block(i, k).norm() >= best - tie) ref = i;
    }
    if (ref < 0 || best <= 0.0) continue;
    const Eigen::Vector2d y = e.block(ref, k);
    const double rho = y.norm();
    const double c = y(0) / rho;
    const double s = y(1) / rho;
    for (int i = 0; i < n; ++i) {
      const double a = e.coords(i, 2 * k);
      const double b = e.coords(i, 2 * k + 1);
      e.coords(i, 2 * k) = c * a + s * b;
      e.coords(i, 2 * k + 1) = -s * a + c * b;
    }
    e.coords(ref, 2 * k) = rho;
    e.coords(ref, 2 * k + 1) = 0.0;
  }
  return e;
}

double weighted_squared_error(const PayoutMatrix& f, const DiscEmbedding& e) {
  const int n = f.size();
  if (e.size() != n) throw Error(Errc::DimensionMismatch, "embedding and game sizes differ");
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = f(i, j) - reconstruct(e, i, j);
      acc += f.weights()(i) * f.weights()(j) * d * d;
    }
  }
  return acc;
}

EquivalenceClasses merge_equivalent(const PayoutMatrix& f, double merge_tol) {
  const int n = f.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dist = (f.entries().row(i) - f.entries().row(j)).cwiseAbs().maxCoeff();
      if (dist <= merge_tol) {
        const int a = find(i);
        const int b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  EquivalenceClasses out;
  out.class_of.assign(n, -1);
  std::vector<int> class_of_root(n, -1);
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    if (class_of_root[root] < 0) {
      class_of_root[root] = out.count();
      out.representatives.push_back(i);
      out.merged_weights.push_back(0.0);
    }
    out.class_of[i] = class_of_root[root];
    out.merged_weights[out.class_of[i]] += f.weights()(i);
  }
  return out;
}

PayoutMatrix merge_payout(const PayoutMatrix& f, const EquivalenceClasses& classes) {
  const int m = classes.count();
  Eigen::MatrixXd entries(m, m);
  std::vector<std::string> labels;
  Eigen::VectorXd weights(m);
  for (int a = 0; a < m; ++a) {
    labels.push_back(f.labels()[classes.representatives[a]]);
    weights(a) = classes.merged_weights[a];
    for (int b = 0; b < m; ++b) entries(a, b) = f(classes.representatives[a], classes.representatives[b]);
  }
  weights /= weights.sum();
  return PayoutMatrix(std::move(entries), std::move(labels), std::move(weights));
}

Eigen::MatrixXd BasisProjection::reconstruct_on_grid() const {
  return orthonormal * coefficients.entries() * orthonormal.transpose();
}

BasisProjection basis_project(const Eigen::MatrixXd& f_samples, const Eigen::MatrixXd& basis_values,
                              const Eigen::VectorXd& grid_weights) {
  const int m = static_cast<int>(f_samples.rows());
  if (f_samples.cols() != m) throw Error(Errc::NonSquare, "payout samples must be m x m");
  if (basis_values.rows() != m || grid_weights.size() != m) {
    throw Error(Errc::DimensionMismatch, "basis values and grid weights must have one row per grid point");
  }
  if (basis_values.cols() > m) throw Error(Errc::InvalidArgument, "more basis functions than grid points");
  require_distribution(grid_weights, 1e-10, "grid weights");

  // Modified Gram-Schmidt under <u, v> = sum_i w_i u_i v_i.
  auto inner = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    return (grid_weights.array() * u.array() * v.array()).sum();
  };
  std::vector<Eigen::VectorXd> kept;
  std::vector<int> kept_cols;
  for (int c = 0; c < basis_values.cols(); ++c) {
    Eigen::VectorXd v = basis_values.col(c);
    for (const auto& q : kept) v -= inner(q, v) * q;
    const double norm = std::sqrt(inner(v, v));
    if (norm < 1e-10) continue;
    kept.push_back(v / norm);
    kept_cols.push_back(c);
  }
  if (kept.empty()) throw Error(Errc::DegenerateBasis, "all basis columns are degenerate on the grid");

  const int b = static_cast<int>(kept.size());
  Eigen::MatrixXd basis(m, b);
  for (int c = 0; c < b; ++c) basis.col(c) = kept[c];
  const Eigen::MatrixXd weighted = grid_weights.asDiagonal() * basis;
  const Eigen::MatrixXd coeff = weighted.transpose() * f_samples * weighted;
  return BasisProjection{skew_symmetrize(coeff), basis, kept_cols};
}

}  // namespace discgame
