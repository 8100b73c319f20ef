#ifndef DISCGAME_IO_HPP
#define DISCGAME_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "discgame/dynamics.hpp"
#include "discgame/embedding.hpp"
#include "discgame/games.hpp"
#include "discgame/hamiltonian.hpp"

namespace discgame::io {

/// Plain numeric table with optional header names.
struct Table {
  std::vector<std::string> header;
  Eigen::MatrixXd values;
};

/// Parses CSV text. A first row containing any non-numeric field is taken
/// as the header. Throws Parse.
Table parse_csv(const std::string& text);
std::string format_csv(const Table& t);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// %.17g
std::string format_double(double v);

struct RawPayout {
  Eigen::MatrixXd entries;
  std::vector<std::string> labels;  // empty when the file has no header
};
RawPayout parse_payout_csv(const std::string& text);
RawPayout read_payout_csv(const std::string& path);
std::string format_payout_csv(const PayoutMatrix& f);

/// One column of weights, optionally headed.
Eigen::VectorXd parse_weights_csv(const std::string& text);
Eigen::VectorXd read_weights_csv(const std::string& path);
std::string format_weights_csv(const Eigen::VectorXd& w);

std::string format_embedding_json(const DiscEmbedding& e);
DiscEmbedding parse_embedding_json(const std::string& text);

struct SystemSpec {
  ReplicatorSystem system;
  std::optional<Eigen::VectorXd> theta0;
};
SystemSpec parse_system_json(const std::string& text);
std::string format_system_json(const ReplicatorSystem& sys, const std::optional<Eigen::VectorXd>& theta0 = {});

struct MetaSpec {
  MetaSystem meta;
  std::optional<Eigen::VectorXd> theta0;  // stacked
};
MetaSpec parse_meta_json(const std::string& text);

/// t, theta_1..theta_r, ybar_1..ybar_r, H
std::string format_trajectory_csv(const ParameterTrajectory& traj);
ParameterTrajectory parse_trajectory_csv(const std::string& text);

/// t, w_1..w_n
std::string format_weight_trajectory_csv(const WeightTrajectory& traj);

struct AnalysisReport {
  int rank = 0;
  std::vector<double> shares;
  bool origin_interior = false;
  std::optional<Eigen::VectorXd> equilibrium;
  std::vector<double> frequencies;
};
std::string format_report_json(const AnalysisReport& r);
AnalysisReport parse_report_json(const std::string& text);

/// p_star, alpha, gamma
std::string format_agents_csv(const std::vector<IpdAgent>& agents);
std::vector<IpdAgent> parse_agents_csv(const std::string& text);

}  // namespace discgame::io

#endif  // DISCGAME_IO_HPP
