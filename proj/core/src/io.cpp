#include "discgame/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "discgame/error.hpp"
#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

namespace discgame::io {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_number(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::string format_vector(const Eigen::VectorXd& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v(i));
  }
  return out + "]";
}

std::string format_vector(const std::vector<double>& v) {
  return format_vector(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
}

std::string format_matrix(const Eigen::MatrixXd& m) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += i ? ",\n    " : "\n    ";
    out += format_vector(Eigen::VectorXd(m.row(i).transpose()));
  }
  return out + (m.rows() ? "\n  ]" : "]");
}

std::string quote(const std::string& s) { return json(s).dump(); }

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, std::string("invalid JSON: ") + e.what());
  }
}

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, std::string(what) + ": " + e.what());
  }
}

Eigen::VectorXd to_vector(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd to_matrix(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw Error(Errc::Parse, "ragged matrix in JSON");
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
  }
  return m;
}

GrowthLaw parse_growth(const std::string& s) {
  if (s == "linear") return GrowthLaw::Linear;
  if (s == "saturating") return GrowthLaw::Saturating;
  if (s == "allee") return GrowthLaw::Allee;
  throw Error(Errc::Parse, "unknown growth law '" + s + "'");
}

RateMode parse_rate(const std::string& s) {
  if (s == "linear") return RateMode::LinearRate;
  if (s == "constant") return RateMode::ConstantRate;
  throw Error(Errc::Parse, "unknown rate mode '" + s + "'");
}

const char* growth_name(GrowthLaw g) {
  switch (g) {
    case GrowthLaw::Linear: return "linear";
    case GrowthLaw::Saturating: return "saturating";
    case GrowthLaw::Allee: return "allee";
  }
  return "linear";
}

ReplicatorSystem system_from_json(const json& j) {
  const int r = j.at("r").get<int>();
  const json& base = j.at("base");
  // "type" may be omitted when the keys make it obvious
  const std::string type = base.contains("type")       ? base.at("type").get<std::string>()
                           : base.contains("marginals") ? std::string("product")
                                                        : std::string("cloud");
  const GrowthLaw growth = parse_growth(j.value("growth", std::string("linear")));
  const RateMode rate = parse_rate(j.value("rate_mode", std::string("linear")));
  if (type == "cloud") {
    ParticleCloud c;
    c.points = to_matrix(base.at("points"));
    c.masses = base.contains("masses") ? to_vector(base.at("masses"))
                                       : Eigen::VectorXd::Constant(c.points.rows(), 1.0 / std::max<Eigen::Index>(1, c.points.rows()));
    return ReplicatorSystem(r, std::move(c), growth, rate);
  }
  if (type == "product") {
    ProductMarginals p;
    for (const auto& m : base.at("marginals")) {
      const std::string kind = m.at("kind").get<std::string>();
      Marginal mg;
      if (kind == "uniform") {
        mg.kind = MarginalKind::Uniform;
        mg.half_width = m.value("half_width", 1.0);
      } else if (kind == "laplace") {
        mg.kind = MarginalKind::Laplace;
      } else if (kind == "gaussian") {
        mg.kind = MarginalKind::Gaussian;
      } else {
        throw Error(Errc::Parse, "unknown marginal kind '" + kind + "'");
      }
      p.marginals.push_back(mg);
    }
    return ReplicatorSystem(r, std::move(p), growth, rate);
  }
  throw Error(Errc::Parse, "unknown base type '" + type + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Table parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  Table t;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (!parse_number(fields[k], row[k])) numeric = false;
    }
    if (!numeric) {
      if (!first) throw Error(Errc::Parse, "non-numeric field on line " + std::to_string(line_no));
      t.header = fields;
    } else {
      if (!rows.empty() && row.size() != rows.front().size()) {
        throw Error(Errc::Parse, "line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                                     " fields, expected " + std::to_string(rows.front().size()));
      }
      rows.push_back(std::move(row));
    }
    first = false;
  }
  const std::size_t cols = rows.empty() ? t.header.size() : rows.front().size();
  if (!t.header.empty() && !rows.empty() && t.header.size() != cols) {
    throw Error(Errc::Parse, "header and data widths differ");
  }
  t.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < cols; ++k) t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return t;
}

std::string format_csv(const Table& t) {
  std::string out;
  if (!t.header.empty()) {
    for (std::size_t k = 0; k < t.header.size(); ++k) out += (k ? "," : "") + t.header[k];
    out += '\n';
  }
  for (Eigen::Index i = 0; i < t.values.rows(); ++i) {
    for (Eigen::Index k = 0; k < t.values.cols(); ++k) {
      if (k) out += ',';
      out += format_double(t.values(i, k));
    }
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Parse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error(Errc::InvalidArgument, "failed writing '" + path + "'");
}

RawPayout parse_payout_csv(const std::string& text) {
  Table t = parse_csv(text);
  if (t.values.rows() != t.values.cols()) {
    throw Error(Errc::NonSquare, "payout table is " + std::to_string(t.values.rows()) + " x " +
                                     std::to_string(t.values.cols()));
  }
  return RawPayout{std::move(t.values), std::move(t.header)};
}

RawPayout read_payout_csv(const std::string& path) { return parse_payout_csv(read_file(path)); }

std::string format_payout_csv(const PayoutMatrix& f) { return format_csv(Table{f.labels(), f.entries()}); }

Eigen::VectorXd parse_weights_csv(const std::string& text) {
  const Table t = parse_csv(text);
  if (t.values.cols() != 1) throw Error(Errc::Parse, "weights file must have exactly one column");
  return t.values.col(0);
}

Eigen::VectorXd read_weights_csv(const std::string& path) { return parse_weights_csv(read_file(path)); }

std::string format_weights_csv(const Eigen::VectorXd& w) { return format_csv(Table{{"weight"}, w}); }

std::string format_embedding_json(const DiscEmbedding& e) {
  std::string out = "{\n";
  out += "  \"rank\": " + std::to_string(e.rank) + ",\n";
  out += "  \"omegas\": " + format_vector(e.omegas) + ",\n";
  out += "  \"coords\": " + format_matrix(e.coords) + ",\n";
  out += "  \"weights\": " + format_vector(e.weights) + ",\n";
  out += "  \"shares\": " + format_vector(e.shares) + ",\n";
  out += "  \"residual\": " + format_double(e.residual) + ",\n";
  out += "  \"labels\": [";
  for (std::size_t i = 0; i < e.labels.size(); ++i) out += (i ? ", " : "") + quote(e.labels[i]);
  out += "]\n}\n";
  return out;
}

DiscEmbedding parse_embedding_json(const std::string& text) {
  const json j = parse_json(text);
  return guarded("embedding JSON", [&] {
    DiscEmbedding e;
    e.rank = j.at("rank").get<int>();
    e.omegas = j.at("omegas").get<std::vector<double>>();
    e.coords = to_matrix(j.at("coords"));
    e.weights = to_vector(j.at("weights"));
    e.shares = j.at("shares").get<std::vector<double>>();
    e.residual = j.at("residual").get<double>();
    e.labels = j.at("labels").get<std::vector<std::string>>();
    if (e.rank % 2 != 0) throw Error(Errc::OddRank, "embedding rank must be even");
    if (static_cast<int>(e.omegas.size()) * 2 != e.rank) throw Error(Errc::Parse, "omegas do not match rank");
    if (e.coords.rows() > 0 && e.coords.cols() != e.rank) throw Error(Errc::Parse, "coords do not match rank");
    if (e.coords.rows() == 0) e.coords.resize(0, e.rank);
    if (e.weights.size() != e.coords.rows() || static_cast<Eigen::Index>(e.labels.size()) != e.coords.rows()) {
      throw Error(Errc::LengthMismatch, "coords, weights and labels disagree in length");
    }
    e.in_support.resize(static_cast<std::size_t>(e.weights.size()));
    for (Eigen::Index i = 0; i < e.weights.size(); ++i) e.in_support[static_cast<std::size_t>(i)] = e.weights(i) > 0.0;
    e.tied_blocks = find_tied_blocks(e.omegas);
    return e;
  });
}

SystemSpec parse_system_json(const std::string& text) {
  const json j = parse_json(text);
  return guarded("system JSON", [&] {
    std::optional<Eigen::VectorXd> theta0;
    if (j.contains("theta0")) theta0 = to_vector(j.at("theta0"));
    return SystemSpec{system_from_json(j), theta0};
  });
}

std::string format_system_json(const ReplicatorSystem& sys, const std::optional<Eigen::VectorXd>& theta0) {
  std::string out = "{\n  \"r\": " + std::to_string(sys.dim()) + ",\n  \"base\": ";
  if (sys.is_cloud()) {
    const auto& c = sys.cloud();
    out += "{\"type\": \"cloud\", \"points\": " + format_matrix(c.points) + ", \"masses\": " + format_vector(c.masses) + "}";
  } else {
    out += "{\"type\": \"product\", \"marginals\": [";
    const auto& p = std::get<ProductMarginals>(sys.base());
    for (std::size_t k = 0; k < p.marginals.size(); ++k) {
      const auto& m = p.marginals[k];
      out += k ? ", " : "";
      switch (m.kind) {
        case MarginalKind::Uniform:
          out += "{\"kind\": \"uniform\", \"half_width\": " + format_double(m.half_width) + "}";
          break;
        case MarginalKind::Laplace: out += "{\"kind\": \"laplace\"}"; break;
        case MarginalKind::Gaussian: out += "{\"kind\": \"gaussian\"}"; break;
      }
    }
    out += "]}";
  }
  out += ",\n  \"growth\": \"" + std::string(growth_name(sys.growth())) + "\"";
  out += ",\n  \"rate_mode\": \"" + std::string(sys.rate_mode() == RateMode::ConstantRate ? "constant" : "linear") + "\"";
  if (theta0) out += ",\n  \"theta0\": " + format_vector(*theta0);
  return out + "\n}\n";
}

MetaSpec parse_meta_json(const std::string& text) {
  const json j = parse_json(text);
  return guarded("meta JSON", [&] {
    std::vector<ReplicatorSystem> patches;
    for (const auto& p : j.at("patches")) patches.push_back(system_from_json(p));
    std::optional<Eigen::VectorXd> theta0;
    if (j.contains("theta0")) theta0 = to_vector(j.at("theta0"));
    return MetaSpec{MetaSystem(std::move(patches), to_matrix(j.at("mixing"))), theta0};
  });
}

std::string format_trajectory_csv(const ParameterTrajectory& traj) {
  const auto r = traj.thetas.cols();
  Table t;
  t.header.push_back("t");
  for (Eigen::Index k = 1; k <= r; ++k) t.header.push_back("theta_" + std::to_string(k));
  for (Eigen::Index k = 1; k <= r; ++k) t.header.push_back("ybar_" + std::to_string(k));
  t.header.push_back("H");
  t.values.resize(traj.times.size(), 2 * r + 2);
  t.values.col(0) = traj.times;
  t.values.middleCols(1, r) = traj.thetas;
  t.values.middleCols(1 + r, r) = traj.centroids;
  t.values.col(2 * r + 1) = traj.hamiltonians;
  return format_csv(t);
}

ParameterTrajectory parse_trajectory_csv(const std::string& text) {
  const Table t = parse_csv(text);
  const auto cols = t.values.cols();
  if (cols < 4 || cols % 2 != 0) throw Error(Errc::Parse, "trajectory CSV has an unexpected column count");
  const auto r = (cols - 2) / 2;
  ParameterTrajectory traj;
  traj.times = t.values.col(0);
  traj.thetas = t.values.middleCols(1, r);
  traj.centroids = t.values.middleCols(1 + r, r);
  traj.hamiltonians = t.values.col(cols - 1);
  return traj;
}

std::string format_weight_trajectory_csv(const WeightTrajectory& traj) {
  Table t;
  t.header.push_back("t");
  for (Eigen::Index k = 1; k <= traj.weights.cols(); ++k) t.header.push_back("w_" + std::to_string(k));
  t.values.resize(traj.times.size(), traj.weights.cols() + 1);
  t.values.col(0) = traj.times;
  t.values.rightCols(traj.weights.cols()) = traj.weights;
  return format_csv(t);
}

std::string format_report_json(const AnalysisReport& r) {
  std::string out = "{\n";
  out += "  \"rank\": " + std::to_string(r.rank) + ",\n";
  out += "  \"shares\": " + format_vector(r.shares) + ",\n";
  out += std::string("  \"origin_interior\": ") + (r.origin_interior ? "true" : "false") + ",\n";
  out += "  \"equilibrium\": " + (r.equilibrium ? format_vector(*r.equilibrium) : std::string("null")) + ",\n";
  out += "  \"frequencies\": " + format_vector(r.frequencies) + "\n}\n";
  return out;
}

AnalysisReport parse_report_json(const std::string& text) {
  const json j = parse_json(text);
  return guarded("report JSON", [&] {
    AnalysisReport r;
    r.rank = j.at("rank").get<int>();
    r.shares = j.at("shares").get<std::vector<double>>();
    r.origin_interior = j.at("origin_interior").get<bool>();
    if (!j.at("equilibrium").is_null()) r.equilibrium = to_vector(j.at("equilibrium"));
    r.frequencies = j.at("frequencies").get<std::vector<double>>();
    return r;
  });
}

std::string format_agents_csv(const std::vector<IpdAgent>& agents) {
  Table t;
  t.header = {"p_star", "alpha", "gamma"};
  t.values.resize(static_cast<Eigen::Index>(agents.size()), 3);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    t.values(row, 0) = agents[i].p_star;
    t.values(row, 1) = agents[i].alpha;
    t.values(row, 2) = agents[i].gamma;
  }
  return format_csv(t);
}

std::vector<IpdAgent> parse_agents_csv(const std::string& text) {
  const Table t = parse_csv(text);
  if (t.values.cols() != 3) throw Error(Errc::Parse, "agents CSV needs columns p_star, alpha, gamma");
  std::vector<IpdAgent> out;
  for (Eigen::Index i = 0; i < t.values.rows(); ++i) {
    IpdAgent a{t.values(i, 0), t.values(i, 1), t.values(i, 2)};
    validate(a);
    out.push_back(a);
  }
  return out;
}

}  // namespace discgame::io
