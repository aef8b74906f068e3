#include "mmhb/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mmhb/error.hpp"

namespace mmhb {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::IOError, "cannot write " + path.string());
  return os;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::IOError, "cannot read " + path.string());
  return is;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorKind::IOError, "not a number: '" + s + "'");
  return v;
}

}  // namespace

void write_trajectory_csv(const fs::path& path, const Trajectory& traj) {
  std::ofstream os = open_out(path);
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().x.size();
  const Eigen::Index m = traj.states.empty() ? 0 : traj.states.front().y.size();
  os << "index,t";
  for (Eigen::Index i = 0; i < n; ++i) os << ",x_" << i;
  for (Eigen::Index i = 0; i < m; ++i) os << ",y_" << i;
  os << '\n';
  for (const auto& s : traj.states) {
    os << s.index << ',' << format_double(s.t);
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_double(s.x[i]);
    for (Eigen::Index i = 0; i < m; ++i) os << ',' << format_double(s.y[i]);
    os << '\n';
  }
}

Trajectory read_trajectory_csv(const fs::path& path, int n, int m) {
  CsvTable t = read_csv(path);
  if (t.header.size() != static_cast<std::size_t>(2 + n + m) || t.header[0] != "index" ||
      t.header[1] != "t")
    throw Error(ErrorKind::IOError, "unexpected trajectory header in " + path.string());
  Trajectory tr;
  for (const auto& row : t.rows) {
    State s;
    s.index = static_cast<long>(parse_double(row.at(0)));
    s.t = parse_double(row.at(1));
    s.x.resize(n);
    s.y.resize(m);
    for (int i = 0; i < n; ++i) s.x[i] = parse_double(row.at(2 + i));
    for (int i = 0; i < m; ++i) s.y[i] = parse_double(row.at(2 + n + i));
    tr.states.push_back(std::move(s));
  }
  return tr;
}

void write_trajectory(const fs::path& dir, const std::string& stem, const Trajectory& traj) {
  write_trajectory_csv(dir / (stem + ".csv"), traj);
  write_json(dir / (stem + ".meta.json"), traj.meta);
}

namespace {

nlohmann::json matrix_json(const MatrixXd& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) r.push_back(a(i, j));
    rows.push_back(r);
  }
  return rows;
}

MatrixXd matrix_from(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols,
                     const char* name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw Error(ErrorKind::DimensionMismatch, std::string(name) + ": wrong number of rows");
  MatrixXd a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& r = j[i];
    if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != cols)
      throw Error(ErrorKind::DimensionMismatch, std::string(name) + ": wrong number of columns");
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!r[c].is_number())
        throw Error(ErrorKind::InvalidParams, std::string(name) + ": non-numeric entry");
      a(i, c) = r[c].get<double>();
    }
  }
  return a;
}

}  // namespace

nlohmann::json quadratic_to_json(const QuadraticGame& g) {
  return {{"n", g.n()},
          {"m", g.m()},
          {"Hx", matrix_json(g.hx())},
          {"Hy", matrix_json(g.hy())},
          {"C", matrix_json(g.c())}};
}

std::shared_ptr<QuadraticGame> quadratic_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("m"))
    throw Error(ErrorKind::InvalidParams, "quadratic game JSON needs n, m, Hx, Hy, C");
  const int n = j.at("n").get<int>(), m = j.at("m").get<int>();
  if (n < 1 || m < 1) throw Error(ErrorKind::DimensionMismatch, "n and m must be positive");
  return std::make_shared<QuadraticGame>(matrix_from(j.at("Hx"), n, n, "Hx"),
                                         matrix_from(j.at("Hy"), m, m, "Hy"),
                                         matrix_from(j.at("C"), n, m, "C"));
}

std::shared_ptr<QuadraticGame> load_quadratic(const fs::path& path) {
  return quadratic_from_json(read_json(path));
}

void save_quadratic(const fs::path& path, const QuadraticGame& g) {
  write_json(path, quadratic_to_json(g));
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream os = open_out(path);
  os << j.dump(2) << '\n';
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream is = open_in(path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::IOError, path.string() + ": " + e.what());
  }
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw Error(ErrorKind::IOError, "missing column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  return parse_double(rows.at(row).at(column(name)));
}

void write_csv(const fs::path& path, const CsvTable& table) {
  std::ofstream os = open_out(path);
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
  os << '\n';
  for (const auto& r : table.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream is = open_in(path);
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::IOError, "empty csv " + path.string());
  t.header = split(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto r = split(line);
    if (r.size() != t.header.size())
      throw Error(ErrorKind::IOError, "ragged csv row in " + path.string());
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace mmhb
