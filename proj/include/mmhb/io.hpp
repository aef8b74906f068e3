#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmhb/discrete.hpp"
#include "mmhb/game.hpp"

namespace mmhb {

namespace fs = std::filesystem;

// 17 significant digits, so doubles round-trip exactly.
std::string format_double(double v);

// Header `index,t,x_0..x_{n-1},y_0..y_{m-1}`.
void write_trajectory_csv(const fs::path& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const fs::path& path, int n, int m);
// Writes <stem>.csv and <stem>.meta.json next to each other.
void write_trajectory(const fs::path& dir, const std::string& stem, const Trajectory& traj);

nlohmann::json quadratic_to_json(const QuadraticGame& g);
std::shared_ptr<QuadraticGame> quadratic_from_json(const nlohmann::json& j);
std::shared_ptr<QuadraticGame> load_quadratic(const fs::path& path);
void save_quadratic(const fs::path& path, const QuadraticGame& g);

void write_json(const fs::path& path, const nlohmann::json& j);
nlohmann::json read_json(const fs::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

void write_csv(const fs::path& path, const CsvTable& table);
CsvTable read_csv(const fs::path& path);

}  // namespace mmhb
