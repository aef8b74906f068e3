#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmhb/continuous.hpp"
#include "mmhb/discrete.hpp"
#include "mmhb/game.hpp"

namespace mmhb {

namespace fs = std::filesystem;

struct InitSpec {
  std::optional<VectorXd> x0, y0;
  std::optional<std::uint64_t> seed;  // standard Gaussian init when x0/y0 are absent
  double scale = 1.0;  // standard deviation of the seeded init
};

struct ExperimentConfig {
  std::string experiment;
  nlohmann::json raw;  // the document after overrides

  GamePtr game;
  std::vector<double> h;
  std::vector<double> beta;
  std::vector<Scheme> schemes;
  InitSpec init;
  long steps = 0;
  std::optional<std::string> out;

  // simulate
  std::string model = "discrete";  // discrete | ode | both
  std::string algorithm = "hb";    // hb | adam
  AdamParams adam;
  // ode
  Method method = Method::RK4;
  double dt_ratio = 0.1;
  bool transient = false;
  LeadingIndex leading = LeadingIndex::NPlusOne;
  std::optional<long> warmup;  // compare-models; default ⌈4 ln h / ln|β|⌉
  // slopes
  double tail_fraction = 1.0;
  long cumulative_stride = 1;
  // rates
  double fit_fraction = 0.5;
  bool require_convergence = false;
  bool write_trajectories = false;
};

// Builds a game from {"builtin": id, "params": {...}}, {"quadratic": path | object} or
// {"random_quadratic": {...}}. Relative paths resolve against base_dir.
GamePtr build_game(const nlohmann::json& spec, const fs::path& base_dir);

// Expands a scalar, an array, or {"start","stop","count"}.
std::vector<double> expand_grid(const nlohmann::json& j, const std::string& field);

ExperimentConfig parse_config(const nlohmann::json& doc, const fs::path& base_dir,
                              std::optional<std::uint64_t> seed_override = std::nullopt);
ExperimentConfig load_config(const fs::path& path,
                             std::optional<std::uint64_t> seed_override = std::nullopt);
// Parses JSON text; syntax errors carry line and column.
nlohmann::json parse_config_text(const std::string& text, const std::string& origin);

Point initial_point(const ExperimentConfig& cfg);

}  // namespace mmhb
