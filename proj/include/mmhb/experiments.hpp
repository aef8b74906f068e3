#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmhb/config.hpp"
#include "mmhb/discrete.hpp"

namespace mmhb {

namespace fs = std::filesystem;

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitAssumption = 3,
  kExitDivergence = 4,
};

struct RunResult {
  int exit_code = kExitOk;
  std::vector<fs::path> files;
  nlohmann::json summary = nlohmann::json::object();
};

struct RateFit {
  double slope = 0.0;  // d log(dist) / d step
  double decay_rate = 0.0;  // −slope
  std::size_t points = 0;
};

// Least squares of log(dist) on step over the final `fraction` of the samples; non-finite and
// non-positive distances are skipped.
RateFit fit_rate(const std::vector<double>& dist, double fraction = 0.5);

// Euclidean distance from every state to the point (x*, y*).
std::vector<double> distances_to(const Trajectory& traj, const Point& target);

RunResult cmd_simulate(const ExperimentConfig& cfg, const fs::path& out, int jobs = 1);
RunResult cmd_compare_models(const ExperimentConfig& cfg, const fs::path& out, int jobs = 1);
RunResult cmd_heatmap(const ExperimentConfig& cfg, const fs::path& out, int jobs = 1);
RunResult cmd_rates(const ExperimentConfig& cfg, const fs::path& out, int jobs = 1);
RunResult cmd_slopes(const ExperimentConfig& cfg, const fs::path& out, int jobs = 1);
RunResult cmd_optimal_beta(const ExperimentConfig& cfg, const fs::path& out, int jobs = 1);

std::vector<std::string> repro_names();
// The pinned configs of a named bundle, keyed by sub-directory. Throws UnknownExperiment.
std::vector<std::pair<std::string, nlohmann::json>> repro_configs(const std::string& name);
RunResult cmd_repro(const std::string& name, const fs::path& out, int jobs = 1);

// Dispatches on cfg.experiment; `repro` reads the bundle name from the document.
RunResult run_experiment(const ExperimentConfig& cfg, const fs::path& out, int jobs = 1);

}  // namespace mmhb
