#pragma once

#include <utility>
#include <vector>

#include "json.hpp"
#include "mmhb/discrete.hpp"
#include "mmhb/game.hpp"

namespace mmhb {

struct SlopeSegment {
  std::size_t index = 0;
  double slope = 0.0;
  double ds = 0.0;
};

struct SlopeReport {
  double avg_slope = 0.0;
  double total_length = 0.0;
  std::vector<std::pair<long, double>> cumulative;
  std::vector<SlopeSegment> per_segment;
};

// ‖gx‖² + ‖gy‖²
double slope_at(const Game& game, const Point& p);

struct AvgSlopeOptions {
  double tail_fraction = 1.0;  // integrate over the final fraction of the states
  bool keep_segments = false;
  bool with_cumulative = false;
};

SlopeReport avg_slope(const Game& game, const Trajectory& traj, const AvgSlopeOptions& opts = {});

// Running mean of slope_at over states 1..t; one entry per recorded step after the initial state.
std::vector<std::pair<long, double>> cumulative_avg_slope(const Game& game, const Trajectory& traj);

nlohmann::json to_json(const SlopeReport& r);

}  // namespace mmhb
