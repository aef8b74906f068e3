#include "mmhb/regularization.hpp"

#include <cmath>

#include "mmhb/error.hpp"

namespace mmhb {

double slope_at(const Game& game, const Point& p) {
  VectorXd gx, gy;
  game.grad(p, gx, gy);
  return gx.squaredNorm() + gy.squaredNorm();
}

SlopeReport avg_slope(const Game& game, const Trajectory& traj, const AvgSlopeOptions& opts) {
  if (traj.states.empty()) throw Error(ErrorKind::EmptyTrajectory, "avg_slope: no states");
  if (traj.states.size() < 2)
    throw Error(ErrorKind::EmptyTrajectory, "avg_slope: needs at least two states");
  if (!(opts.tail_fraction > 0.0 && opts.tail_fraction <= 1.0))
    throw Error(ErrorKind::InvalidParams, "tail_fraction must lie in (0, 1]");
  const std::size_t total = traj.states.size();
  std::size_t first = total - static_cast<std::size_t>(std::ceil(opts.tail_fraction * total));
  if (first + 1 >= total) first = total - 2;

  SlopeReport r;
  double num = 0.0;
  double prev_slope = slope_at(game, traj.point(first));
  for (std::size_t i = first + 1; i < total; ++i) {
    const State& a = traj.states[i - 1];
    const State& b = traj.states[i];
    const double ds = std::sqrt((b.x - a.x).squaredNorm() + (b.y - a.y).squaredNorm());
    const double sb = slope_at(game, traj.point(i));
    const double seg = 0.5 * (prev_slope + sb);
    num += seg * ds;
    r.total_length += ds;
    if (opts.keep_segments) r.per_segment.push_back({i - 1, seg, ds});
    prev_slope = sb;
  }
  r.avg_slope = r.total_length < 1e-12 ? prev_slope : num / r.total_length;
  if (opts.with_cumulative) r.cumulative = cumulative_avg_slope(game, traj);
  return r;
}

std::vector<std::pair<long, double>> cumulative_avg_slope(const Game& game,
                                                         const Trajectory& traj) {
  if (traj.states.empty()) throw Error(ErrorKind::EmptyTrajectory, "cumulative_avg_slope");
  std::vector<std::pair<long, double>> out;
  if (traj.states.size() == 1) {
    out.emplace_back(1, slope_at(game, traj.point(0)));
    return out;
  }
  out.reserve(traj.states.size() - 1);
  double sum = 0.0;
  for (std::size_t s = 1; s < traj.states.size(); ++s) {
    sum += slope_at(game, traj.point(s));
    out.emplace_back(static_cast<long>(s), sum / static_cast<double>(s));
  }
  return out;
}

nlohmann::json to_json(const SlopeReport& r) {
  nlohmann::json j = {{"avg_slope", r.avg_slope}, {"total_length", r.total_length}};
  if (!r.per_segment.empty()) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : r.per_segment)
      segs.push_back({{"index", s.index}, {"slope", s.slope}, {"ds", s.ds}});
    j["per_segment"] = segs;
  }
  return j;
}

}  // namespace mmhb
