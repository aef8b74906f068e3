#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "mmhb/game.hpp"

namespace mmhb {

enum class Scheme { Simultaneous, Alternating };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct HBParams {
  double h = 0.01;
  double beta = 0.0;
  Scheme scheme = Scheme::Simultaneous;

  void validate() const;
};

struct State {
  long index = 0;
  double t = 0.0;
  VectorXd x;
  VectorXd y;
};

struct Trajectory {
  std::vector<State> states;
  bool diverged = false;
  nlohmann::json meta = nlohmann::json::object();

  std::size_t size() const { return states.size(); }
  Point point(std::size_t i) const { return {states[i].x, states[i].y}; }
  Point back() const { return point(states.size() - 1); }
};

constexpr double kDivergenceThreshold = 1e12;

// True when every entry is finite and the max-norm stays below the divergence threshold.
bool within_bounds(const Point& p);

Point step_sim_hb(const Game& game, const HBParams& params, const Point& current,
                  const Point& previous);
Point step_alt_hb(const Game& game, const HBParams& params, const Point& current,
                  const Point& previous);
// Dispatches on params.scheme.
Point step_hb(const Game& game, const HBParams& params, const Point& current,
              const Point& previous);

// Starts from zero velocity (previous = initial point). Records every state; stops early and
// sets `diverged` when a state is non-finite (not recorded) or exceeds the threshold (recorded).
Trajectory run(const Game& game, const HBParams& params, const VectorXd& x0, const VectorXd& y0,
               long steps);

struct AdamParams {
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

Trajectory run_adam(const Game& game, const AdamParams& params, Scheme scheme,
                    const VectorXd& x0, const VectorXd& y0, long steps);

}  // namespace mmhb
