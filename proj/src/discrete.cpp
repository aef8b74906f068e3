#include "mmhb/discrete.hpp"

#include <cmath>

#include "mmhb/error.hpp"

namespace mmhb {

const char* to_string(Scheme s) {
  return s == Scheme::Simultaneous ? "sim" : "alt";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "sim" || s == "simultaneous" || s == "Simultaneous") return Scheme::Simultaneous;
  if (s == "alt" || s == "alternating" || s == "Alternating") return Scheme::Alternating;
  throw Error(ErrorKind::InvalidParams, "unknown scheme '" + s + "'");
}

void HBParams::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorKind::InvalidParams, "h must be > 0");
  if (!(beta > -1.0 && beta < 1.0))
    throw Error(ErrorKind::InvalidParams, "beta must lie strictly inside (-1, 1)");
}

bool within_bounds(const Point& p) {
  if (!p.x.allFinite() || !p.y.allFinite()) return false;
  double mx = 0.0;
  if (p.x.size()) mx = std::max(mx, p.x.cwiseAbs().maxCoeff());
  if (p.y.size()) mx = std::max(mx, p.y.cwiseAbs().maxCoeff());
  return mx <= kDivergenceThreshold;
}

namespace {

void require_finite(const Point& p) {
  if (!p.x.allFinite() || !p.y.allFinite())
    throw Error(ErrorKind::NonFiniteState, "step produced a non-finite state");
}

Point raw_step(const Game& game, const HBParams& params, const Point& cur, const Point& prev,
               Scheme scheme) {
  VectorXd gx, gy;
  game.grad(cur, gx, gy);
  Point next;
  next.x = cur.x - params.h * gx + params.beta * (cur.x - prev.x);
  if (scheme == Scheme::Alternating) {
    VectorXd gx2;
    game.grad({next.x, cur.y}, gx2, gy);
  }
  next.y = cur.y + params.h * gy + params.beta * (cur.y - prev.y);
  return next;
}

}  // namespace

Point step_sim_hb(const Game& game, const HBParams& params, const Point& current,
                  const Point& previous) {
  game.check_dims(previous);
  Point next = raw_step(game, params, current, previous, Scheme::Simultaneous);
  require_finite(next);
  return next;
}

Point step_alt_hb(const Game& game, const HBParams& params, const Point& current,
                  const Point& previous) {
  game.check_dims(previous);
  Point next = raw_step(game, params, current, previous, Scheme::Alternating);
  require_finite(next);
  return next;
}

Point step_hb(const Game& game, const HBParams& params, const Point& current,
              const Point& previous) {
  return params.scheme == Scheme::Simultaneous ? step_sim_hb(game, params, current, previous)
                                               : step_alt_hb(game, params, current, previous);
}

Trajectory run(const Game& game, const HBParams& params, const VectorXd& x0, const VectorXd& y0,
               long steps) {
  params.validate();
  if (steps < 1) throw Error(ErrorKind::InvalidParams, "steps must be >= 1");
  Point cur{x0, y0};
  game.check_dims(cur);
  Trajectory tr;
  tr.meta = {{"kind", "discrete"},
             {"algorithm", "heavy-ball"},
             {"scheme", to_string(params.scheme)},
             {"h", params.h},
             {"beta", params.beta},
             {"steps", steps},
             {"game", game.describe()}};
  tr.states.reserve(static_cast<std::size_t>(steps) + 1);
  tr.states.push_back({0, 0.0, cur.x, cur.y});
  Point prev = cur;
  for (long k = 1; k <= steps; ++k) {
    Point next = raw_step(game, params, cur, prev, params.scheme);
    if (!next.x.allFinite() || !next.y.allFinite()) {
      tr.diverged = true;
      break;
    }
    tr.states.push_back({k, k * params.h, next.x, next.y});
    if (!within_bounds(next)) {
      tr.diverged = true;
      break;
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  tr.meta["diverged"] = tr.diverged;
  return tr;
}

void AdamParams::validate() const {
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidParams, "adam alpha must be > 0");
  if (!(beta1 > -1.0 && beta1 < 1.0))
    throw Error(ErrorKind::InvalidParams, "adam beta1 must lie in (-1, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0))
    throw Error(ErrorKind::InvalidParams, "adam beta2 must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidParams, "adam epsilon must be > 0");
}

Trajectory run_adam(const Game& game, const AdamParams& params, Scheme scheme,
                    const VectorXd& x0, const VectorXd& y0, long steps) {
  params.validate();
  if (steps < 1) throw Error(ErrorKind::InvalidParams, "steps must be >= 1");
  Point cur{x0, y0};
  game.check_dims(cur);
  Trajectory tr;
  tr.meta = {{"kind", "discrete"},
             {"algorithm", "adam"},
             {"scheme", to_string(scheme)},
             {"alpha", params.alpha},
             {"beta1", params.beta1},
             {"beta2", params.beta2},
             {"epsilon", params.epsilon},
             {"steps", steps},
             {"game", game.describe()}};
  tr.states.reserve(static_cast<std::size_t>(steps) + 1);
  tr.states.push_back({0, 0.0, cur.x, cur.y});

  VectorXd mx = VectorXd::Zero(game.n()), vx = VectorXd::Zero(game.n());
  VectorXd my = VectorXd::Zero(game.m()), vy = VectorXd::Zero(game.m());
  VectorXd gx, gy, unused;
  double b1t = 1.0, b2t = 1.0;
  for (long t = 1; t <= steps; ++t) {
    b1t *= params.beta1;
    b2t *= params.beta2;
    const double c1 = 1.0 - b1t, c2 = 1.0 - b2t;
    game.grad(cur, gx, gy);

    mx = params.beta1 * mx + (1.0 - params.beta1) * gx;
    vx = params.beta2 * vx + (1.0 - params.beta2) * gx.cwiseAbs2();
    VectorXd x_new = cur.x - params.alpha * ((mx / c1).array() /
                                             ((vx / c2).array().sqrt() + params.epsilon))
                                                .matrix();
    if (scheme == Scheme::Alternating) game.grad({x_new, cur.y}, unused, gy);

    my = params.beta1 * my + (1.0 - params.beta1) * gy;
    vy = params.beta2 * vy + (1.0 - params.beta2) * gy.cwiseAbs2();
    VectorXd y_new = cur.y + params.alpha * ((my / c1).array() /
                                             ((vy / c2).array().sqrt() + params.epsilon))
                                                .matrix();
    cur = {std::move(x_new), std::move(y_new)};
    require_finite(cur);
    tr.states.push_back({t, static_cast<double>(t), cur.x, cur.y});
    if (!within_bounds(cur)) {
      tr.diverged = true;
      break;
    }
  }
  tr.meta["diverged"] = tr.diverged;
  return tr;
}

}  // namespace mmhb
