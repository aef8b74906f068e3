#include "mmhb/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmhb/continuous.hpp"
#include "mmhb/error.hpp"
#include "mmhb/io.hpp"
#include "mmhb/parallel.hpp"
#include "mmhb/regularization.hpp"
#include "mmhb/spectral.hpp"

namespace mmhb {

using nlohmann::json;

RateFit fit_rate(const std::vector<double>& dist, double fraction) {
  RateFit fit;
  if (dist.empty()) return fit;
  const std::size_t n = dist.size();
  const std::size_t start =
      n - std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(fraction * n)));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (std::size_t i = start; i < n; ++i) {
    const double d = dist[i];
    if (!std::isfinite(d) || !(d > 0.0)) continue;
    const double x = static_cast<double>(i), y = std::log(d);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++k;
  }
  fit.points = k;
  if (k < 2) return fit;
  const double kd = static_cast<double>(k);
  const double den = kd * sxx - sx * sx;
  fit.slope = den == 0.0 ? 0.0 : (kd * sxy - sx * sy) / den;
  fit.decay_rate = -fit.slope;
  return fit;
}

std::vector<double> distances_to(const Trajectory& traj, const Point& target) {
  std::vector<double> d;
  d.reserve(traj.states.size());
  for (const auto& s : traj.states)
    d.push_back(std::sqrt((s.x - target.x).squaredNorm() + (s.y - target.y).squaredNorm()));
  return d;
}

namespace {

double state_distance(const State& a, const State& b) {
  return std::sqrt((a.x - b.x).squaredNorm() + (a.y - b.y).squaredNorm());
}

FieldKind limit_field(Scheme s) {
  return s == Scheme::Simultaneous ? FieldKind::ContinuousSim : FieldKind::ContinuousAlt;
}

FieldKind transient_field(Scheme s) {
  return s == Scheme::Simultaneous ? FieldKind::TransientSim : FieldKind::TransientAlt;
}

std::string f17(double v) { return format_double(v); }

bool left_nonneg_domain(const Game& game, const Trajectory& tr) {
  if (game.tag() != "neg-xy2") return false;
  for (const auto& s : tr.states)
    if (s.x[0] < 0.0) return true;
  return false;
}

Point origin_of(const Game& g) { return {VectorXd::Zero(g.n()), VectorXd::Zero(g.m())}; }

Point evaluation_point(const ExperimentConfig& cfg) {
  return (cfg.init.x0 || cfg.init.seed) ? initial_point(cfg) : origin_of(*cfg.game);
}

struct Combo {
  Scheme scheme;
  double beta;
  double h;
  std::string suffix;
};

std::vector<Combo> combos(const ExperimentConfig& cfg) {
  std::vector<Combo> out;
  const std::vector<double> hs = cfg.h.empty() ? std::vector<double>{0.0} : cfg.h;
  const bool multi = cfg.beta.size() * hs.size() > 1;
  for (Scheme s : cfg.schemes)
    for (std::size_t b = 0; b < cfg.beta.size(); ++b)
      for (std::size_t i = 0; i < hs.size(); ++i)
        out.push_back({s, cfg.beta[b], hs[i],
                       std::string(to_string(s)) +
                           (multi ? "_b" + std::to_string(b) + "_h" + std::to_string(i) : "")});
  return out;
}

Trajectory run_ode(const ExperimentConfig& cfg, FieldKind kind, const HBParams& p, long steps,
                   long index0, long n0, const Point& z0) {
  FieldSpec fs{kind, p, n0, cfg.leading};
  IntegratorConfig ic{cfg.method, cfg.dt_ratio * p.h, steps, index0};
  return integrate(*cfg.game, fs, ic, z0.x, z0.y);
}

}  // namespace

RunResult cmd_simulate(const ExperimentConfig& cfg, const fs::path& out, int jobs) {
  RunResult res;
  const Point z0 = initial_point(cfg);
  const auto cs = combos(cfg);
  struct Item {
    std::string stem;
    Trajectory tr;
  };
  std::vector<std::vector<Item>> items(cs.size());
  parallel_for(cs.size(), jobs, [&](std::size_t i) {
    const Combo& c = cs[i];
    const HBParams p{c.h, c.beta, c.scheme};
    if (cfg.model == "discrete" || cfg.model == "both") {
      Trajectory tr = cfg.algorithm == "adam"
                          ? run_adam(*cfg.game, cfg.adam, c.scheme, z0.x, z0.y, cfg.steps)
                          : run(*cfg.game, p, z0.x, z0.y, cfg.steps);
      items[i].push_back({(cfg.algorithm == "adam" ? "adam_" : "discrete_") + c.suffix, std::move(tr)});
    }
    if (cfg.model == "ode" || cfg.model == "both") {
      Trajectory tr = cfg.transient ? run_ode(cfg, transient_field(c.scheme), p, cfg.steps, 0, 0, z0)
                                    : run_ode(cfg, limit_field(c.scheme), p, cfg.steps, 0, 0, z0);
      items[i].push_back({"ode_" + c.suffix, std::move(tr)});
    }
  });

  json runs = json::array();
  bool all_diverged = true;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (auto& it : items[i]) {
      const bool left = left_nonneg_domain(*cfg.game, it.tr);
      if (cfg.game->tag() == "neg-xy2") it.tr.meta["left_domain"] = left;
      write_trajectory(out, "trajectory_" + it.stem, it.tr);
      res.files.push_back(out / ("trajectory_" + it.stem + ".csv"));
      res.files.push_back(out / ("trajectory_" + it.stem + ".meta.json"));
      all_diverged = all_diverged && it.tr.diverged;
      const Point last = it.tr.back();
      runs.push_back({{"file", "trajectory_" + it.stem + ".csv"},
                      {"scheme", to_string(cs[i].scheme)},
                      {"h", cs[i].h},
                      {"beta", cs[i].beta},
                      {"diverged", it.tr.diverged},
                      {"states", it.tr.size()},
                      {"final_norm", std::sqrt(last.x.squaredNorm() + last.y.squaredNorm())}});
    }
  }
  res.summary = {{"experiment", "simulate"}, {"game", cfg.game->describe()}, {"runs", runs}};
  write_json(out / "summary.json", res.summary);
  res.files.push_back(out / "summary.json");
  if (cfg.require_convergence && all_diverged) res.exit_code = kExitDivergence;
  return res;
}

RunResult cmd_compare_models(const ExperimentConfig& cfg, const fs::path& out, int jobs) {
  RunResult res;
  const Point z0 = initial_point(cfg);
  const auto cs = combos(cfg);
  struct Curves {
    long warmup = 0;
    std::vector<long> step;
    std::vector<double> o3, o2, tr;
    bool disc_diverged = false;
    std::vector<Trajectory> trajs;
  };
  std::vector<Curves> curves(cs.size());
  parallel_for(cs.size(), jobs, [&](std::size_t i) {
    const Combo& c = cs[i];
    const HBParams p{c.h, c.beta, c.scheme};
    Curves& cv = curves[i];
    Trajectory disc = run(*cfg.game, p, z0.x, z0.y, cfg.steps);
    cv.disc_diverged = disc.diverged;
    long n0 = cfg.warmup.value_or(warmup_steps(c.h, c.beta));
    if (n0 >= static_cast<long>(disc.size()) - 1)
      throw Error(ErrorKind::ConfigError,
                  "field 'warmup': warm-up of " + std::to_string(n0) + " steps leaves no comparison window");
    cv.warmup = n0;
    const long span = static_cast<long>(disc.size()) - 1 - n0;
    const Point start = disc.point(static_cast<std::size_t>(n0));
    Trajectory o3 = run_ode(cfg, limit_field(c.scheme), p, span, n0, 0, start);
    Trajectory o2 = run_ode(cfg, FieldKind::BaselineO2, p, span, n0, 0, start);
    Trajectory tr;
    if (cfg.transient) tr = run_ode(cfg, transient_field(c.scheme), p, n0 + span, 0, 0, z0);
    std::size_t rows = std::min(o3.size(), o2.size());
    if (cfg.transient) rows = std::min(rows, tr.size() - static_cast<std::size_t>(std::min<long>(n0, tr.size())));
    for (std::size_t k = 0; k < rows; ++k) {
      const State& d = disc.states[static_cast<std::size_t>(n0) + k];
      cv.step.push_back(d.index);
      cv.o3.push_back(state_distance(d, o3.states[k]));
      cv.o2.push_back(state_distance(d, o2.states[k]));
      if (cfg.transient) cv.tr.push_back(state_distance(d, tr.states[static_cast<std::size_t>(n0) + k]));
    }
    if (cfg.write_trajectories) {
      cv.trajs.push_back(std::move(disc));
      cv.trajs.push_back(std::move(o3));
      cv.trajs.push_back(std::move(o2));
      if (cfg.transient) cv.trajs.push_back(std::move(tr));
    }
  });

  json runs = json::array();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const Curves& cv = curves[i];
    CsvTable t;
    t.header = {"step", "dist_o3", "dist_o2"};
    if (cfg.transient) t.header.push_back("dist_transient");
    for (std::size_t k = 0; k < cv.step.size(); ++k) {
      std::vector<std::string> row = {std::to_string(cv.step[k]), f17(cv.o3[k]), f17(cv.o2[k])};
      if (cfg.transient) row.push_back(f17(cv.tr[k]));
      t.rows.push_back(std::move(row));
    }
    const std::string name = "distances_" + cs[i].suffix + ".csv";
    write_csv(out / name, t);
    res.files.push_back(out / name);
    if (cfg.write_trajectories) {
      static const char* tags[] = {"discrete", "o3", "o2", "transient"};
      for (std::size_t k = 0; k < cv.trajs.size(); ++k) {
        const std::string stem = std::string("trajectory_") + tags[k] + "_" + cs[i].suffix;
        write_trajectory(out, stem, cv.trajs[k]);
        res.files.push_back(out / (stem + ".csv"));
      }
    }
    json r = {{"file", name},
              {"scheme", to_string(cs[i].scheme)},
              {"h", cs[i].h},
              {"beta", cs[i].beta},
              {"warmup", cv.warmup},
              {"discrete_diverged", cv.disc_diverged},
              {"rows", cv.step.size()}};
    if (!cv.step.empty()) {
      r["terminal_dist_o3"] = cv.o3.back();
      r["terminal_dist_o2"] = cv.o2.back();
      if (cfg.transient) r["terminal_dist_transient"] = cv.tr.back();
    }
    runs.push_back(r);
  }
  res.summary = {{"experiment", "compare-models"},
                 {"game", cfg.game->describe()},
                 {"integrator", {{"method", to_string(cfg.method)}, {"dt_ratio", cfg.dt_ratio}}},
                 {"runs", runs}};
  write_json(out / "summary.json", res.summary);
  res.files.push_back(out / "summary.json");
  return res;
}

RunResult cmd_heatmap(const ExperimentConfig& cfg, const fs::path& out, int jobs) {
  RunResult res;
  const Point p = evaluation_point(cfg);
  const SecondDerivs blocks = cfg.game->second_derivs(p);
  std::vector<double> hs = cfg.h;
  std::vector<HeatmapCell> sim_cells;
  for (Scheme s : cfg.schemes) {
    auto cells = stability_heatmap(blocks, hs, cfg.beta, s, jobs);
    CsvTable t;
    t.header = {"beta", "h", "abscissa"};
    for (const auto& c : cells) t.rows.push_back({f17(c.beta), f17(c.h), f17(c.abscissa)});
    const std::string name = std::string("heatmap_") + to_string(s) + ".csv";
    write_csv(out / name, t);
    res.files.push_back(out / name);
    if (s == Scheme::Simultaneous || sim_cells.empty()) sim_cells = cells;
  }

  const Spectrum eigs = eigenvalues(jacobian_gf(blocks));
  const AssumptionReport a = check_assumptions(eigs);
  res.summary = {{"experiment", "heatmap"},
                 {"game", cfg.game->describe()},
                 {"assumption_interaction", a.interaction},
                 {"assumption_generic", a.generic}};
  // empirical boundary: smallest grid h whose abscissa is >= 0, per beta
  std::vector<double> sorted_h = hs;
  std::sort(sorted_h.begin(), sorted_h.end());
  CsvTable b;
  b.header = {"beta", "hmax", "h_sign_change"};
  for (std::size_t bi = 0; bi < cfg.beta.size(); ++bi) {
    double change = std::numeric_limits<double>::quiet_NaN();
    for (double h : sorted_h) {
      for (std::size_t k = 0; k < hs.size(); ++k) {
        const auto& c = sim_cells[bi * hs.size() + k];
        if (c.h == h && c.abscissa >= 0.0 && std::isnan(change)) change = h;
      }
    }
    std::string hm;
    if (a.interaction && a.generic) hm = f17(hmax_bound(eigs, cfg.beta[bi]));
    b.rows.push_back({f17(cfg.beta[bi]), hm, std::isnan(change) ? "" : f17(change)});
  }
  write_csv(out / "boundary.csv", b);
  res.files.push_back(out / "boundary.csv");
  if (!(a.interaction && a.generic)) {
    res.exit_code = kExitAssumption;
    res.summary["error"] = "AssumptionViolated: analytic step-size bound undefined for this game";
  }
  write_json(out / "summary.json", res.summary);
  res.files.push_back(out / "summary.json");
  return res;
}

RunResult cmd_rates(const ExperimentConfig& cfg, const fs::path& out, int jobs) {
  RunResult res;
  const Point z0 = initial_point(cfg);
  const double h = cfg.h.front(), beta = cfg.beta.front();
  const Point target = origin_of(*cfg.game);
  Trajectory runs[2];
  const Scheme schemes[2] = {Scheme::Simultaneous, Scheme::Alternating};
  parallel_for(2, jobs, [&](std::size_t i) {
    const HBParams p{h, beta, schemes[i]};
    runs[i] = cfg.model == "ode" ? run_ode(cfg, limit_field(schemes[i]), p, cfg.steps, 0, 0, z0)
                                 : run(*cfg.game, p, z0.x, z0.y, cfg.steps);
  });
  const auto ds = distances_to(runs[0], target);
  const auto da = distances_to(runs[1], target);
  CsvTable t;
  t.header = {"step", "dist_sim", "dist_alt"};
  const std::size_t rows = std::max(ds.size(), da.size());
  for (std::size_t k = 0; k < rows; ++k)
    t.rows.push_back({std::to_string(k), k < ds.size() ? f17(ds[k]) : "nan",
                      k < da.size() ? f17(da[k]) : "nan"});
  write_csv(out / "rates.csv", t);
  res.files.push_back(out / "rates.csv");

  const RateFit fs_ = fit_rate(ds, cfg.fit_fraction), fa = fit_rate(da, cfg.fit_fraction);
  json pred = json::object();
  const SecondDerivs blocks = cfg.game->second_derivs(target);
  const MatrixXd j = jacobian_gf(blocks);
  pred["abscissa_JS"] = spectral_abscissa(jacobian_sim(j, h, beta));
  pred["abscissa_JA"] = spectral_abscissa(jacobian_alt(blocks, h, beta));
  if (const auto* q = dynamic_cast<const QuadraticGame*>(cfg.game.get())) {
    for (CouplingShift s : {CouplingShift::Full, CouplingShift::FirstOrder}) {
      try {
        pred[std::string("alt_abscissa_") + to_string(s)] =
            alt_rate_prediction(*q, h, beta, s).predicted_abscissa;
      } catch (const Error& e) {
        pred[std::string("alt_abscissa_") + to_string(s)] = nullptr;
        pred["precondition"] = e.what();
      }
    }
  }
  res.summary = {{"experiment", "rates"},
                 {"game", cfg.game->describe()},
                 {"h", h},
                 {"beta", beta},
                 {"model", cfg.model == "ode" ? "ode" : "discrete"},
                 {"fit_fraction", cfg.fit_fraction},
                 {"rate_sim", fs_.decay_rate},
                 {"rate_alt", fa.decay_rate},
                 {"diverged_sim", runs[0].diverged},
                 {"diverged_alt", runs[1].diverged},
                 {"final_dist_sim", ds.back()},
                 {"final_dist_alt", da.back()},
                 {"prediction", pred}};
  write_json(out / "rates.json", res.summary);
  res.files.push_back(out / "rates.json");
  if (cfg.write_trajectories) {
    write_trajectory(out, "trajectory_sim", runs[0]);
    write_trajectory(out, "trajectory_alt", runs[1]);
  }
  if (cfg.require_convergence && runs[0].diverged && runs[1].diverged) res.exit_code = kExitDivergence;
  return res;
}

RunResult cmd_slopes(const ExperimentConfig& cfg, const fs::path& out, int jobs) {
  RunResult res;
  const Point z0 = initial_point(cfg);
  const double h = cfg.h.front();
  struct Cell {
    Scheme scheme;
    std::size_t bi;
    SlopeReport rep;
    bool diverged = false;
    bool left = false;
  };
  std::vector<Cell> cells;
  for (Scheme s : cfg.schemes)
    for (std::size_t b = 0; b < cfg.beta.size(); ++b) cells.push_back({s, b, {}, false, false});
  parallel_for(cells.size(), jobs, [&](std::size_t i) {
    Cell& c = cells[i];
    const HBParams p{h, cfg.beta[c.bi], c.scheme};
    Trajectory tr = cfg.model == "ode" ? run_ode(cfg, limit_field(c.scheme), p, cfg.steps, 0, 0, z0)
                                       : run(*cfg.game, p, z0.x, z0.y, cfg.steps);
    c.diverged = tr.diverged;
    c.left = left_nonneg_domain(*cfg.game, tr);
    AvgSlopeOptions o;
    o.tail_fraction = cfg.tail_fraction;
    o.with_cumulative = true;
    c.rep = avg_slope(*cfg.game, tr, o);
  });
  CsvTable t;
  t.header = {"beta", "scheme", "avg_slope"};
  json runs = json::array();
  for (const auto& c : cells) {
    t.rows.push_back({f17(cfg.beta[c.bi]), to_string(c.scheme), f17(c.rep.avg_slope)});
    CsvTable cum;
    cum.header = {"step", "avg_slope"};
    for (std::size_t k = 0; k < c.rep.cumulative.size(); ++k) {
      const auto& [step, v] = c.rep.cumulative[k];
      if (step % cfg.cumulative_stride == 0 || k + 1 == c.rep.cumulative.size())
        cum.rows.push_back({std::to_string(step), f17(v)});
    }
    const std::string name =
        std::string("cumulative_") + to_string(c.scheme) + "_b" + std::to_string(c.bi) + ".csv";
    write_csv(out / name, cum);
    res.files.push_back(out / name);
    json r = {{"beta", cfg.beta[c.bi]},
              {"scheme", to_string(c.scheme)},
              {"avg_slope", c.rep.avg_slope},
              {"total_length", c.rep.total_length},
              {"diverged", c.diverged},
              {"cumulative_file", name}};
    if (cfg.game->tag() == "neg-xy2") r["left_domain"] = c.left;
    runs.push_back(r);
  }
  write_csv(out / "slopes.csv", t);
  res.files.push_back(out / "slopes.csv");
  res.summary = {{"experiment", "slopes"},
                 {"game", cfg.game->describe()},
                 {"h", h},
                 {"tail_fraction", cfg.tail_fraction},
                 {"runs", runs}};
  write_json(out / "summary.json", res.summary);
  res.files.push_back(out / "summary.json");
  return res;
}

RunResult cmd_optimal_beta(const ExperimentConfig& cfg, const fs::path& out, int jobs) {
  RunResult res;
  const Point p = evaluation_point(cfg);
  const HBParams hp{cfg.h.front(), cfg.beta.front(), cfg.schemes.front()};
  const SpectralReport rep = spectral_report(*cfg.game, p, hp, jobs);
  write_json(out / "report.json", to_json(rep));
  res.files.push_back(out / "report.json");
  res.summary = {{"experiment", "optimal-beta"}, {"game", cfg.game->describe()}};
  if (!(rep.assumptions.interaction && rep.assumptions.generic)) {
    res.exit_code = kExitAssumption;
    res.summary["error"] = "AssumptionViolated: optimal momentum needs interaction dominance and Re(lambda) < 0";
    write_json(out / "summary.json", res.summary);
    res.files.push_back(out / "summary.json");
    return res;
  }
  const MatrixXd j = jacobian_gf(*cfg.game, p);
  CsvTable t;
  t.header = {"h", "beta_global", "abscissa_global", "binding_unique", "beta_binding"};
  json per_h = json::array();
  for (double h : cfg.h) {
    const OptimalBeta ob = optimal_beta(j, h, AbscissaMethod::Eigensolve, jobs);
    t.rows.push_back({f17(h), f17(ob.global), f17(ob.global_abscissa),
                      ob.binding_unique ? "1" : "0", ob.binding_unique ? f17(ob.binding_beta) : ""});
    json per = json::array();
    for (const auto& [z, b] : ob.per_eig) per.push_back({{"lambda", to_json(z)}, {"beta", b}});
    per_h.push_back({{"h", h}, {"global", ob.global}, {"per_eig", per}});
  }
  write_csv(out / "optimal_beta.csv", t);
  res.files.push_back(out / "optimal_beta.csv");
  res.summary["results"] = per_h;
  write_json(out / "summary.json", res.summary);
  res.files.push_back(out / "summary.json");
  return res;
}

// ------------------------------------------------------------------ repro registry

std::vector<std::string> repro_names() {
  return {"figure-1", "figure-2", "figure-3", "appendix-a", "appendix-h", "example-i1"};
}

std::vector<std::pair<std::string, json>> repro_configs(const std::string& name) {
  if (name == "figure-1") {
    return {{"xy",
             {{"experiment", "compare-models"},
              {"game", {{"builtin", "xy"}}},
              {"params", {{"h", 0.05}, {"beta", 0.0}, {"schemes", {"sim", "alt"}}}},
              {"init", {{"x0", {1.0}}, {"y0", {1.0}}}},
              {"steps", 2000},
              {"write_trajectories", true}}},
            {"bilinear-momentum",
             {{"experiment", "compare-models"},
              {"game", {{"builtin", "bilinear"}, {"params", {{"A", {{1.0}}}}}}},
              {"params", {{"h", 0.05}, {"beta", -0.5}, {"schemes", {"sim", "alt"}}}},
              {"init", {{"x0", {1.0}}, {"y0", {1.0}}}},
              {"steps", 2000},
              {"transient", true}}}};
  }
  if (name == "figure-2") {
    const json game = {{"random_quadratic",
                        {{"n", 20}, {"m", 20}, {"rank_x", 10}, {"rank_y", 10}, {"alpha", 0.05}, {"seed", 7}}}};
    return {{"heatmap",
             {{"experiment", "heatmap"},
              {"game", game},
              {"params",
               {{"h", {{"start", 1e-5}, {"stop", 4e-3}, {"count", 100}}},
                {"beta", {{"start", -0.9}, {"stop", 0.9}, {"count", 37}}},
                {"schemes", {"sim", "alt"}}}}}},
            {"optimal-beta",
             {{"experiment", "optimal-beta"},
              {"game", game},
              {"params", {{"h", {0.005, 0.01, 0.02}}, {"beta", 0.0}}}}}};
  }
  if (name == "figure-3") {
    const json betas = {-0.5, -0.3, 0.0, 0.3, 0.5};
    return {{"neg-xy2",
             {{"experiment", "slopes"},
              {"game", {{"builtin", "neg-xy2"}}},
              {"params", {{"h", 0.01}, {"beta", betas}, {"schemes", {"sim", "alt"}}}},
              {"init", {{"x0", {0.5}}, {"y0", {1.0}}}},
              {"steps", 20000},
              {"cumulative_stride", 10}}},
            {"limit-cycle-2d",
             {{"experiment", "slopes"},
              {"game", {{"builtin", "limit-cycle-2d"}}},
              {"params", {{"h", 0.001}, {"beta", betas}, {"schemes", {"sim", "alt"}}}},
              {"init", {{"x0", {1.0}}, {"y0", {1.0}}}},
              {"steps", 200000},
              {"tail_fraction", 0.5},
              {"cumulative_stride", 100}}}};
  }
  if (name == "appendix-a") {
    return {{"appendix-a1",
             {{"experiment", "compare-models"},
              {"game", {{"builtin", "appendix-a1"}}},
              {"params", {{"h", 0.001}, {"beta", -0.4}, {"schemes", {"sim", "alt"}}}},
              {"init", {{"x0", {0.5}}, {"y0", {0.5}}}},
              {"steps", 100000}}},
            {"appendix-a2",
             {{"experiment", "compare-models"},
              {"game", {{"builtin", "appendix-a2"}}},
              {"params", {{"h", 0.001}, {"beta", -0.5}, {"schemes", {"sim", "alt"}}}},
              {"init", {{"x0", {0.5}}, {"y0", {0.5}}}},
              {"steps", 10000}}}};
  }
  if (name == "appendix-h") {
    return {{"rates",
             {{"experiment", "rates"},
              {"game",
               {{"random_quadratic",
                 {{"n", 100}, {"m", 100}, {"rank_x", 50}, {"rank_y", 50}, {"alpha", 0.5}, {"seed", 1}}}}},
              {"params", {{"h", 0.01}, {"beta", 0.4}}},
              {"init", {{"seed", 11}}},
              {"steps", 2000}}}};
  }
  if (name == "example-i1") {
    return {{"rates",
             {{"experiment", "rates"},
              {"game", {{"builtin", "example-i1"}}},
              {"params", {{"h", 0.4}, {"beta", 0.2}}},
              {"init", {{"x0", {1.0}}, {"y0", {1.0}}}},
              {"steps", 1000}}}};
  }
  throw Error(ErrorKind::UnknownExperiment, "no repro bundle named '" + name + "'");
}

RunResult cmd_repro(const std::string& name, const fs::path& out, int jobs) {
  const auto configs = repro_configs(name);
  RunResult res;
  json parts = json::object();
  const fs::path root = out / name;
  for (const auto& [sub, doc] : configs) {
    const ExperimentConfig cfg = parse_config(doc, root);
    write_json(root / sub / "config.json", doc);
    RunResult r = run_experiment(cfg, root / sub, jobs);
    res.files.insert(res.files.end(), r.files.begin(), r.files.end());
    parts[sub] = r.summary;
    if (r.exit_code != kExitOk && res.exit_code == kExitOk) res.exit_code = r.exit_code;
  }
  res.summary = {{"experiment", "repro"}, {"name", name}, {"parts", parts}};
  write_json(root / "summary.json", res.summary);
  res.files.push_back(root / "summary.json");
  return res;
}

RunResult run_experiment(const ExperimentConfig& cfg, const fs::path& out, int jobs) {
  fs::create_directories(out);
  if (cfg.experiment == "simulate") return cmd_simulate(cfg, out, jobs);
  if (cfg.experiment == "compare-models") return cmd_compare_models(cfg, out, jobs);
  if (cfg.experiment == "heatmap") return cmd_heatmap(cfg, out, jobs);
  if (cfg.experiment == "rates") return cmd_rates(cfg, out, jobs);
  if (cfg.experiment == "slopes") return cmd_slopes(cfg, out, jobs);
  if (cfg.experiment == "optimal-beta") return cmd_optimal_beta(cfg, out, jobs);
  if (cfg.experiment == "repro") return cmd_repro(cfg.raw.at("name").get<std::string>(), out, jobs);
  throw Error(ErrorKind::ConfigError, "field 'experiment': unknown experiment '" + cfg.experiment + "'");
}

}  // namespace mmhb
