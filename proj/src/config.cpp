#include "mmhb/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "mmhb/error.hpp"
#include "mmhb/io.hpp"

namespace mmhb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw Error(ErrorKind::ConfigError, "field '" + field + "': " + msg);
}

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

long integer(const json& j, const std::string& field) {
  if (!j.is_number_integer() && !(j.is_number() && j.get<double>() == std::floor(j.get<double>())))
    fail(field, "expected an integer");
  return j.is_number_integer() ? j.get<long>() : static_cast<long>(j.get<double>());
}

std::string string(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a string");
  return j.get<std::string>();
}

bool boolean(const json& j, const std::string& field) {
  if (!j.is_boolean()) fail(field, "expected true or false");
  return j.get<bool>();
}

VectorXd vector(const json& j, const std::string& field) {
  if (j.is_number()) return VectorXd::Constant(1, j.get<double>());
  if (!j.is_array() || j.empty()) fail(field, "expected a nonempty array of numbers");
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = number(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

MatrixXd matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    fail(field, "expected a nonempty array of rows");
  const std::size_t cols = j[0].size();
  MatrixXd a(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) fail(field, "rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          number(j[r][c], field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return a;
}

std::string normalize_id(std::string s) {
  std::string out;
  for (char ch : s)
    if (ch != '-' && ch != '_' && ch != ' ') out.push_back(static_cast<char>(std::tolower(ch)));
  return out;
}

void check_keys(const json& obj, const std::string& field, std::set<std::string> allowed) {
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) fail(join(field, k), "unknown key");
}

double param_or(const json& params, const std::string& key, double dflt, const std::string& field) {
  if (!params.contains(key)) return dflt;
  return number(params.at(key), join(field, key));
}

}  // namespace

GamePtr build_game(const json& spec, const fs::path& base_dir) {
  const std::string field = "game";
  if (!spec.is_object()) fail(field, "expected an object");
  try {
    if (spec.contains("builtin")) {
      check_keys(spec, field, {"builtin", "params"});
      const std::string id = normalize_id(string(spec.at("builtin"), field + ".builtin"));
      const json params = spec.value("params", json::object());
      if (!params.is_object()) fail(field + ".params", "expected an object");
      const std::string pf = field + ".params";
      if (id == "bilinear") {
        MatrixXd a = params.contains("A") ? matrix(params.at("A"), pf + ".A") : MatrixXd::Ones(1, 1);
        return bilinear(a);
      }
      if (id == "xy") return xy_game();
      if (id == "negxy2") return neg_xy2();
      if (id == "limitcycle2d") return limit_cycle_2d();
      if (id == "appendixa1") return appendix_a1();
      if (id == "appendixa2") return appendix_a2();
      if (id == "examplei1")
        return example_i1(param_or(params, "a", 2.537, pf), param_or(params, "b", 0.0003, pf),
                          param_or(params, "c", 0.801, pf));
      fail(field + ".builtin", "unknown builtin game '" + spec.at("builtin").get<std::string>() + "'");
    }
    if (spec.contains("quadratic")) {
      check_keys(spec, field, {"quadratic"});
      const json& q = spec.at("quadratic");
      if (q.is_string()) {
        fs::path p = q.get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        return load_quadratic(p);
      }
      return quadratic_from_json(q);
    }
    if (spec.contains("random_quadratic")) {
      check_keys(spec, field, {"random_quadratic"});
      const json& r = spec.at("random_quadratic");
      const std::string rf = field + ".random_quadratic";
      if (!r.is_object()) fail(rf, "expected an object");
      check_keys(r, rf, {"n", "m", "rank_x", "rank_y", "alpha", "seed", "factor_scaling"});
      for (const char* k : {"n", "m", "rank_x", "rank_y", "alpha", "seed"})
        if (!r.contains(k)) fail(join(rf, k), "required");
      FactorScaling fsc = FactorScaling::UnitTrace;
      if (r.contains("factor_scaling")) {
        const std::string s = string(r.at("factor_scaling"), rf + ".factor_scaling");
        if (s == "raw") fsc = FactorScaling::Raw;
        else if (s == "unit-trace") fsc = FactorScaling::UnitTrace;
        else fail(rf + ".factor_scaling", "expected 'raw' or 'unit-trace'");
      }
      const long seed = integer(r.at("seed"), rf + ".seed");
      if (seed < 0) fail(rf + ".seed", "must be >= 0");
      return random_quadratic(static_cast<int>(integer(r.at("n"), rf + ".n")),
                              static_cast<int>(integer(r.at("m"), rf + ".m")),
                              static_cast<int>(integer(r.at("rank_x"), rf + ".rank_x")),
                              static_cast<int>(integer(r.at("rank_y"), rf + ".rank_y")),
                              number(r.at("alpha"), rf + ".alpha"),
                              static_cast<std::uint64_t>(seed), fsc);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    fail(field, e.what());
  }
  fail(field, "expected one of 'builtin', 'quadratic', 'random_quadratic'");
}

std::vector<double> expand_grid(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>()};
  if (j.is_array()) {
    if (j.empty()) fail(field, "grid must be nonempty");
    std::vector<double> v;
    for (std::size_t i = 0; i < j.size(); ++i)
      v.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
    return v;
  }
  if (j.is_object()) {
    check_keys(j, field, {"start", "stop", "count"});
    for (const char* k : {"start", "stop", "count"})
      if (!j.contains(k)) fail(join(field, k), "required");
    const double a = number(j.at("start"), field + ".start");
    const double b = number(j.at("stop"), field + ".stop");
    const long n = integer(j.at("count"), field + ".count");
    if (n < 1) fail(field + ".count", "must be >= 1");
    std::vector<double> v;
    for (long i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / static_cast<double>(n - 1));
    return v;
  }
  fail(field, "expected a number, an array, or {start, stop, count}");
}

json parse_config_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    std::ostringstream os;
    os << origin << ":" << line << ":" << col << ": invalid JSON (" << e.what() << ")";
    throw Error(ErrorKind::ConfigError, os.str());
  }
}

ExperimentConfig parse_config(const json& doc_in, const fs::path& base_dir,
                              std::optional<std::uint64_t> seed_override) {
  if (!doc_in.is_object()) fail("", "config must be a JSON object");
  json doc = doc_in;
  if (seed_override) {
    if (doc.contains("game") && doc["game"].is_object() && doc["game"].contains("random_quadratic") &&
        doc["game"]["random_quadratic"].is_object())
      doc["game"]["random_quadratic"]["seed"] = *seed_override;
    if (doc.contains("init") && doc["init"].is_object() && doc["init"].contains("seed"))
      doc["init"]["seed"] = *seed_override;
  }
  check_keys(doc, "", {"experiment", "description", "game", "params", "init", "steps", "out",
                       "model", "algorithm", "adam", "integrator", "transient", "warmup",
                       "tail_fraction", "cumulative_stride", "fit_fraction",
                       "require_convergence", "write_trajectories", "name"});

  ExperimentConfig cfg;
  cfg.raw = doc;
  if (!doc.contains("experiment")) fail("experiment", "required");
  cfg.experiment = string(doc.at("experiment"), "experiment");
  static const std::set<std::string> kinds = {"simulate", "compare-models", "heatmap", "rates",
                                              "slopes", "optimal-beta", "repro"};
  if (!kinds.count(cfg.experiment)) fail("experiment", "unknown experiment '" + cfg.experiment + "'");
  if (cfg.experiment == "repro") {
    if (!doc.contains("name")) fail("name", "required for repro");
    string(doc.at("name"), "name");
    return cfg;
  }

  if (!doc.contains("game")) fail("game", "required");
  cfg.game = build_game(doc.at("game"), base_dir);

  const json params = doc.value("params", json::object());
  if (!params.is_object()) fail("params", "expected an object");
  check_keys(params, "params", {"h", "beta", "scheme", "schemes"});
  if (params.contains("h")) cfg.h = expand_grid(params.at("h"), "params.h");
  if (params.contains("beta")) cfg.beta = expand_grid(params.at("beta"), "params.beta");
  if (cfg.beta.empty()) cfg.beta = {0.0};
  for (double h : cfg.h)
    if (!(h > 0.0)) fail("params.h", "must be > 0");
  for (double b : cfg.beta)
    if (!(b > -1.0 && b < 1.0)) fail("params.beta", "must lie strictly inside (-1, 1)");
  auto scheme_of = [](const json& j, const std::string& f) {
    const std::string s = string(j, f);
    try {
      return scheme_from_string(s);
    } catch (const Error&) {
      fail(f, "expected 'sim' or 'alt'");
    }
  };
  if (params.contains("scheme")) cfg.schemes.push_back(scheme_of(params.at("scheme"), "params.scheme"));
  if (params.contains("schemes")) {
    const json& s = params.at("schemes");
    if (!s.is_array() || s.empty()) fail("params.schemes", "expected a nonempty array");
    for (std::size_t i = 0; i < s.size(); ++i)
      cfg.schemes.push_back(scheme_of(s[i], "params.schemes[" + std::to_string(i) + "]"));
  }
  if (cfg.schemes.empty()) cfg.schemes = {Scheme::Simultaneous};

  if (doc.contains("init")) {
    const json& in = doc.at("init");
    if (!in.is_object()) fail("init", "expected an object");
    check_keys(in, "init", {"x0", "y0", "seed", "scale"});
    if (in.contains("x0") != in.contains("y0")) fail("init", "x0 and y0 must be given together");
    if (in.contains("x0")) {
      cfg.init.x0 = vector(in.at("x0"), "init.x0");
      cfg.init.y0 = vector(in.at("y0"), "init.y0");
      if (cfg.init.x0->size() != cfg.game->n()) fail("init.x0", "length must equal the game's n");
      if (cfg.init.y0->size() != cfg.game->m()) fail("init.y0", "length must equal the game's m");
    } else if (in.contains("seed")) {
      const long s = integer(in.at("seed"), "init.seed");
      if (s < 0) fail("init.seed", "must be >= 0");
      cfg.init.seed = static_cast<std::uint64_t>(s);
    } else {
      fail("init", "needs x0/y0 or seed");
    }
    if (in.contains("scale")) cfg.init.scale = number(in.at("scale"), "init.scale");
  }

  if (doc.contains("steps")) {
    cfg.steps = integer(doc.at("steps"), "steps");
    if (cfg.steps < 1) fail("steps", "must be >= 1");
  }
  if (doc.contains("out")) cfg.out = string(doc.at("out"), "out");
  if (doc.contains("model")) {
    cfg.model = string(doc.at("model"), "model");
    if (cfg.model != "discrete" && cfg.model != "ode" && cfg.model != "both")
      fail("model", "expected 'discrete', 'ode' or 'both'");
  }
  if (doc.contains("algorithm")) {
    cfg.algorithm = string(doc.at("algorithm"), "algorithm");
    if (cfg.algorithm != "hb" && cfg.algorithm != "adam") fail("algorithm", "expected 'hb' or 'adam'");
  }
  if (doc.contains("adam")) {
    const json& a = doc.at("adam");
    if (!a.is_object()) fail("adam", "expected an object");
    check_keys(a, "adam", {"alpha", "beta1", "beta2", "epsilon"});
    cfg.adam.alpha = param_or(a, "alpha", cfg.adam.alpha, "adam");
    cfg.adam.beta1 = param_or(a, "beta1", cfg.adam.beta1, "adam");
    cfg.adam.beta2 = param_or(a, "beta2", cfg.adam.beta2, "adam");
    cfg.adam.epsilon = param_or(a, "epsilon", cfg.adam.epsilon, "adam");
    try {
      cfg.adam.validate();
    } catch (const Error& e) {
      fail("adam", e.what());
    }
  }
  if (doc.contains("integrator")) {
    const json& ig = doc.at("integrator");
    if (!ig.is_object()) fail("integrator", "expected an object");
    check_keys(ig, "integrator", {"method", "dt_ratio", "leading_index"});
    if (ig.contains("method")) {
      const std::string m = string(ig.at("method"), "integrator.method");
      if (m == "rk4") cfg.method = Method::RK4;
      else if (m == "euler") cfg.method = Method::Euler;
      else fail("integrator.method", "expected 'rk4' or 'euler'");
    }
    if (ig.contains("dt_ratio")) {
      cfg.dt_ratio = number(ig.at("dt_ratio"), "integrator.dt_ratio");
      if (!(cfg.dt_ratio > 0.0 && cfg.dt_ratio <= 1.0)) fail("integrator.dt_ratio", "must lie in (0, 1]");
    }
    if (ig.contains("leading_index")) {
      const std::string l = string(ig.at("leading_index"), "integrator.leading_index");
      if (l == "n+1") cfg.leading = LeadingIndex::NPlusOne;
      else if (l == "n") cfg.leading = LeadingIndex::N;
      else fail("integrator.leading_index", "expected 'n+1' or 'n'");
    }
  }
  if (doc.contains("transient")) cfg.transient = boolean(doc.at("transient"), "transient");
  if (doc.contains("warmup")) {
    const json& w = doc.at("warmup");
    if (!(w.is_string() && w.get<std::string>() == "auto")) {
      cfg.warmup = integer(w, "warmup");
      if (*cfg.warmup < 0) fail("warmup", "must be >= 0");
    }
  }
  if (doc.contains("tail_fraction")) {
    cfg.tail_fraction = number(doc.at("tail_fraction"), "tail_fraction");
    if (!(cfg.tail_fraction > 0.0 && cfg.tail_fraction <= 1.0)) fail("tail_fraction", "must lie in (0, 1]");
  }
  if (doc.contains("cumulative_stride")) {
    cfg.cumulative_stride = integer(doc.at("cumulative_stride"), "cumulative_stride");
    if (cfg.cumulative_stride < 1) fail("cumulative_stride", "must be >= 1");
  }
  if (doc.contains("fit_fraction")) {
    cfg.fit_fraction = number(doc.at("fit_fraction"), "fit_fraction");
    if (!(cfg.fit_fraction > 0.0 && cfg.fit_fraction <= 1.0)) fail("fit_fraction", "must lie in (0, 1]");
  }
  if (doc.contains("require_convergence"))
    cfg.require_convergence = boolean(doc.at("require_convergence"), "require_convergence");
  if (doc.contains("write_trajectories"))
    cfg.write_trajectories = boolean(doc.at("write_trajectories"), "write_trajectories");

  const bool dynamic = cfg.experiment == "simulate" || cfg.experiment == "compare-models" ||
                       cfg.experiment == "rates" || cfg.experiment == "slopes";
  if (dynamic) {
    if (cfg.h.empty() && cfg.algorithm != "adam") fail("params.h", "required");
    if (cfg.algorithm == "adam" && cfg.model != "discrete") fail("model", "adam runs are discrete only");
    if (cfg.steps < 1) fail("steps", "required and must be >= 1");
    if (!cfg.init.x0 && !cfg.init.seed) fail("init", "required");
  }
  if ((cfg.experiment == "heatmap" || cfg.experiment == "optimal-beta") && cfg.h.empty())
    fail("params.h", "required");
  return cfg;
}

ExperimentConfig load_config(const fs::path& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::ConfigError, "cannot read config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  const json doc = parse_config_text(ss.str(), path.string());
  return parse_config(doc, path.has_parent_path() ? path.parent_path() : fs::path("."),
                      seed_override);
}

Point initial_point(const ExperimentConfig& cfg) {
  if (cfg.init.x0) return {*cfg.init.x0, *cfg.init.y0};
  if (!cfg.init.seed) return {VectorXd::Zero(cfg.game->n()), VectorXd::Zero(cfg.game->m())};
  std::mt19937_64 rng(*cfg.init.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Point p{VectorXd(cfg.game->n()), VectorXd(cfg.game->m())};
  for (Eigen::Index i = 0; i < p.x.size(); ++i) p.x[i] = cfg.init.scale * nd(rng);
  for (Eigen::Index i = 0; i < p.y.size(); ++i) p.y[i] = cfg.init.scale * nd(rng);
  return p;
}

}  // namespace mmhb
