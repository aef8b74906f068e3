#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <random>

#include "doctest.h"
#include "mmhb/config.hpp"
#include "mmhb/discrete.hpp"
#include "mmhb/error.hpp"
#include "mmhb/experiments.hpp"
#include "mmhb/game.hpp"
#include "mmhb/io.hpp"

using namespace mmhb;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("mmhb_test_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no Error thrown");
  return ErrorKind::IOError;
}

}  // namespace

TEST_CASE("doubles survive a text round trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(u(rng) * 300));
    const std::string s = format_double(v);
    double back = 0.0;
    std::sscanf(s.c_str(), "%lf", &back);
    CHECK(back == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(std::numeric_limits<double>::denorm_min()) == "4.9406564584124654e-324");
}

TEST_CASE("trajectory csv and meta round trip") {
  auto dir = scratch("traj");
  auto g = random_quadratic(3, 2, 2, 1, 0.7, 5);
  auto t = run(*g, {0.05, -0.3, Scheme::Alternating}, VectorXd::LinSpaced(3, -1, 1),
               VectorXd::Constant(2, 0.3), 50);
  t.meta = {{"game", g->describe()}, {"h", 0.05}};
  write_trajectory(dir, "trajectory_discrete_alt", t);
  REQUIRE(fs::exists(dir / "trajectory_discrete_alt.csv"));
  REQUIRE(fs::exists(dir / "trajectory_discrete_alt.meta.json"));

  std::ifstream is(dir / "trajectory_discrete_alt.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header == "index,t,x_0,x_1,x_2,y_0,y_1");

  auto back = read_trajectory_csv(dir / "trajectory_discrete_alt.csv", 3, 2);
  REQUIRE(back.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(back.states[i].index == t.states[i].index);
    CHECK(back.states[i].t == t.states[i].t);
    CHECK(std::memcmp(back.states[i].x.data(), t.states[i].x.data(), 3 * sizeof(double)) == 0);
    CHECK(std::memcmp(back.states[i].y.data(), t.states[i].y.data(), 2 * sizeof(double)) == 0);
  }
  CHECK(read_json(dir / "trajectory_discrete_alt.meta.json") == t.meta);
  CHECK_THROWS_AS(read_trajectory_csv(dir / "trajectory_discrete_alt.csv", 2, 2), Error);
}

TEST_CASE("quadratic game JSON round trip") {
  auto dir = scratch("quad");
  auto g = random_quadratic(4, 3, 2, 2, 0.3, 9);
  save_quadratic(dir / "g.json", *g);
  auto h = load_quadratic(dir / "g.json");
  CHECK(h->hx() == g->hx());
  CHECK(h->hy() == g->hy());
  CHECK(h->c() == g->c());

  json bad = quadratic_to_json(*g);
  bad["C"][0].erase(0);
  CHECK(kind_of([&] { quadratic_from_json(bad); }) == ErrorKind::DimensionMismatch);
  json asym = quadratic_to_json(*g);
  asym["Hx"][0][1] = 5.0;
  CHECK_THROWS_AS(quadratic_from_json(asym), Error);
  CHECK(kind_of([&] { load_quadratic(dir / "missing.json"); }) == ErrorKind::IOError);
}

TEST_CASE("csv table") {
  auto dir = scratch("csv");
  CsvTable t{{"beta", "h", "abscissa"}, {{"0.5", "0.001", "-3"}, {"-0.5", "0.002", ""}}};
  write_csv(dir / "t.csv", t);
  auto back = read_csv(dir / "t.csv");
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.number(0, "abscissa") == -3.0);
  CHECK(back.column("h") == 1);
  CHECK(kind_of([&] { back.column("nope"); }) == ErrorKind::IOError);
  CHECK_THROWS_AS(back.number(1, "abscissa"), Error);

  std::ofstream(dir / "ragged.csv") << "a,b\n1,2\n3\n";
  CHECK_THROWS_AS(read_csv(dir / "ragged.csv"), Error);
}

TEST_CASE("config parsing") {
  const fs::path base = ".";
  json doc = {{"experiment", "simulate"},
              {"game", {{"builtin", "bilinear"}, {"params", {{"A", {{2.0}}}}}}},
              {"params", {{"h", {{"start", 0.01}, {"stop", 0.03}, {"count", 3}}},
                          {"beta", {-0.5, 0.5}},
                          {"schemes", {"sim", "alt"}}}},
              {"init", {{"x0", {1.0}}, {"y0", {1.0}}}},
              {"steps", 10}};
  auto cfg = parse_config(doc, base);
  CHECK(cfg.h.size() == 3);
  CHECK(cfg.h[1] == doctest::Approx(0.02));
  CHECK(cfg.beta == std::vector<double>{-0.5, 0.5});
  CHECK(cfg.schemes.size() == 2);
  CHECK(cfg.game->n() == 1);

  auto broken = [&](const std::string& ptr, const json& v) {
    json d = doc;
    d[json::json_pointer(ptr)] = v;
    return kind_of([&] { parse_config(d, base); });
  };
  CHECK(broken("/steps", 0) == ErrorKind::ConfigError);
  CHECK(broken("/params/beta", 1.0) == ErrorKind::ConfigError);
  CHECK(broken("/params/h", -0.1) == ErrorKind::ConfigError);
  CHECK(broken("/params/schemes", json::array({"both"})) == ErrorKind::ConfigError);
  CHECK(broken("/init/x0", json::array({1.0, 2.0})) == ErrorKind::ConfigError);
  CHECK(broken("/typo", 1) == ErrorKind::ConfigError);
  CHECK(broken("/game/builtin", "nope") == ErrorKind::ConfigError);
  CHECK(broken("/experiment", "nope") == ErrorKind::ConfigError);
  CHECK(broken("/model", "adam") == ErrorKind::ConfigError);

  try {
    parse_config_text("{\n  \"a\": 1,\n  \"b\": }\n", "cfg.json");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
    CHECK(std::string(e.what()).find("cfg.json:3:") != std::string::npos);
  }
}

TEST_CASE("config seeds and game sources") {
  auto dir = scratch("cfg");
  save_quadratic(dir / "g.json", *random_quadratic(2, 2, 1, 1, 0.2, 1));
  json doc = {{"experiment", "rates"},
              {"game", {{"quadratic", "g.json"}}},
              {"params", {{"h", 0.01}, {"beta", 0.1}}},
              {"init", {{"seed", 4}, {"scale", 2.0}}},
              {"steps", 5}};
  auto cfg = parse_config(doc, dir);
  auto p = initial_point(cfg);
  CHECK(p.x.size() == 2);
  CHECK(initial_point(parse_config(doc, dir)).x == p.x);
  CHECK(initial_point(parse_config(doc, dir, 5)).x != p.x);

  json rq = doc;
  rq["game"] = {{"random_quadratic",
                 {{"n", 3}, {"m", 3}, {"rank_x", 1}, {"rank_y", 1}, {"alpha", 0.5}, {"seed", 2}}}};
  auto a = parse_config(rq, dir);
  auto b = parse_config(rq, dir, 2);
  auto c = parse_config(rq, dir, 3);
  auto qa = std::dynamic_pointer_cast<const QuadraticGame>(a.game);
  auto qb = std::dynamic_pointer_cast<const QuadraticGame>(b.game);
  auto qc = std::dynamic_pointer_cast<const QuadraticGame>(c.game);
  CHECK(qa->c() == qb->c());
  CHECK(qa->c() != qc->c());
}

TEST_CASE("rate fit") {
  std::vector<double> d;
  for (int k = 0; k < 200; ++k) d.push_back(3.0 * std::exp(-0.02 * k));
  auto f = fit_rate(d, 0.5);
  CHECK(f.slope == doctest::Approx(-0.02).epsilon(1e-9));
  CHECK(f.decay_rate == doctest::Approx(0.02).epsilon(1e-9));
  CHECK(f.points == 100);
  d[150] = 0.0;
  d[160] = std::numeric_limits<double>::quiet_NaN();
  auto g = fit_rate(d, 0.5);
  CHECK(g.points == 98);
  CHECK(g.slope == doctest::Approx(-0.02).epsilon(1e-9));
}
