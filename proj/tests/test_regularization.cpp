#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "mmhb/discrete.hpp"
#include "mmhb/error.hpp"
#include "mmhb/game.hpp"
#include "mmhb/regularization.hpp"

using namespace mmhb;

namespace {

Trajectory from_points(const std::vector<Point>& pts) {
  Trajectory t;
  for (std::size_t i = 0; i < pts.size(); ++i)
    t.states.push_back({static_cast<long>(i), static_cast<double>(i), pts[i].x, pts[i].y});
  return t;
}

Trajectory every(const Trajectory& t, std::size_t stride) {
  Trajectory out;
  for (std::size_t i = 0; i < t.size(); i += stride) out.states.push_back(t.states[i]);
  return out;
}

}  // namespace

TEST_CASE("slope_at examples") {
  CHECK(slope_at(*xy_game(), make_point({1}, {1})) == doctest::Approx(2.0));
  CHECK(slope_at(*neg_xy2(), make_point({1}, {2})) == doctest::Approx(32.0));
  CHECK(slope_at(*xy_game(), make_point({0}, {0})) == 0.0);
}

TEST_CASE("avg_slope small trajectories") {
  auto g = xy_game();
  const Point p = make_point({0.3}, {-0.7});
  auto still = from_points({p, p, p});
  CHECK(avg_slope(*g, still).avg_slope == doctest::Approx(slope_at(*g, p)));
  CHECK(avg_slope(*g, still).total_length == 0.0);

  auto seg = from_points({make_point({1}, {1}), make_point({0}, {0})});
  auto r = avg_slope(*g, seg, {1.0, true, false});
  CHECK(r.avg_slope == doctest::Approx(1.0));
  CHECK(r.total_length == doctest::Approx(std::sqrt(2.0)));
  REQUIRE(r.per_segment.size() == 1);
  CHECK(r.per_segment[0].slope == doctest::Approx(1.0));

  Trajectory empty;
  try {
    avg_slope(*g, empty);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyTrajectory);
  }
  CHECK_THROWS_AS(avg_slope(*g, from_points({p})), Error);
  CHECK_THROWS_AS(avg_slope(*g, still, {0.0}), Error);
}

TEST_CASE("avg_slope trapezoid matches a hand-rolled sum") {
  auto g = limit_cycle_2d();
  auto t = run(*g, {1e-2, 0.3, Scheme::Alternating}, make_point({1}, {1}).x, make_point({1}, {1}).y,
               500);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double ds = std::hypot(t.states[i].x(0) - t.states[i - 1].x(0),
                                 t.states[i].y(0) - t.states[i - 1].y(0));
    num += 0.5 * (slope_at(*g, t.point(i)) + slope_at(*g, t.point(i - 1))) * ds;
    den += ds;
  }
  auto r = avg_slope(*g, t);
  CHECK(r.avg_slope == doctest::Approx(num / den).epsilon(1e-12));
  CHECK(r.avg_slope >= 0.0);
}

TEST_CASE("tail window uses only the final states") {
  auto g = xy_game();
  // slope near 4 on the first half and near 2 on the second
  std::vector<Point> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(make_point({2.0 + 0.01 * i}, {0}));
  for (int i = 0; i < 10; ++i) pts.push_back(make_point({std::sqrt(2.0)}, {0.01 * i}));
  auto t = from_points(pts);
  auto r = avg_slope(*g, t, {0.45});
  CHECK(r.avg_slope == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(avg_slope(*g, t).avg_slope > r.avg_slope);
}

TEST_CASE("cumulative series") {
  auto g = neg_xy2();
  const Point p = make_point({0.5}, {1.0});
  auto still = from_points({p, p, p, p});
  for (auto [step, v] : cumulative_avg_slope(*g, still)) CHECK(v == doctest::Approx(slope_at(*g, p)));

  auto t = run(*g, {1e-2, 0.3, Scheme::Simultaneous}, p.x, p.y, 400);
  auto c = cumulative_avg_slope(*g, t);
  REQUIRE(c.size() == t.size() - 1);
  CHECK(c.front().first == 1);
  CHECK(c.front().second == slope_at(*g, t.point(1)));
  double lo = 1e300, hi = -1e300;
  for (std::size_t s = 1; s < t.size(); ++s) {
    const double v = slope_at(*g, t.point(s));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    CHECK(c[s - 1].second >= lo - 1e-12);
    CHECK(c[s - 1].second <= hi + 1e-12);
    CHECK(c[s - 1].second >= 0.0);
  }
  CHECK(cumulative_avg_slope(*g, from_points({p})).size() == 1);
  CHECK_THROWS_AS(cumulative_avg_slope(*g, Trajectory{}), Error);
}

TEST_CASE("avg_slope barely moves when the recording stride halves") {
  struct Case {
    GamePtr game;
    Point init;
    double beta;
  };
  const std::vector<Case> cases = {{neg_xy2(), make_point({0.5}, {1.0}), 0.3},
                                   {limit_cycle_2d(), make_point({1}, {1}), -0.3},
                                   {appendix_a2(), make_point({0.5}, {0.5}), 0.0}};
  for (const auto& c : cases) {
    for (Scheme s : {Scheme::Simultaneous, Scheme::Alternating}) {
      auto t = run(*c.game, {1e-3, c.beta, s}, c.init.x, c.init.y, 20000);
      REQUIRE_FALSE(t.diverged);
      const double fine = avg_slope(*c.game, every(t, 10)).avg_slope;
      const double coarse = avg_slope(*c.game, every(t, 20)).avg_slope;
      CAPTURE(c.game->tag());
      CHECK(std::abs(fine - coarse) < 0.01 * std::abs(fine));
    }
  }
}

TEST_CASE("report JSON") {
  auto seg = from_points({make_point({1}, {1}), make_point({0}, {0})});
  auto j = to_json(avg_slope(*xy_game(), seg, {1.0, true, false}));
  CHECK(j.at("avg_slope").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("per_segment").size() == 1);
  CHECK_FALSE(to_json(avg_slope(*xy_game(), seg)).contains("per_segment"));
}
