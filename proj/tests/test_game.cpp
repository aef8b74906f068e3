#include <cmath>
#include <cstring>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "mmhb/error.hpp"
#include "mmhb/game.hpp"

using namespace mmhb;

namespace {

std::vector<GamePtr> all_games() {
  MatrixXd a(3, 2);
  a << 1.0, -0.5, 0.25, 2.0, -1.5, 0.75;
  return {bilinear(a),      xy_game(),       neg_xy2(),   limit_cycle_2d(),
          appendix_a1(),    appendix_a2(),   example_i1(), random_quadratic(4, 3, 2, 1, 0.7, 3),
          random_quadratic(3, 3, 3, 2, 2.0, 5, FactorScaling::Raw)};
}

Point random_point(const Game& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  Point p{VectorXd(g.n()), VectorXd(g.m())};
  for (auto i = 0; i < g.n(); ++i) p.x[i] = u(rng);
  for (auto i = 0; i < g.m(); ++i) p.y[i] = u(rng);
  if (g.tag() == "neg-xy2") p.x = p.x.cwiseAbs();
  return p;
}

// central differences of eval, one coordinate at a time
void fd_grad(const Game& g, const Point& p, VectorXd& gx, VectorXd& gy) {
  gx.resize(g.n());
  gy.resize(g.m());
  for (int i = 0; i < g.n() + g.m(); ++i) {
    Point a = p, b = p;
    double& ca = i < g.n() ? a.x[i] : a.y[i - g.n()];
    double& cb = i < g.n() ? b.x[i] : b.y[i - g.n()];
    const double step = 1e-6 * (1.0 + std::abs(ca));
    ca += step;
    cb -= step;
    const double d = (g.eval(a) - g.eval(b)) / (2 * step);
    (i < g.n() ? gx[i] : gy[i - g.n()]) = d;
  }
}

double rel_err(const VectorXd& a, const VectorXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

double rel_err(const MatrixXd& a, const MatrixXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace

TEST_CASE("eval examples") {
  CHECK(bilinear(MatrixXd::Ones(1, 1))->eval(make_point({1}, {1})) == doctest::Approx(1.0));
  CHECK(neg_xy2()->eval(make_point({1}, {2})) == doctest::Approx(-4.0));
  CHECK(example_i1(2.537, 0.0003, 0.801)->eval(make_point({0}, {0})) == 0.0);
  CHECK_THROWS_AS(xy_game()->eval(make_point({1, 2}, {1})), Error);
  try {
    xy_game()->eval(make_point({1, 2}, {1}));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("grad examples") {
  VectorXd gx, gy;
  xy_game()->grad(make_point({2}, {3}), gx, gy);
  CHECK(gx[0] == 3.0);
  CHECK(gy[0] == 2.0);
  neg_xy2()->grad(make_point({1}, {2}), gx, gy);
  CHECK(gx[0] == -4.0);
  CHECK(gy[0] == -4.0);

  auto q = random_quadratic(3, 2, 2, 1, 0.4, 11);
  const Point p = make_point({0.3, -1.0, 2.0}, {0.5, 0.25});
  q->grad(p, gx, gy);
  CHECK(rel_err(gx, VectorXd(q->hx() * p.x + q->c() * p.y)) < 1e-14);
  CHECK(rel_err(gy, VectorXd(q->hy() * p.y + q->c().transpose() * p.x)) < 1e-14);
}

TEST_CASE("second derivative examples") {
  auto q = random_quadratic(3, 2, 1, 2, 0.4, 2);
  for (const Point& p : {make_point({0, 0, 0}, {0, 0}), make_point({1, -2, 3}, {4, 5})}) {
    const SecondDerivs s = q->second_derivs(p);
    CHECK(s.xx == q->hx());
    CHECK(s.xy == q->c());
    CHECK(s.yy == q->hy());
  }
  const SecondDerivs s = xy_game()->second_derivs(make_point({0.3}, {-2}));
  CHECK(s.xx(0, 0) == 0.0);
  CHECK(s.xy(0, 0) == 1.0);
  CHECK(s.yy(0, 0) == 0.0);

  // limit cycle at the origin: (g''(0), 12, −g''(0)) with g''(0) = 1
  const SecondDerivs lc = limit_cycle_2d()->second_derivs(make_point({0}, {0}));
  CHECK(lc.xx(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lc.xy(0, 0) == doctest::Approx(12.0).epsilon(1e-14));
  CHECK(lc.yy(0, 0) == doctest::Approx(-1.0).epsilon(1e-14));
  VectorXd gx0, gy0, gx1, gy1;
  const double step = 1e-5;
  limit_cycle_2d()->grad(make_point({step}, {0}), gx0, gy0);
  limit_cycle_2d()->grad(make_point({-step}, {0}), gx1, gy1);
  CHECK((gx0[0] - gx1[0]) / (2 * step) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK((gy0[0] - gy1[0]) / (2 * step) == doctest::Approx(12.0).epsilon(1e-8));
}

TEST_CASE("analytic gradients match finite differences") {
  std::mt19937_64 rng(1);
  for (const auto& g : all_games()) {
    CAPTURE(g->tag());
    for (int k = 0; k < 100; ++k) {
      const Point p = random_point(*g, rng);
      VectorXd gx, gy, fx, fy;
      g->grad(p, gx, gy);
      fd_grad(*g, p, fx, fy);
      VectorXd a(gx.size() + gy.size()), b(a.size());
      a << gx, gy;
      b << fx, fy;
      CHECK(rel_err(a, b) < 1e-6);
    }
  }
}

TEST_CASE("analytic second derivatives match finite differences of grad") {
  std::mt19937_64 rng(2);
  for (const auto& g : all_games()) {
    CAPTURE(g->tag());
    const int n = g->n(), m = g->m();
    for (int k = 0; k < 100; ++k) {
      const Point p = random_point(*g, rng);
      MatrixXd fd(n + m, n + m);
      for (int i = 0; i < n + m; ++i) {
        Point a = p, b = p;
        double& ca = i < n ? a.x[i] : a.y[i - n];
        double& cb = i < n ? b.x[i] : b.y[i - n];
        const double step = 1e-5 * (1.0 + std::abs(ca));
        ca += step;
        cb -= step;
        VectorXd ax, ay, bx, by;
        g->grad(a, ax, ay);
        g->grad(b, bx, by);
        VectorXd col(n + m);
        col << (ax - bx) / (2 * step), (ay - by) / (2 * step);
        fd.col(i) = col;
      }
      const SecondDerivs s = g->second_derivs(p);
      MatrixXd h(n + m, n + m);
      h << s.xx, s.xy, s.xy.transpose(), s.yy;
      CHECK(rel_err(h, fd) < 1e-5);
      CHECK((s.xx - s.xx.transpose()).norm() == 0.0);
      CHECK((s.yy - s.yy.transpose()).norm() == 0.0);

      // products agree with the explicit blocks
      VectorXd u = VectorXd::LinSpaced(n, -1.0, 1.0), v = VectorXd::LinSpaced(m, 0.5, 2.0);
      const HessianProducts hp = g->hessian_products(p, u, v);
      CHECK(rel_err(hp.xx_u, VectorXd(s.xx * u)) < 1e-12);
      CHECK(rel_err(hp.xy_v, VectorXd(s.xy * v)) < 1e-12);
      CHECK(rel_err(hp.yx_u, VectorXd(s.xy.transpose() * u)) < 1e-12);
      CHECK(rel_err(hp.yy_v, VectorXd(s.yy * v)) < 1e-12);
    }
  }
}

TEST_CASE("random quadratic: rank, signs, determinism") {
  auto g0 = random_quadratic(2, 2, 0, 0, 1.0, 4);
  CHECK(g0->hx().isZero(0.0));
  CHECK(g0->hy().isZero(0.0));
  CHECK(g0->c().norm() > 0.0);

  for (FactorScaling sc : {FactorScaling::UnitTrace, FactorScaling::Raw}) {
    auto g = random_quadratic(20, 20, 10, 10, 1.0, 7, sc);
    Eigen::SelfAdjointEigenSolver<MatrixXd> ex(g->hx()), ey(g->hy());
    int zx = 0, zy = 0;
    for (auto i = 0; i < 20; ++i) {
      zx += std::abs(ex.eigenvalues()[i]) < 1e-10;
      zy += std::abs(ey.eigenvalues()[i]) < 1e-10;
      CHECK(ex.eigenvalues()[i] >= -1e-12);
      CHECK(ey.eigenvalues()[i] <= 1e-12);
    }
    CHECK(zx == 10);
    CHECK(zy == 10);

    auto again = random_quadratic(20, 20, 10, 10, 1.0, 7, sc);
    CHECK(std::memcmp(g->hx().data(), again->hx().data(), sizeof(double) * 400) == 0);
    CHECK(std::memcmp(g->hy().data(), again->hy().data(), sizeof(double) * 400) == 0);
    CHECK(std::memcmp(g->c().data(), again->c().data(), sizeof(double) * 400) == 0);
  }

  auto unit = random_quadratic(6, 5, 3, 2, 0.3, 9);
  CHECK(unit->hx().trace() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(unit->hy().trace() == doctest::Approx(-0.3).epsilon(1e-12));
  // both scalings share the same draw, so they differ only by a positive factor
  auto raw = random_quadratic(6, 5, 3, 2, 0.3, 9, FactorScaling::Raw);
  const double k = raw->hx().trace() / unit->hx().trace();
  CHECK(rel_err(MatrixXd(unit->hx() * k), raw->hx()) < 1e-12);
  CHECK(unit->c() == raw->c());

  CHECK_THROWS_AS(random_quadratic(3, 3, 4, 1, 1.0, 0), Error);
  try {
    random_quadratic(3, 3, 1, -1, 1.0, 0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidRank);
  }
}

TEST_CASE("origin is a critical point of every quadratic game") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto g = random_quadratic(5, 4, 2, 3, 1.5, s);
    VectorXd gx, gy;
    g->grad({VectorXd::Zero(5), VectorXd::Zero(4)}, gx, gy);
    CHECK(gx.isZero(0.0));
    CHECK(gy.isZero(0.0));
    CHECK(g->eval({VectorXd::Zero(5), VectorXd::Zero(4)}) == 0.0);
  }
}

TEST_CASE("quadratic game validates its blocks") {
  MatrixXd hx = MatrixXd::Identity(2, 2), hy = -MatrixXd::Identity(1, 1), c = MatrixXd::Ones(2, 1);
  CHECK_NOTHROW(QuadraticGame(hx, hy, c));
  CHECK_THROWS_AS(QuadraticGame(-hx, hy, c), Error);           // not PSD
  CHECK_THROWS_AS(QuadraticGame(hx, -hy, c), Error);           // not NSD
  CHECK_THROWS_AS(QuadraticGame(hx, hy, MatrixXd::Ones(1, 1)), Error);
  MatrixXd asym = hx;
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(QuadraticGame(asym, hy, c), Error);
  MatrixXd bad = hx;
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(QuadraticGame(bad, hy, c), Error);
}

TEST_CASE("closed forms of the scalar test functions") {
  auto g = [](double z) { return 0.5 * z * z - 0.5 * std::pow(z, 4) + std::pow(z, 6) / 6; };
  auto phi1 = [](double z) { return 0.25 * z * z - 0.5 * std::pow(z, 4) + std::pow(z, 6) / 6; };
  auto phi2 = [](double z) {
    return 0.5 * z * z - 0.25 * std::pow(z, 4) + std::pow(z, 6) / 6 - std::pow(z, 8) / 8;
  };
  for (double x : {-0.7, 0.1, 0.9})
    for (double y : {-0.3, 0.4, 1.1}) {
      const Point p = make_point({x}, {y});
      CHECK(limit_cycle_2d()->eval(p) == doctest::Approx(3 * x * (4 * y - 0.45) + g(x) - g(y)));
      CHECK(appendix_a1()->eval(p) == doctest::Approx(x * (y - 0.45) + phi1(x) - phi1(y)));
      CHECK(appendix_a2()->eval(p) == doctest::Approx(x * y + phi2(x) - phi2(y)));
      CHECK(example_i1(2.537, 0.0003, 0.801)->eval(p) ==
            doctest::Approx(2.537 * x * x - 0.0003 * y * y + 0.801 * x * y));
    }
}
