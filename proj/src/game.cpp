#include "mmhb/game.hpp"

#include <random>
#include <sstream>

#include "mmhb/error.hpp"

namespace mmhb {

Point make_point(std::initializer_list<double> x, std::initializer_list<double> y) {
  Point p;
  p.x = Eigen::Map<const VectorXd>(x.begin(), static_cast<Eigen::Index>(x.size()));
  p.y = Eigen::Map<const VectorXd>(y.begin(), static_cast<Eigen::Index>(y.size()));
  return p;
}

nlohmann::json Game::describe() const {
  return {{"tag", tag()}, {"n", n()}, {"m", m()}};
}

void Game::check_dims(const Point& p) const {
  if (p.x.size() != n() || p.y.size() != m()) {
    std::ostringstream os;
    os << "point has dims (" << p.x.size() << ", " << p.y.size() << "), game " << tag()
       << " expects (" << n() << ", " << m() << ")";
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

double Game::eval(const Point& p) const {
  check_dims(p);
  return value_impl(p);
}

void Game::grad(const Point& p, VectorXd& gx, VectorXd& gy) const {
  check_dims(p);
  grad_impl(p, gx, gy);
}

SecondDerivs Game::second_derivs(const Point& p) const {
  check_dims(p);
  return second_impl(p);
}

HessianProducts Game::hessian_products(const Point& p, const VectorXd& u,
                                       const VectorXd& v) const {
  check_dims(p);
  if (u.size() != n() || v.size() != m())
    throw Error(ErrorKind::DimensionMismatch, "hessian_products vector sizes");
  HessianProducts out;
  products_impl(p, u, v, out);
  return out;
}

void Game::products_impl(const Point& p, const VectorXd& u, const VectorXd& v,
                         HessianProducts& out) const {
  SecondDerivs s = second_impl(p);
  out.xx_u = s.xx * u;
  out.xy_v = s.xy * v;
  out.yx_u = s.xy.transpose() * u;
  out.yy_v = s.yy * v;
}

// ---------------------------------------------------------------- quadratic

QuadraticGame::QuadraticGame(MatrixXd hx, MatrixXd hy, MatrixXd c, std::string tag)
    : hx_(std::move(hx)), hy_(std::move(hy)), c_(std::move(c)), tag_(std::move(tag)) {
  if (hx_.rows() != hx_.cols() || hy_.rows() != hy_.cols() || c_.rows() != hx_.rows() ||
      c_.cols() != hy_.rows())
    throw Error(ErrorKind::DimensionMismatch, "quadratic game blocks have inconsistent shapes");
  if (!hx_.allFinite() || !hy_.allFinite() || !c_.allFinite())
    throw Error(ErrorKind::InvalidParams, "quadratic game has non-finite entries");
  const double scale = 1.0 + hx_.cwiseAbs().maxCoeff() + hy_.cwiseAbs().maxCoeff();
  if ((hx_ - hx_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale ||
      (hy_ - hy_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error(ErrorKind::InvalidParams, "Hx and Hy must be symmetric");
  if (hx_.size() > 0) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(hx_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9 * scale)
      throw Error(ErrorKind::InvalidParams, "Hx must be positive semi-definite");
  }
  if (hy_.size() > 0) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(hy_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().maxCoeff() > 1e-9 * scale)
      throw Error(ErrorKind::InvalidParams, "Hy must be negative semi-definite");
  }
}

nlohmann::json QuadraticGame::describe() const {
  nlohmann::json j = Game::describe();
  if (!params_.is_null()) j["params"] = params_;
  return j;
}

double QuadraticGame::value_impl(const Point& p) const {
  return 0.5 * p.x.dot(hx_ * p.x) + 0.5 * p.y.dot(hy_ * p.y) + p.x.dot(c_ * p.y);
}

void QuadraticGame::grad_impl(const Point& p, VectorXd& gx, VectorXd& gy) const {
  gx.noalias() = hx_ * p.x;
  gx.noalias() += c_ * p.y;
  gy.noalias() = hy_ * p.y;
  gy.noalias() += c_.transpose() * p.x;
}

SecondDerivs QuadraticGame::second_impl(const Point&) const { return {hx_, c_, hy_}; }

void QuadraticGame::products_impl(const Point&, const VectorXd& u, const VectorXd& v,
                                  HessianProducts& out) const {
  out.xx_u.noalias() = hx_ * u;
  out.xy_v.noalias() = c_ * v;
  out.yx_u.noalias() = c_.transpose() * u;
  out.yy_v.noalias() = hy_ * v;
}

std::shared_ptr<QuadraticGame> bilinear(const MatrixXd& a) {
  auto g = std::make_shared<QuadraticGame>(MatrixXd::Zero(a.rows(), a.rows()),
                                           MatrixXd::Zero(a.cols(), a.cols()), a, "bilinear");
  std::vector<std::vector<double>> rows(a.rows(), std::vector<double>(a.cols()));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) rows[i][j] = a(i, j);
  g->set_params({{"A", rows}});
  return g;
}

std::shared_ptr<QuadraticGame> xy_game() {
  return std::make_shared<QuadraticGame>(MatrixXd::Zero(1, 1), MatrixXd::Zero(1, 1),
                                         MatrixXd::Ones(1, 1), "xy");
}

std::shared_ptr<QuadraticGame> example_i1(double a, double b, double c) {
  // f = a x² − b y² + c x y
  auto g = std::make_shared<QuadraticGame>(MatrixXd::Constant(1, 1, 2.0 * a),
                                           MatrixXd::Constant(1, 1, -2.0 * b),
                                           MatrixXd::Constant(1, 1, c), "example-i1");
  g->set_params({{"a", a}, {"b", b}, {"c", c}});
  return g;
}

// ---------------------------------------------------------------- 2D test functions

namespace {

// g(z) = z²/2 − z⁴/2 + z⁶/6
struct PolyG {
  static double v(double z) { double z2 = z * z; return z2 * (0.5 - 0.5 * z2 + z2 * z2 / 6.0); }
  static double d1(double z) { double z2 = z * z; return z * (1.0 - 2.0 * z2 + z2 * z2); }
  static double d2(double z) { double z2 = z * z; return 1.0 - 6.0 * z2 + 5.0 * z2 * z2; }
};

// phi1(z) = z²/4 − z⁴/2 + z⁶/6
struct PolyPhi1 {
  static double v(double z) { double z2 = z * z; return z2 * (0.25 - 0.5 * z2 + z2 * z2 / 6.0); }
  static double d1(double z) { double z2 = z * z; return z * (0.5 - 2.0 * z2 + z2 * z2); }
  static double d2(double z) { double z2 = z * z; return 0.5 - 6.0 * z2 + 5.0 * z2 * z2; }
};

// phi2(z) = z²/2 − z⁴/4 + z⁶/6 − z⁸/8
struct PolyPhi2 {
  static double v(double z) {
    double z2 = z * z;
    return z2 * (0.5 + z2 * (-0.25 + z2 * (1.0 / 6.0 - z2 / 8.0)));
  }
  static double d1(double z) {
    double z2 = z * z;
    return z * (1.0 + z2 * (-1.0 + z2 * (1.0 - z2)));
  }
  static double d2(double z) {
    double z2 = z * z;
    return 1.0 + z2 * (-3.0 + z2 * (5.0 - 7.0 * z2));
  }
};

template <class P>
void separable(double x, double y, double kxy, double shift, double& f, double& fx, double& fy,
               double& fxx, double& fxy, double& fyy) {
  // f = kxy·x(y − shift) + P(x) − P(y)
  f = kxy * x * (y - shift) + P::v(x) - P::v(y);
  fx = kxy * (y - shift) + P::d1(x);
  fy = kxy * x - P::d1(y);
  fxx = P::d2(x);
  fxy = kxy;
  fyy = -P::d2(y);
}

}  // namespace

std::string TestFunctionGame::tag() const {
  switch (kind_) {
    case TestFunction::NegXY2: return "neg-xy2";
    case TestFunction::LimitCycle2D: return "limit-cycle-2d";
    case TestFunction::AppendixA1: return "appendix-a1";
    case TestFunction::AppendixA2: return "appendix-a2";
  }
  return "unknown";
}

TestFunctionGame::Scalars TestFunctionGame::scalars(double x, double y, int) const {
  Scalars s{};
  switch (kind_) {
    case TestFunction::NegXY2:
      s.f = -x * y * y;
      s.fx = -y * y;
      s.fy = -2.0 * x * y;
      s.fxx = 0.0;
      s.fxy = -2.0 * y;
      s.fyy = -2.0 * x;
      break;
    case TestFunction::LimitCycle2D:
      // 3x(4y − 0.45) = 12·x(y − 0.1125)
      separable<PolyG>(x, y, 12.0, 0.1125, s.f, s.fx, s.fy, s.fxx, s.fxy, s.fyy);
      break;
    case TestFunction::AppendixA1:
      separable<PolyPhi1>(x, y, 1.0, 0.45, s.f, s.fx, s.fy, s.fxx, s.fxy, s.fyy);
      break;
    case TestFunction::AppendixA2:
      separable<PolyPhi2>(x, y, 1.0, 0.0, s.f, s.fx, s.fy, s.fxx, s.fxy, s.fyy);
      break;
  }
  return s;
}

double TestFunctionGame::value_impl(const Point& p) const { return scalars(p.x[0], p.y[0], 0).f; }

void TestFunctionGame::grad_impl(const Point& p, VectorXd& gx, VectorXd& gy) const {
  Scalars s = scalars(p.x[0], p.y[0], 1);
  gx.resize(1);
  gy.resize(1);
  gx[0] = s.fx;
  gy[0] = s.fy;
}

SecondDerivs TestFunctionGame::second_impl(const Point& p) const {
  Scalars s = scalars(p.x[0], p.y[0], 2);
  return {MatrixXd::Constant(1, 1, s.fxx), MatrixXd::Constant(1, 1, s.fxy),
          MatrixXd::Constant(1, 1, s.fyy)};
}

std::shared_ptr<TestFunctionGame> neg_xy2() {
  return std::make_shared<TestFunctionGame>(TestFunction::NegXY2);
}
std::shared_ptr<TestFunctionGame> limit_cycle_2d() {
  return std::make_shared<TestFunctionGame>(TestFunction::LimitCycle2D);
}
std::shared_ptr<TestFunctionGame> appendix_a1() {
  return std::make_shared<TestFunctionGame>(TestFunction::AppendixA1);
}
std::shared_ptr<TestFunctionGame> appendix_a2() {
  return std::make_shared<TestFunctionGame>(TestFunction::AppendixA2);
}

// ---------------------------------------------------------------- random ensemble

const char* to_string(FactorScaling s) {
  return s == FactorScaling::Raw ? "raw" : "unit-trace";
}

namespace {

MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd(0.0, 1.0);
  MatrixXd a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = nd(rng);
  return a;
}

MatrixXd psd_factor_product(std::mt19937_64& rng, int n, int rank, double alpha,
                            FactorScaling scaling) {
  if (rank == 0) return MatrixXd::Zero(n, n);
  MatrixXd a = gaussian(rng, n, rank);
  MatrixXd h = a * a.transpose();
  if (scaling == FactorScaling::UnitTrace) h /= a.squaredNorm();
  h = 0.5 * (h + h.transpose());
  return alpha * h;
}

}  // namespace

std::shared_ptr<QuadraticGame> random_quadratic(int n, int m, int rank_x, int rank_y, double alpha,
                                                std::uint64_t seed, FactorScaling scaling) {
  if (n < 1 || m < 1) throw Error(ErrorKind::DimensionMismatch, "n and m must be positive");
  if (rank_x < 0 || rank_x > n || rank_y < 0 || rank_y > m)
    throw Error(ErrorKind::InvalidRank, "ranks must satisfy 0 <= rank_x <= n, 0 <= rank_y <= m");
  if (!(alpha >= 0.0)) throw Error(ErrorKind::InvalidParams, "alpha must be >= 0");
  std::mt19937_64 rng(seed);
  MatrixXd hx = psd_factor_product(rng, n, rank_x, alpha, scaling);
  MatrixXd hy = -psd_factor_product(rng, m, rank_y, alpha, scaling);
  MatrixXd c = gaussian(rng, n, m);
  auto g = std::make_shared<QuadraticGame>(std::move(hx), std::move(hy), std::move(c),
                                           "random-quadratic");
  g->set_params({{"n", n},
                 {"m", m},
                 {"rank_x", rank_x},
                 {"rank_y", rank_y},
                 {"alpha", alpha},
                 {"seed", seed},
                 {"factor_scaling", to_string(scaling)}});
  return g;
}

}  // namespace mmhb
