#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>

#include "json.hpp"

namespace mmhb {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Point {
  VectorXd x;
  VectorXd y;
};

Point make_point(std::initializer_list<double> x, std::initializer_list<double> y);

// Hxy is the mixed block d²f/dx dy (n×m); d²f/dy dx is always its transpose.
struct SecondDerivs {
  MatrixXd xx;
  MatrixXd xy;
  MatrixXd yy;
};

// Products of the second-derivative blocks with a pair of vectors (u in R^n, v in R^m).
struct HessianProducts {
  VectorXd xx_u;  // Hxx u
  VectorXd xy_v;  // Hxy v
  VectorXd yx_u;  // Hxy^T u
  VectorXd yy_v;  // Hyy v
};

class Game {
 public:
  virtual ~Game() = default;

  virtual int n() const = 0;
  virtual int m() const = 0;
  virtual std::string tag() const = 0;
  virtual nlohmann::json describe() const;

  double eval(const Point& p) const;
  void grad(const Point& p, VectorXd& gx, VectorXd& gy) const;
  SecondDerivs second_derivs(const Point& p) const;
  HessianProducts hessian_products(const Point& p, const VectorXd& u, const VectorXd& v) const;

  void check_dims(const Point& p) const;

 protected:
  virtual double value_impl(const Point& p) const = 0;
  virtual void grad_impl(const Point& p, VectorXd& gx, VectorXd& gy) const = 0;
  virtual SecondDerivs second_impl(const Point& p) const = 0;
  virtual void products_impl(const Point& p, const VectorXd& u, const VectorXd& v,
                             HessianProducts& out) const;
};

using GamePtr = std::shared_ptr<const Game>;

// f = ½ xᵀHx x + ½ yᵀHy y + xᵀC y
class QuadraticGame : public Game {
 public:
  QuadraticGame(MatrixXd hx, MatrixXd hy, MatrixXd c, std::string tag = "quadratic");

  int n() const override { return static_cast<int>(hx_.rows()); }
  int m() const override { return static_cast<int>(hy_.rows()); }
  std::string tag() const override { return tag_; }
  nlohmann::json describe() const override;

  const MatrixXd& hx() const { return hx_; }
  const MatrixXd& hy() const { return hy_; }
  const MatrixXd& c() const { return c_; }

  void set_params(nlohmann::json params) { params_ = std::move(params); }

 protected:
  double value_impl(const Point& p) const override;
  void grad_impl(const Point& p, VectorXd& gx, VectorXd& gy) const override;
  SecondDerivs second_impl(const Point& p) const override;
  void products_impl(const Point& p, const VectorXd& u, const VectorXd& v,
                     HessianProducts& out) const override;

 private:
  MatrixXd hx_, hy_, c_;
  std::string tag_;
  nlohmann::json params_;
};

enum class TestFunction { NegXY2, LimitCycle2D, AppendixA1, AppendixA2 };

// Scalar two-player games with closed-form derivatives.
class TestFunctionGame : public Game {
 public:
  explicit TestFunctionGame(TestFunction kind) : kind_(kind) {}

  int n() const override { return 1; }
  int m() const override { return 1; }
  std::string tag() const override;
  TestFunction kind() const { return kind_; }

 protected:
  double value_impl(const Point& p) const override;
  void grad_impl(const Point& p, VectorXd& gx, VectorXd& gy) const override;
  SecondDerivs second_impl(const Point& p) const override;

 private:
  struct Scalars {
    double f, fx, fy, fxx, fxy, fyy;
  };
  Scalars scalars(double x, double y, int order) const;

  TestFunction kind_;
};

std::shared_ptr<QuadraticGame> bilinear(const MatrixXd& a);
std::shared_ptr<QuadraticGame> xy_game();
std::shared_ptr<QuadraticGame> example_i1(double a = 2.537, double b = 0.0003, double c = 0.801);
std::shared_ptr<TestFunctionGame> neg_xy2();
std::shared_ptr<TestFunctionGame> limit_cycle_2d();
std::shared_ptr<TestFunctionGame> appendix_a1();
std::shared_ptr<TestFunctionGame> appendix_a2();

// Raw: Hx = alpha * A Aᵀ with standard Gaussian A.
// UnitTrace: the same factor rescaled so that trace(Hx) = alpha (likewise Hy).
// C is standard Gaussian in both cases.
enum class FactorScaling { Raw, UnitTrace };

std::shared_ptr<QuadraticGame> random_quadratic(int n, int m, int rank_x, int rank_y, double alpha,
                                                std::uint64_t seed,
                                                FactorScaling scaling = FactorScaling::UnitTrace);

const char* to_string(FactorScaling s);

}  // namespace mmhb
