#include "mmhb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "mmhb/continuous.hpp"
#include "mmhb/error.hpp"
#include "mmhb/parallel.hpp"

namespace mmhb {

MatrixXd jacobian_gf(const SecondDerivs& s) {
  const Eigen::Index n = s.xx.rows(), m = s.yy.rows();
  MatrixXd j(n + m, n + m);
  j.topLeftCorner(n, n) = -s.xx;
  j.topRightCorner(n, m) = -s.xy;
  j.bottomLeftCorner(m, n) = s.xy.transpose();
  j.bottomRightCorner(m, m) = s.yy;
  return j;
}

MatrixXd jacobian_gf(const Game& game, const Point& p, bool* not_equilibrium, double tol) {
  VectorXd gx, gy;
  game.grad(p, gx, gy);
  const double g = std::sqrt(gx.squaredNorm() + gy.squaredNorm());
  if (not_equilibrium) *not_equilibrium = g > tol;
  return jacobian_gf(game.second_derivs(p));
}

MatrixXd jacobian_sim(const MatrixXd& j, double h, double beta) {
  const double c = sim_correction_coeff(h, beta);
  MatrixXd js = j / (1.0 - beta);
  js.noalias() -= c * (j * j);
  return js;
}

MatrixXd jacobian_alt(const SecondDerivs& s, double h, double beta) {
  const Eigen::Index n = s.xx.rows(), m = s.yy.rows();
  MatrixXd ja = jacobian_sim(jacobian_gf(s), h, beta);
  const double k = h / ((1.0 - beta) * (1.0 - beta));
  ja.bottomLeftCorner(m, n).noalias() -= k * (s.xy.transpose() * s.xx);
  ja.bottomRightCorner(m, m).noalias() -= k * (s.xy.transpose() * s.xy);
  return ja;
}

MatrixXd jacobian_alt(const Game& game, const Point& p, double h, double beta,
                      bool* not_equilibrium) {
  if (not_equilibrium) jacobian_gf(game, p, not_equilibrium);
  return jacobian_alt(game.second_derivs(p), h, beta);
}

JacobianSet jacobians(const Game& game, const Point& p, const HBParams& params) {
  params.validate();
  JacobianSet set;
  set.point = p;
  set.params = params;
  SecondDerivs s = game.second_derivs(p);
  jacobian_gf(game, p, &set.not_equilibrium);
  set.j = jacobian_gf(s);
  set.js = jacobian_sim(set.j, params.h, params.beta);
  set.ja = jacobian_alt(s, params.h, params.beta);
  return set;
}

Decomposition decompose(const MatrixXd& j, int n) {
  if (j.rows() != j.cols() || n < 0 || n > j.rows())
    throw Error(ErrorKind::DimensionMismatch, "decompose: bad shape");
  const Eigen::Index m = j.rows() - n;
  Decomposition d;
  d.s = MatrixXd::Zero(j.rows(), j.cols());
  d.s.topLeftCorner(n, n) = j.topLeftCorner(n, n);
  d.s.bottomRightCorner(m, m) = j.bottomRightCorner(m, m);
  d.a = j - d.s;
  return d;
}

Spectrum eigenvalues(const MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "eigenvalues: not square");
  if (!m.allFinite()) throw Error(ErrorKind::InvalidParams, "eigenvalues: non-finite matrix");
  if (m.rows() == 0) return {};
  Eigen::EigenSolver<MatrixXd> es(m, false);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::ConvergenceFailure, "nonsymmetric eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  return Spectrum(ev.data(), ev.data() + ev.size());
}

Spectrum eigenvalues_extended(const MatrixXd& m) {
  using Quad = boost::multiprecision::cpp_bin_float_quad;
  using MatrixQ = Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>;
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "eigenvalues: not square");
  if (!m.allFinite()) throw Error(ErrorKind::InvalidParams, "eigenvalues: non-finite matrix");
  if (m.rows() == 0) return {};
  const MatrixQ mq = m.cast<Quad>();
  Eigen::EigenSolver<MatrixQ> es(mq, false);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::ConvergenceFailure, "nonsymmetric eigensolver did not converge");
  Spectrum out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    out.emplace_back(static_cast<double>(es.eigenvalues()[i].real()),
                     static_cast<double>(es.eigenvalues()[i].imag()));
  return out;
}

double abscissa(const Spectrum& eigs) {
  double a = -std::numeric_limits<double>::infinity();
  for (const auto& z : eigs) a = std::max(a, z.real());
  return a;
}

double spectral_abscissa(const MatrixXd& m) { return abscissa(eigenvalues(m)); }

Complex sim_polynomial(Complex lambda, double h, double beta) {
  return lambda / (1.0 - beta) - sim_correction_coeff(h, beta) * lambda * lambda;
}

AssumptionReport check_assumptions(const Spectrum& eigs_j) {
  AssumptionReport r;
  r.interaction = true;
  r.generic = true;
  for (const auto& z : eigs_j) {
    if (!(std::abs(z.imag()) > std::abs(z.real()) + 1e-10)) r.interaction = false;
    if (!(z.real() < -1e-12)) r.generic = false;
  }
  return r;
}

AssumptionReport check_assumptions(const MatrixXd& j, const Decomposition& d,
                                   bool intersection_test) {
  AssumptionReport r = check_assumptions(eigenvalues(j));
  if (!intersection_test) return r;
  using MatrixXcd = Eigen::MatrixXcd;
  const Eigen::Index dim = j.rows();
  Spectrum mus = eigenvalues(d.a);
  const double scale = std::max(1.0, j.cwiseAbs().maxCoeff());
  double min_sv = std::numeric_limits<double>::infinity();
  MatrixXcd stacked(2 * dim, dim);
  for (const auto& mu : mus) {
    stacked.topRows(dim) = d.a.cast<Complex>();
    stacked.topRows(dim).diagonal().array() -= mu;
    stacked.bottomRows(dim) = d.s.cast<Complex>();
    Eigen::JacobiSVD<MatrixXcd> svd(stacked);
    min_sv = std::min(min_sv, svd.singularValues().minCoeff());
  }
  r.min_stacked_singular_value = min_sv;
  r.intersection_trivial = mus.empty() || min_sv > 1e-8 * scale;
  return r;
}

double hmax_bound(const Spectrum& eigs_j, double beta) {
  if (!(beta > -1.0 && beta < 1.0))
    throw Error(ErrorKind::InvalidParams, "beta must lie in (-1, 1)");
  AssumptionReport a = check_assumptions(eigs_j);
  if (!a.interaction || !a.generic) {
    std::ostringstream os;
    os << "step-size bound needs interaction dominance (" << (a.interaction ? "ok" : "fails")
       << ") and Re(lambda) < 0 (" << (a.generic ? "ok" : "fails") << ")";
    throw Error(ErrorKind::AssumptionViolated, os.str());
  }
  const double factor = 2.0 * (1.0 - beta) * (1.0 - beta) / (1.0 + beta);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& z : eigs_j) {
    const double re = z.real(), im = z.imag();
    const double d = im * im - re * re;
    if (d <= 0.0) continue;
    best = std::min(best, factor * std::abs(re) / d);
  }
  return best;
}

double hmax_bound(const MatrixXd& j, double beta) { return hmax_bound(eigenvalues(j), beta); }

double optimal_beta_closed_form(Complex lambda, double h) {
  const double r = std::abs(lambda.real());
  const double d = lambda.imag() * lambda.imag() - lambda.real() * lambda.real();
  if (!(r > 0.0) || !(d > 0.0))
    throw Error(ErrorKind::AssumptionViolated,
                "closed-form momentum needs Re(lambda) < 0 and |Im| > |Re|");
  if (h > 4.0 * r / d) return -1.0;
  const double hd = h * d;
  return 1.0 + hd / (2.0 * r) - std::sqrt(hd * hd + 12.0 * r * hd) / (2.0 * r);
}

double mapped_real_part(Complex lambda, double h, double beta) {
  return sim_polynomial(lambda, h, beta).real();
}

std::vector<double> optimal_beta_grid() {
  std::vector<double> g;
  g.reserve(1999);
  for (int k = -999; k <= 999; ++k) g.push_back(k / 1000.0);
  return g;
}

OptimalBeta optimal_beta(const MatrixXd& j, double h, AbscissaMethod method, int jobs) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidParams, "h must be > 0");
  const Spectrum eigs = eigenvalues(j);
  AssumptionReport a = check_assumptions(eigs);
  if (!a.interaction || !a.generic)
    throw Error(ErrorKind::AssumptionViolated,
                "optimal momentum needs interaction dominance and Re(lambda) < 0");

  OptimalBeta out;
  for (const auto& z : eigs) out.per_eig.emplace_back(z, optimal_beta_closed_form(z, h));

  const std::vector<double> grid = optimal_beta_grid();
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    if (method == AbscissaMethod::Eigensolve) {
      values[i] = spectral_abscissa(jacobian_sim(j, h, grid[i]));
    } else {
      double v = -std::numeric_limits<double>::infinity();
      for (const auto& z : eigs) v = std::max(v, mapped_real_part(z, h, grid[i]));
      values[i] = v;
    }
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (values[i] < values[best]) best = i;
  out.global = grid[best];
  out.global_abscissa = values[best];

  // Binding eigenvalue: one pair that is the maximum of Re p at its own optimum.
  std::vector<Complex> upper;
  for (const auto& z : eigs)
    if (z.imag() > 0.0) upper.push_back(z);
  int count = 0;
  for (const auto& lam : upper) {
    const double b = std::clamp(optimal_beta_closed_form(lam, h), grid.front(), grid.back());
    const double gl = mapped_real_part(lam, h, b);
    double others = -std::numeric_limits<double>::infinity();
    for (const auto& mu : upper) {
      if (std::abs(mu - lam) <= 1e-9 * (1.0 + std::abs(lam))) continue;
      others = std::max(others, mapped_real_part(mu, h, b));
    }
    const double margin = 1e-9 * (1.0 + std::abs(gl));
    if (gl >= others - margin) {
      ++count;
      if (gl > others + margin && !out.binding_lambda) {
        out.binding_lambda = lam;
        out.binding_beta = b;
      }
    }
  }
  out.binding_unique = count == 1 && out.binding_lambda.has_value();
  if (!out.binding_unique) out.binding_lambda.reset();
  return out;
}

std::pair<Complex, Complex> bilinear_eigs(double rho, double h, double beta, Scheme scheme) {
  if (!(rho >= 0.0)) throw Error(ErrorKind::InvalidParams, "rho must be >= 0");
  const double omb = 1.0 - beta;
  Complex center, disc;
  if (scheme == Scheme::Simultaneous) {
    center = sim_correction_coeff(h, beta) * rho;
    disc = -rho / (omb * omb);
  } else {
    center = h * beta * rho / (omb * omb * omb);
    disc = h * h * rho * rho / (4.0 * omb * omb * omb * omb) - rho / (omb * omb);
  }
  const Complex root = std::sqrt(disc);
  return {center + root, center - root};
}

const char* to_string(CouplingShift s) {
  return s == CouplingShift::Full ? "full" : "first-order";
}

AltPrediction alt_rate_prediction(const QuadraticGame& game, double h, double beta,
                                  CouplingShift shift) {
  if (game.n() != game.m())
    throw Error(ErrorKind::PreconditionViolated, "alternating-rate prediction needs n = m");
  Eigen::JacobiSVD<MatrixXd> svd(game.c(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const VectorXd sv = svd.singularValues();
  const Eigen::Index n = sv.size();
  if (sv[n - 1] < 1e-8)
    throw Error(ErrorKind::PreconditionViolated, "coupling block is rank deficient");
  for (Eigen::Index k = 0; k + 1 < n; ++k)
    if (sv[k] - sv[k + 1] < 1e-8)
      throw Error(ErrorKind::PreconditionViolated, "coupling block has repeated singular values");

  const MatrixXd j = jacobian_gf(game.second_derivs(Point{VectorXd::Zero(n), VectorXd::Zero(n)}));
  const Spectrum eigs = eigenvalues(j);
  std::vector<Complex> cand;
  for (const auto& z : eigs)
    if (z.imag() >= 0.0) cand.push_back(z);
  std::vector<bool> used(cand.size(), false);

  const double k = shift == CouplingShift::Full ? 1.0 : 0.5;
  const double omb = 1.0 - beta;
  AltPrediction out;
  out.predicted_abscissa = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const VectorXd u = svd.matrixU().col(i), v = svd.matrixV().col(i);
    // first-order location of the eigenvalue that continues from +iσ
    const Complex target(0.5 * (-u.dot(game.hx() * u) + v.dot(game.hy() * v)), sv[i]);
    std::size_t best = cand.size();
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cand.size(); ++c) {
      if (used[c]) continue;
      const double dist = std::abs(cand[c] - target);
      if (dist < bd) { bd = dist; best = c; }
    }
    if (best == cand.size())
      throw Error(ErrorKind::PreconditionViolated, "could not pair eigenvalues with singular values");
    used[best] = true;
    const Complex ls = sim_polynomial(cand[best], h, beta);
    const double pred = ls.real() - k * h * sv[i] * sv[i] / (omb * omb);
    out.sigma.push_back(sv[i]);
    out.lambda_j.push_back(cand[best]);
    out.lambda_s.push_back(ls);
    out.predicted.push_back(pred);
    out.predicted_abscissa = std::max(out.predicted_abscissa, pred);
  }
  return out;
}

std::vector<HeatmapCell> stability_heatmap(const SecondDerivs& blocks,
                                           const std::vector<double>& h_grid,
                                           const std::vector<double>& beta_grid, Scheme scheme,
                                           int jobs) {
  if (h_grid.empty() || beta_grid.empty())
    throw Error(ErrorKind::InvalidParams, "heatmap grids must be nonempty");
  for (double h : h_grid)
    if (!(h > 0.0)) throw Error(ErrorKind::InvalidParams, "heatmap h values must be > 0");
  for (double b : beta_grid)
    if (!(b > -1.0 && b < 1.0))
      throw Error(ErrorKind::InvalidParams, "heatmap beta values must lie in (-1, 1)");
  const MatrixXd j = jacobian_gf(blocks);
  std::vector<HeatmapCell> cells(h_grid.size() * beta_grid.size());
  parallel_for(cells.size(), jobs, [&](std::size_t i) {
    const double b = beta_grid[i / h_grid.size()];
    const double h = h_grid[i % h_grid.size()];
    const MatrixXd m = scheme == Scheme::Simultaneous ? jacobian_sim(j, h, b)
                                                      : jacobian_alt(blocks, h, b);
    cells[i] = {b, h, spectral_abscissa(m)};
  });
  return cells;
}

bool min_hb_stability(double alpha, double beta, double lambda_max) {
  if (!(lambda_max > 0.0)) throw Error(ErrorKind::InvalidParams, "lambda_max must be > 0");
  const double al = alpha * lambda_max;
  return al > 0.0 && al < 2.0 + 2.0 * beta;
}

SpectralReport spectral_report(const Game& game, const Point& p, const HBParams& params,
                               int jobs) {
  params.validate();
  JacobianSet set = jacobians(game, p, params);
  SpectralReport r;
  r.params = params;
  r.not_equilibrium = set.not_equilibrium;
  r.eigs_j = eigenvalues(set.j);
  r.eigs_js = eigenvalues(set.js);
  r.eigs_ja = eigenvalues(set.ja);
  r.abscissa_j = abscissa(r.eigs_j);
  r.abscissa_js = abscissa(r.eigs_js);
  r.abscissa_ja = abscissa(r.eigs_ja);
  r.assumptions = check_assumptions(set.j, decompose(set.j, game.n()), set.j.rows() <= 400);
  if (r.assumptions.interaction && r.assumptions.generic) {
    r.hmax = hmax_bound(r.eigs_j, params.beta);
    OptimalBeta ob = optimal_beta(set.j, params.h, AbscissaMethod::Eigensolve, jobs);
    r.optimal_beta_per_eig = ob.per_eig;
    r.optimal_beta_global = ob.global;
    r.binding_unique = ob.binding_unique;
  }
  if (const auto* q = dynamic_cast<const QuadraticGame*>(&game)) {
    try {
      AltPrediction ap = alt_rate_prediction(*q, params.h, params.beta);
      r.alt_prediction = ap.predicted;
      r.alt_prediction_abscissa = ap.predicted_abscissa;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PreconditionViolated) throw;
    }
  }
  return r;
}

nlohmann::json to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

namespace {

nlohmann::json spectrum_json(const Spectrum& s) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& z : s) a.push_back(to_json(z));
  return a;
}

template <class T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const SpectralReport& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& [z, b] : r.optimal_beta_per_eig) per.push_back({{"lambda", to_json(z)}, {"beta", b}});
  return {{"params", {{"h", r.params.h}, {"beta", r.params.beta}, {"scheme", to_string(r.params.scheme)}}},
          {"not_equilibrium", r.not_equilibrium},
          {"eigs_J", spectrum_json(r.eigs_j)},
          {"eigs_JS", spectrum_json(r.eigs_js)},
          {"eigs_JA", spectrum_json(r.eigs_ja)},
          {"abscissa_J", r.abscissa_j},
          {"abscissa_JS", r.abscissa_js},
          {"abscissa_JA", r.abscissa_ja},
          {"assumption_interaction", r.assumptions.interaction},
          {"assumption_generic", r.assumptions.generic},
          {"intersection_trivial", opt(r.assumptions.intersection_trivial)},
          {"hmax", opt(r.hmax)},
          {"optimal_beta_per_eig", per},
          {"optimal_beta_global", opt(r.optimal_beta_global)},
          {"binding_unique", opt(r.binding_unique)},
          {"alt_prediction", r.alt_prediction},
          {"alt_prediction_abscissa", opt(r.alt_prediction_abscissa)}};
}

}  // namespace mmhb
