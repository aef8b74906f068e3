#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mmhb/discrete.hpp"
#include "mmhb/game.hpp"

namespace mmhb {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

// J = [[−Hxx, −Hxy], [Hxyᵀ, Hyy]]
MatrixXd jacobian_gf(const SecondDerivs& s);
// Sets *not_equilibrium when ‖grad‖ exceeds tol; the formula is evaluated regardless.
MatrixXd jacobian_gf(const Game& game, const Point& p, bool* not_equilibrium = nullptr,
                     double tol = 1e-8);

// J_S = (I/(1−β) − c·J)·J with c = h(1+β)/(2(1−β)³)
MatrixXd jacobian_sim(const MatrixXd& j, double h, double beta);

// J_A = J_S − h/(1−β)² · [[0, 0], [Hxyᵀ Hxx, Hxyᵀ Hxy]]
MatrixXd jacobian_alt(const SecondDerivs& s, double h, double beta);
MatrixXd jacobian_alt(const Game& game, const Point& p, double h, double beta,
                      bool* not_equilibrium = nullptr);

struct JacobianSet {
  MatrixXd j, js, ja;
  Point point;
  HBParams params;
  bool not_equilibrium = false;
};

JacobianSet jacobians(const Game& game, const Point& p, const HBParams& params);

struct Decomposition {
  MatrixXd s;  // potential part (block diagonal of J)
  MatrixXd a;  // Hamiltonian part (off-diagonal blocks)
};

Decomposition decompose(const MatrixXd& j, int n);

Spectrum eigenvalues(const MatrixXd& m);
// The same real QR algorithm carried out in 113-bit binary floating point. Use for small
// matrices whose spectrum is (nearly) defective, where double precision loses about half the digits.
Spectrum eigenvalues_extended(const MatrixXd& m);
double abscissa(const Spectrum& eigs);
double spectral_abscissa(const MatrixXd& m);

// λ/(1−β) − c·λ²
Complex sim_polynomial(Complex lambda, double h, double beta);

struct AssumptionReport {
  bool interaction = false;
  bool generic = false;
  // Diagnostic: no eigenvector of A lies in Ker(S), judged by the smallest singular value of
  // the stacked matrix [A − μI; S] over the eigenvalues μ of A. Empty when not computed.
  std::optional<bool> intersection_trivial;
  double min_stacked_singular_value = 0.0;
};

AssumptionReport check_assumptions(const Spectrum& eigs_j);
AssumptionReport check_assumptions(const MatrixXd& j, const Decomposition& d,
                                   bool intersection_test = true);

// min over λ of 2(1−β)²/(1+β) · |Re λ|/(Im² − Re²). Throws AssumptionViolated.
double hmax_bound(const Spectrum& eigs_j, double beta);
double hmax_bound(const MatrixXd& j, double beta);

// Per-eigenvalue minimizer of Re p(λ) over β; −1 when h > 4|Re λ|/(Im² − Re²).
double optimal_beta_closed_form(Complex lambda, double h);

// Re p(λ) as a function of β.
double mapped_real_part(Complex lambda, double h, double beta);

enum class AbscissaMethod { Eigensolve, SpectralMap };

struct OptimalBeta {
  std::vector<std::pair<Complex, double>> per_eig;
  double global = 0.0;
  double global_abscissa = 0.0;
  // Set when exactly one conjugate pair attains the max of Re p(λ) at its own optimum with a
  // strict margin over every other eigenvalue; then that optimum is the global minimizer.
  bool binding_unique = false;
  std::optional<Complex> binding_lambda;
  double binding_beta = 0.0;
};

std::vector<double> optimal_beta_grid();

OptimalBeta optimal_beta(const MatrixXd& j, double h,
                         AbscissaMethod method = AbscissaMethod::Eigensolve, int jobs = 1);

std::pair<Complex, Complex> bilinear_eigs(double rho, double h, double beta, Scheme scheme);

// Coefficient on hσ²/(1−β)² in the alternating-rate prediction.
// Full uses 1; FirstOrder uses 1/2, the exact first-order eigenvalue shift.
enum class CouplingShift { Full, FirstOrder };

const char* to_string(CouplingShift s);

struct AltPrediction {
  std::vector<double> sigma;      // singular values of C, descending
  std::vector<Complex> lambda_j;  // paired eigenvalue of J (Im ≥ 0)
  std::vector<Complex> lambda_s;  // mapped through the sim polynomial
  std::vector<double> predicted;  // predicted real parts for J_A
  double predicted_abscissa = 0.0;
};

AltPrediction alt_rate_prediction(const QuadraticGame& game, double h, double beta,
                                  CouplingShift shift = CouplingShift::Full);

struct HeatmapCell {
  double beta = 0.0;
  double h = 0.0;
  double abscissa = 0.0;
};

// Cells ordered beta-major, then h, independent of `jobs`.
std::vector<HeatmapCell> stability_heatmap(const SecondDerivs& blocks,
                                           const std::vector<double>& h_grid,
                                           const std::vector<double>& beta_grid, Scheme scheme,
                                           int jobs = 1);

// Heavy ball on a minimization problem: stable iff 0 < α·λ_max < 2 + 2β.
bool min_hb_stability(double alpha, double beta, double lambda_max);

struct SpectralReport {
  Spectrum eigs_j, eigs_js, eigs_ja;
  double abscissa_j = 0.0, abscissa_js = 0.0, abscissa_ja = 0.0;
  AssumptionReport assumptions;
  bool not_equilibrium = false;
  std::optional<double> hmax;
  std::vector<std::pair<Complex, double>> optimal_beta_per_eig;
  std::optional<double> optimal_beta_global;
  std::optional<bool> binding_unique;
  std::vector<double> alt_prediction;
  std::optional<double> alt_prediction_abscissa;
  HBParams params;
};

SpectralReport spectral_report(const Game& game, const Point& p, const HBParams& params,
                               int jobs = 1);

nlohmann::json to_json(const SpectralReport& r);
nlohmann::json to_json(Complex z);

}  // namespace mmhb
