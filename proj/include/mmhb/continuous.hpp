#pragma once

#include <string>

#include "mmhb/discrete.hpp"
#include "mmhb/game.hpp"

namespace mmhb {

enum class FieldKind { ContinuousSim, ContinuousAlt, TransientSim, TransientAlt, BaselineO2, GradientFlow };

const char* to_string(FieldKind k);

// Leading coefficient of the transient fields: (1 − β^(n+1))/(1 − β) by default, or
// (1 − β^n)/(1 − β) for the alternative index convention.
enum class LeadingIndex { NPlusOne, N };

const char* to_string(LeadingIndex l);

struct FieldSpec {
  FieldKind kind = FieldKind::ContinuousSim;
  HBParams params;
  long n = 0;  // transient index at the first node
  LeadingIndex leading = LeadingIndex::NPlusOne;
};

struct Velocity {
  VectorXd dx;
  VectorXd dy;
};

// c = h(1+β)/(2(1−β)³)
double sim_correction_coeff(double h, double beta);
// d = h(3β−1)/(2(1−β)³)
double alt_coupling_coeff(double h, double beta);

double modified_loss(const Game& game, const HBParams& params, const Point& p);

Velocity field_sim(const Game& game, const HBParams& params, const Point& p);
Velocity field_alt(const Game& game, const HBParams& params, const Point& p);
Velocity field_transient(const Game& game, const HBParams& params, long n, Scheme scheme,
                         const Point& p, LeadingIndex leading = LeadingIndex::NPlusOne);
Velocity field_baseline_o2(const Game& game, const HBParams& params, const Point& p);
Velocity field_gradient_flow(const Game& game, const Point& p);

// Evaluates the field of `spec`; transient kinds use index n.
Velocity evaluate_field(const Game& game, const FieldSpec& spec, const Point& p, long n);

double gamma_n(double beta, long n);
double delta_n(double beta, long n);

// ⌈4 ln h / ln|β|⌉, zero when β = 0.
long warmup_steps(double h, double beta);

enum class Method { RK4, Euler };

const char* to_string(Method m);

struct IntegratorConfig {
  Method method = Method::RK4;
  double dt = 0.0;     // internal step; 0 selects h/10
  long steps = 0;      // number of recorded intervals of length h
  long index0 = 0;     // index assigned to the initial state (t = index·h)
};

Trajectory integrate(const Game& game, const FieldSpec& field, const IntegratorConfig& cfg,
                     const VectorXd& x0, const VectorXd& y0);

}  // namespace mmhb
