#include "mmhb/continuous.hpp"

#include <cmath>

#include "mmhb/error.hpp"

namespace mmhb {

const char* to_string(FieldKind k) {
  switch (k) {
    case FieldKind::ContinuousSim: return "continuous-sim";
    case FieldKind::ContinuousAlt: return "continuous-alt";
    case FieldKind::TransientSim: return "transient-sim";
    case FieldKind::TransientAlt: return "transient-alt";
    case FieldKind::BaselineO2: return "baseline-o2";
    case FieldKind::GradientFlow: return "gradient-flow";
  }
  return "unknown";
}

const char* to_string(LeadingIndex l) { return l == LeadingIndex::NPlusOne ? "n+1" : "n"; }

const char* to_string(Method m) { return m == Method::RK4 ? "rk4" : "euler"; }

double sim_correction_coeff(double h, double beta) {
  const double omb = 1.0 - beta;
  return h * (1.0 + beta) / (2.0 * omb * omb * omb);
}

double alt_coupling_coeff(double h, double beta) {
  const double omb = 1.0 - beta;
  return h * (3.0 * beta - 1.0) / (2.0 * omb * omb * omb);
}

double modified_loss(const Game& game, const HBParams& params, const Point& p) {
  const double omb = 1.0 - params.beta;
  VectorXd gx, gy;
  game.grad(p, gx, gy);
  const double k = params.h * (1.0 + params.beta) / (4.0 * omb * omb * omb);
  return game.eval(p) / omb + k * (gx.squaredNorm() - gy.squaredNorm());
}

namespace {

// dx = −lead·gx − cx·(Hxx gx − Hxy gy)
// dy =  lead·gy + cx·(Hxyᵀ gx − Hyy gy) + extra·Hxyᵀ gx
Velocity assemble(const Game& game, const Point& p, double lead, double cx, double extra) {
  VectorXd gx, gy;
  game.grad(p, gx, gy);
  Velocity v;
  if (cx == 0.0 && extra == 0.0) {
    v.dx = -lead * gx;
    v.dy = lead * gy;
    return v;
  }
  HessianProducts hp = game.hessian_products(p, gx, gy);
  v.dx = -lead * gx - cx * (hp.xx_u - hp.xy_v);
  v.dy = lead * gy + cx * (hp.yx_u - hp.yy_v) + extra * hp.yx_u;
  return v;
}

}  // namespace

Velocity field_sim(const Game& game, const HBParams& params, const Point& p) {
  return assemble(game, p, 1.0 / (1.0 - params.beta), sim_correction_coeff(params.h, params.beta),
                  0.0);
}

Velocity field_alt(const Game& game, const HBParams& params, const Point& p) {
  // dy = gy/(1−β) − c·Hyy gy + d·Hxyᵀ gx, written as the sim form plus (d − c)·Hxyᵀ gx
  const double c = sim_correction_coeff(params.h, params.beta);
  const double d = alt_coupling_coeff(params.h, params.beta);
  return assemble(game, p, 1.0 / (1.0 - params.beta), c, d - c);
}

Velocity field_transient(const Game& game, const HBParams& params, long n, Scheme scheme,
                         const Point& p, LeadingIndex leading) {
  if (n < 0) throw Error(ErrorKind::InvalidParams, "transient index must be >= 0");
  const double b = params.beta;
  const double omb = 1.0 - b;
  const long e = leading == LeadingIndex::NPlusOne ? n + 1 : n;
  const double lead = (1.0 - std::pow(b, static_cast<double>(e))) / omb;
  const double cx = params.h * gamma_n(b, n) / (2.0 * omb * omb);
  const double extra =
      scheme == Scheme::Alternating ? -params.h * delta_n(b, n) / (2.0 * omb * omb) : 0.0;
  return assemble(game, p, lead, cx, extra);
}

Velocity field_baseline_o2(const Game& game, const HBParams& params, const Point& p) {
  return assemble(game, p, 1.0 / (1.0 - params.beta), 0.0, 0.0);
}

Velocity field_gradient_flow(const Game& game, const Point& p) {
  return assemble(game, p, 1.0, 0.0, 0.0);
}

Velocity evaluate_field(const Game& game, const FieldSpec& spec, const Point& p, long n) {
  switch (spec.kind) {
    case FieldKind::ContinuousSim: return field_sim(game, spec.params, p);
    case FieldKind::ContinuousAlt: return field_alt(game, spec.params, p);
    case FieldKind::TransientSim:
      return field_transient(game, spec.params, n, Scheme::Simultaneous, p, spec.leading);
    case FieldKind::TransientAlt:
      return field_transient(game, spec.params, n, Scheme::Alternating, p, spec.leading);
    case FieldKind::BaselineO2: return field_baseline_o2(game, spec.params, p);
    case FieldKind::GradientFlow: return field_gradient_flow(game, p);
  }
  throw Error(ErrorKind::InvalidParams, "unknown field kind");
}

double gamma_n(double beta, long n) {
  if (n < 0) throw Error(ErrorKind::InvalidParams, "n must be >= 0");
  // Σ_{i=0..n} β^{n−i} [(1+β)(1+β^{2i+1}) − 4β^{i+1}], accumulated Horner-style in i
  double acc = 0.0;
  double bi1 = beta;          // β^{i+1}
  double b2i1 = beta;         // β^{2i+1}
  for (long i = 0; i <= n; ++i) {
    acc = acc * beta + ((1.0 + beta) * (1.0 + b2i1) - 4.0 * bi1);
    bi1 *= beta;
    b2i1 *= beta * beta;
  }
  return acc;
}

double delta_n(double beta, long n) {
  if (n < 0) throw Error(ErrorKind::InvalidParams, "n must be >= 0");
  double acc = 0.0;
  double bi1 = beta;
  for (long i = 0; i <= n; ++i) {
    acc = acc * beta + (1.0 - bi1) * (1.0 - beta);
    bi1 *= beta;
  }
  return 2.0 * acc;
}

long warmup_steps(double h, double beta) {
  if (beta == 0.0) return 0;
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidParams, "h must be > 0");
  const double v = 4.0 * std::log(h) / std::log(std::abs(beta));
  return v <= 0.0 ? 0 : static_cast<long>(std::ceil(v));
}

namespace {

void axpy(Point& out, const Point& base, double a, const Velocity& v) {
  out.x = base.x + a * v.dx;
  out.y = base.y + a * v.dy;
}

}  // namespace

Trajectory integrate(const Game& game, const FieldSpec& field, const IntegratorConfig& cfg,
                     const VectorXd& x0, const VectorXd& y0) {
  field.params.validate();
  const double h = field.params.h;
  const double dt_req = cfg.dt > 0.0 ? cfg.dt : h / 10.0;
  if (!(dt_req > 0.0)) throw Error(ErrorKind::InvalidParams, "dt must be > 0");
  if (dt_req > h * (1.0 + 1e-12))
    throw Error(ErrorKind::InvalidParams, "dt must not exceed the step size h");
  if (cfg.steps < 0) throw Error(ErrorKind::InvalidParams, "steps must be >= 0");
  const long sub = std::max(1L, std::lround(h / dt_req));
  const double dt = h / static_cast<double>(sub);

  Point z{x0, y0};
  game.check_dims(z);
  Trajectory tr;
  tr.meta = {{"kind", "ode"},
             {"field", to_string(field.kind)},
             {"h", h},
             {"beta", field.params.beta},
             {"steps", cfg.steps},
             {"game", game.describe()},
             {"integrator",
              {{"method", to_string(cfg.method)},
               {"dt", dt},
               {"field_kind", to_string(field.kind)},
               {"n_convention", to_string(field.leading)},
               {"n0", field.n}}}};
  tr.states.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  tr.states.push_back({cfg.index0, cfg.index0 * h, z.x, z.y});

  Point tmp;
  for (long k = 0; k < cfg.steps; ++k) {
    const long n = field.n + k;
    for (long s = 0; s < sub; ++s) {
      if (cfg.method == Method::Euler) {
        Velocity k1 = evaluate_field(game, field, z, n);
        z.x += dt * k1.dx;
        z.y += dt * k1.dy;
      } else {
        Velocity k1 = evaluate_field(game, field, z, n);
        axpy(tmp, z, 0.5 * dt, k1);
        Velocity k2 = evaluate_field(game, field, tmp, n);
        axpy(tmp, z, 0.5 * dt, k2);
        Velocity k3 = evaluate_field(game, field, tmp, n);
        axpy(tmp, z, dt, k3);
        Velocity k4 = evaluate_field(game, field, tmp, n);
        z.x += (dt / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
        z.y += (dt / 6.0) * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
      }
      if (!z.x.allFinite() || !z.y.allFinite()) break;
    }
    if (!z.x.allFinite() || !z.y.allFinite()) {
      tr.diverged = true;
      break;
    }
    const long idx = cfg.index0 + k + 1;
    tr.states.push_back({idx, idx * h, z.x, z.y});
    if (!within_bounds(z)) {
      tr.diverged = true;
      break;
    }
  }
  tr.meta["diverged"] = tr.diverged;
  return tr;
}

}  // namespace mmhb
