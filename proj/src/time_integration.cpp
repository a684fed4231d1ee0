#include "gpcsg/time_integration.hpp"

#include <cmath>

#include "gpcsg/errors.hpp"

namespace gpcsg {

double compute_dt(double alpha_global, double dx, const StepController& controller, double t) {
  if (!(controller.cfl > 0.0 && controller.cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
  double dt;
  if (controller.dt_override) {
    dt = controller.dt_override(dx);
  } else if (alpha_global > 0.0) {
    dt = controller.cfl * dx / alpha_global;
  } else {
    dt = controller.dt_max;
  }
  const double remaining = controller.t_final - t;
  if (dt > remaining) dt = remaining;
  return dt;
}

void rk3_step(CellField& u, double t, double dt, const SemiDiscreteOperator& op) {
  auto& un = u.data();
  CellField stage = u;
  CellField rate(u.cells(), u.width());
  auto& us = stage.data();
  auto& r = rate.data();

  op.prepare(u, t);
  op.evaluate(u, t, rate);
  for (std::size_t k = 0; k < un.size(); ++k) us[k] = un[k] + dt * r[k];

  op.prepare(stage, t + dt);
  op.evaluate(stage, t + dt, rate);
  // 3/4 u^n + 1/4 (u* + dt L) written as an increment so zero rates leave u^n bitwise intact
  for (std::size_t k = 0; k < un.size(); ++k) us[k] = un[k] + 0.25 * ((us[k] - un[k]) + dt * r[k]);

  op.prepare(stage, t + 0.5 * dt);
  op.evaluate(stage, t + 0.5 * dt, rate);
  for (std::size_t k = 0; k < un.size(); ++k) un[k] += 2.0 / 3.0 * ((us[k] - un[k]) + dt * r[k]);
}

AdvanceStats advance(CellField& u, double t, double duration, const SemiDiscreteOperator& op,
                     const StepController& controller, LimiterLog* log) {
  AdvanceStats stats;
  if (duration == 0.0) return stats;
  const double sign = duration > 0.0 ? 1.0 : -1.0;
  const double magnitude = std::abs(duration);
  StepController local = controller;
  local.t_final = magnitude;
  double elapsed = 0.0;
  while (elapsed < magnitude) {
    op.prepare(u, t + sign * elapsed);
    const double alpha = local.dt_override ? 0.0 : op.max_alpha(u, t + sign * elapsed);
    double dt = compute_dt(alpha, op.dx(), local, elapsed);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("advance: could not determine a positive time step");
    // avoid a sliver step from round-off in the accumulated time
    if (magnitude - (elapsed + dt) < 1e-12 * magnitude) dt = magnitude - elapsed;
    rk3_step(u, t + sign * elapsed, sign * dt, op);
    elapsed = (magnitude - (elapsed + dt) <= 0.0) ? magnitude : elapsed + dt;
    ++stats.steps;
    if (log) ++log->step;
  }
  return stats;
}

}  // namespace gpcsg
