#pragma once

#include <functional>
#include <limits>

#include "gpcsg/fv_scheme.hpp"

namespace gpcsg {

struct StepController {
  double cfl = 0.6;
  /// Fixed step as a function of the mesh spacing (e.g. dx^{5/3}); replaces
  /// the CFL rule when set.
  std::function<double(double dx)> dt_override;
  double t_final = 0.0;
  /// Step used when the wave-speed bound vanishes.
  double dt_max = std::numeric_limits<double>::infinity();
};

/// cfl * dx / alpha (or the override), clipped so t + dt does not pass t_final.
double compute_dt(double alpha_global, double dx, const StepController& controller, double t);

/// One third-order TVD Runge-Kutta step; the operator's prepare() runs
/// before each stage evaluation. dt may be negative.
void rk3_step(CellField& u, double t, double dt, const SemiDiscreteOperator& op);

struct AdvanceStats {
  std::int64_t steps = 0;
};

/// Advances from t to t + duration (duration may be negative) with CFL-limited
/// steps whose magnitude never exceeds cfl * dx / alpha. When log is set its
/// step counter is advanced once per step.
AdvanceStats advance(CellField& u, double t, double duration, const SemiDiscreteOperator& op,
                     const StepController& controller, LimiterLog* log = nullptr);

}  // namespace gpcsg
