#include "gpcsg/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpcsg/errors.hpp"

namespace gpcsg {

SplitSchedule split_coefficients(double dt) {
  const double s13 = std::sqrt(13.0);
  const double r = std::sqrt(2.0 * (1.0 + s13));
  SplitSchedule sch;
  const double t1 = 2.0 * dt / (5.0 - s13 + r);
  const double t2 = (7.0 + s13 - r) / 12.0 * dt;
  const double t3 = t1 * t1 / (t2 - t1);
  sch.taus = {t1, t2, t3, dt - (t1 + t2 + t3)};
  sch.mode = SplitMode::thirdorder;
  return sch;
}

std::vector<Sweep> sweep_sequence(const SplitSchedule& schedule, double dt) {
  if (schedule.mode == SplitMode::strang) {
    return {{Axis::x, 0.5 * dt}, {Axis::y, dt}, {Axis::x, 0.5 * dt}};
  }
  const auto [t1, t2, t3, t4] = schedule.taus;
  const Axis a = schedule.swapped ? Axis::x : Axis::y;  // applied first
  const Axis b = schedule.swapped ? Axis::y : Axis::x;
  return {{a, t4}, {b, t3 + t4}, {a, t3}, {b, t2}, {a, t1 + t2}, {b, t1}};
}

namespace {

BoundaryPair pair_for(const BoundarySide& lo, const BoundarySide& hi) {
  if (lo.kind == BoundaryKind::driver || hi.kind == BoundaryKind::driver) {
    throw ConfigError("driver boundaries are not supported in 2D");
  }
  return BoundaryPair{lo.kind, hi.kind, {}, {}};
}

}  // namespace

SplitSolver::SplitSolver(const GalerkinSystem& system, Mesh2D mesh, Boundaries boundary, SchemeOptions options,
                         StepController controller)
    : sys_(system), mesh_(mesh), controller_(std::move(controller)) {
  if (system.model().dims() != 2) throw ConfigError("SplitSolver needs a two-dimensional model");
  x_scheme_ = std::make_unique<FvScheme>(sys_, mesh_.x, pair_for(boundary.x_lo, boundary.x_hi), Axis::x, options);
  y_scheme_ = std::make_unique<FvScheme>(sys_, mesh_.y, pair_for(boundary.y_lo, boundary.y_hi), Axis::y, options);
}

void SplitSolver::sweep(Field2D& field, Axis axis, double t, double tau, LimiterLog* log) const {
  if (tau == 0.0) return;
  const bool along_x = axis == Axis::x;
  const int lines = along_x ? field.ny() : field.nx();
  const int n = along_x ? field.nx() : field.ny();
  const int w = field.width();
  FvScheme& scheme = along_x ? *x_scheme_ : *y_scheme_;
  scheme.set_log(log);
  CellField line(n, w);
  for (int l = 0; l < lines; ++l) {
    for (int c = 0; c < n; ++c) {
      const auto src = along_x ? field.cell(c, l) : field.cell(l, c);
      std::copy(src.begin(), src.end(), line.cell(c).begin());
    }
    if (log) log->line = l;
    try {
      gpcsg::advance(line, t, tau, scheme, controller_);
    } catch (const InadmissibleState& e) {
      throw InadmissibleState(std::string(e.what()) + (along_x ? " (row " : " (column ") + std::to_string(l) + ")",
                              e.xi());
    }
    for (int c = 0; c < n; ++c) {
      auto dst = along_x ? field.cell(c, l) : field.cell(l, c);
      std::copy(line.cell(c).begin(), line.cell(c).end(), dst.begin());
    }
  }
  scheme.set_log(nullptr);
  if (log) log->line = -1;
}

void SplitSolver::advance(Field2D& field, double t, double dt, SplitMode mode, LimiterLog* log) {
  SplitSchedule schedule = mode == SplitMode::thirdorder ? split_coefficients(dt) : SplitSchedule{};
  schedule.mode = mode;
  schedule.swapped = swapped;
  // sub-step times follow the x and y clocks separately
  double tx = t;
  double ty = t;
  for (const auto& s : sweep_sequence(schedule, dt)) {
    double& clock = s.axis == Axis::x ? tx : ty;
    sweep(field, s.axis, clock, s.tau, log);
    clock += s.tau;
  }
  if (mode == SplitMode::thirdorder && alternate) swapped = !swapped;
}

double SplitSolver::stable_dt(const Field2D& field, double t) const {
  const int w = field.width();
  double rate = 0.0;
  for (const Axis axis : {Axis::x, Axis::y}) {
    const bool along_x = axis == Axis::x;
    const int lines = along_x ? field.ny() : field.nx();
    const int n = along_x ? field.nx() : field.ny();
    const FvScheme& scheme = along_x ? *x_scheme_ : *y_scheme_;
    CellField line(n, w);
    for (int l = 0; l < lines; ++l) {
      for (int c = 0; c < n; ++c) {
        const auto src = along_x ? field.cell(c, l) : field.cell(l, c);
        std::copy(src.begin(), src.end(), line.cell(c).begin());
      }
      scheme.prepare(line, t);
      rate = std::max(rate, scheme.max_alpha(line, t) / scheme.dx());
    }
  }
  return rate > 0.0 ? controller_.cfl / rate : controller_.dt_max;
}

}  // namespace gpcsg
