#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gpcsg/model.hpp"

namespace gpcsg {

enum class BoundaryKind { periodic, outflow, driver };

/// Boundary policy of one side. A driver side imposes driver_state(t, xi)
/// in its ghost cells.
struct BoundarySide {
  BoundaryKind kind = BoundaryKind::outflow;
};

struct Boundaries {
  BoundarySide x_lo, x_hi, y_lo, y_hi;
};

/// An uncertain initial-boundary value problem for the Euler equations.
struct ProblemSetup {
  std::string name;
  int dims = 1;
  double x_lo = 0.0, x_hi = 1.0;
  double y_lo = 0.0, y_hi = 1.0;
  double t_final = 0.0;
  GammaLaw gamma;
  Boundaries boundary;

  /// Primitive initial state at (x, y, xi).
  std::function<Primitive(double x, double y, double xi)> initial;
  /// Discontinuity locations of the initial data along x / y for a given xi;
  /// projection splits the cell quadrature there.
  std::function<std::vector<double>(double xi)> x_breaks;
  std::function<std::vector<double>(double xi)> y_breaks;
  /// Primitive state imposed on driver sides.
  std::function<Primitive(double t, double xi)> driver_state;
  /// Exact solution (primitive), when one is known.
  std::function<Primitive(double x, double y, double t, double xi)> exact;

  EulerModel model() const { return EulerModel(dims, gamma); }
};

/// Sine wave advected with uncertain velocity 0.8 + 0.2 xi, periodic on [0, 1].
Primitive exact_smooth(double x, double t, double xi);

/// Names accepted by builtin_problem.
std::vector<std::string> builtin_problem_names();

/// Throws ConfigError for unknown names.
ProblemSetup builtin_problem(const std::string& name);

}  // namespace gpcsg
