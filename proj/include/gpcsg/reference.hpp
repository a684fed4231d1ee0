#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gpcsg/basis.hpp"
#include "gpcsg/model.hpp"
#include "gpcsg/problems.hpp"

namespace gpcsg {

// ---------------------------------------------------------------------------
// Exact Riemann solver for the ideal-gas Euler equations

enum class WaveKind { rarefaction, shock };

struct RiemannSolution {
  Primitive left, right;
  double gamma = 1.4;
  double p_star = 0.0;
  double u_star = 0.0;
  double rho_star_left = 0.0;
  double rho_star_right = 0.0;
  WaveKind left_wave = WaveKind::rarefaction;
  WaveKind right_wave = WaveKind::rarefaction;

  /// Self-similar solution at speed s = x / t.
  Primitive sample(double s) const;
};

/// Star state by Newton iteration (bisection-safeguarded, tolerance 1e-12)
/// on the pressure function. Throws VacuumError if the data generate vacuum.
RiemannSolution exact_riemann(const Primitive& left, const Primitive& right, double gamma);

/// Convenience: sampled primitive state at s = x / t.
Primitive exact_riemann(const Primitive& left, const Primitive& right, double gamma, double s);

struct ProfileStats {
  std::vector<double> mean;
  std::vector<double> std;
};

/// Mean and standard deviation over xi (rule) of the exact cell-averaged
/// density for the uncertain-interface Sod problem, interface at
/// 0.5 + 0.05 xi. Cell averages use 5-point Gauss per cell.
ProfileStats exact_sod_stats(const std::vector<double>& faces, double t, double gamma, const QuadratureRule& rule);

// ---------------------------------------------------------------------------
// Stochastic collocation with a deterministic finite-difference WENO solver

struct CollocationPlan {
  QuadratureRule rule = gauss_rule(40);
  double cfl = 0.6;
};

/// Point values at cell centers, conserved variables, cell (i, k) at
/// (k * nx + i) * vars.
struct DeterministicField {
  int nx = 0, ny = 1, vars = 0;
  std::vector<double> values;
};

struct CollocationResult {
  std::vector<DeterministicField> nodes;  // one run per collocation node
  DeterministicField mean;
  DeterministicField std;
};

/// Deterministic FD-WENO5 run (Lax-Friedrichs flux splitting, RK3) of the
/// problem frozen at xi. ny is ignored for 1D problems.
DeterministicField deterministic_solve(const ProblemSetup& problem, double xi, int nx, int ny, double cfl,
                                       double t_final);

CollocationResult collocation_solve(const ProblemSetup& problem, const CollocationPlan& plan, int nx, int ny = 1,
                                    double t_final = -1.0, bool keep_nodes = true);

// ---------------------------------------------------------------------------
// Error norms

/// cell_volume * sum |a - b| per component; a and b hold `vars` interleaved
/// components. Throws ConfigError on length mismatch.
Eigen::VectorXd error_norm_l1(const std::vector<double>& a, const std::vector<double>& b, int vars,
                              double cell_volume);

/// Against an exact sampler: the reference for cell j is its 5-point Gauss
/// average on [faces[j], faces[j+1]].
Eigen::VectorXd error_norm_l1(const std::vector<double>& a, const std::vector<double>& faces, int vars,
                              const std::function<Eigen::VectorXd(double x)>& exact);

}  // namespace gpcsg
