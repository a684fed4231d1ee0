#pragma once

#include <array>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "gpcsg/basis.hpp"
#include "gpcsg/galerkin.hpp"
#include "gpcsg/model.hpp"

namespace testutil {

inline gpcsg::Primitive random_primitive(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.2, 2.0), vel(-1.5, 1.5);
  return {pos(rng), vel(rng), vel(rng), pos(rng)};
}

/// Central-difference Jacobian of the flux along axis, step h.
inline Eigen::MatrixXd fd_jacobian(const gpcsg::HyperbolicModel& m, const Eigen::VectorXd& u, double xi,
                                   gpcsg::Axis axis, double h = 1e-6) {
  const int n = m.vars();
  Eigen::MatrixXd a(n, n);
  for (int c = 0; c < n; ++c) {
    Eigen::VectorXd up = u, dn = u;
    up[c] += h;
    dn[c] -= h;
    a.col(c) = (m.flux(up, xi, axis) - m.flux(dn, xi, axis)) / (2 * h);
  }
  return a;
}

inline double spectral_radius(const Eigen::MatrixXd& b) {
  return Eigen::EigenSolver<Eigen::MatrixXd>(b, false).eigenvalues().cwiseAbs().maxCoeff();
}

inline double max_imag(const Eigen::MatrixXd& b) {
  return Eigen::EigenSolver<Eigen::MatrixXd>(b, false).eigenvalues().imag().cwiseAbs().maxCoeff();
}

/// Projection of a random primitive field varying smoothly in xi; retried
/// until it lies in the lifted admissible set.
inline gpcsg::GpcState random_gpc_state(const gpcsg::GalerkinSystem& sys, const gpcsg::EulerModel& model,
                                        std::mt19937_64& rng, double amplitude = 0.2) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto rule = gpcsg::gauss_rule(24);
  for (;;) {
    const auto w0 = random_primitive(rng);
    std::array<double, 8> a{};
    for (double& c : a) c = amplitude * unit(rng);
    auto state = gpcsg::project(sys.basis(), rule, model.vars(), [&](double xi) {
      gpcsg::Primitive w = w0;
      w.rho *= 1.0 + a[0] * xi + 0.5 * a[1] * xi * xi;
      w.u += a[2] * xi + a[3] * std::sin(2.0 * xi);
      w.v += a[4] * xi;
      w.p *= 1.0 + a[5] * xi + 0.5 * a[6] * std::cos(3.0 * xi);
      return model.conserved(w, xi);
    });
    if (sys.check_admissible(state)) return state;
  }
}

}  // namespace testutil
