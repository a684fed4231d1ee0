#include "gpcsg/model.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "gpcsg/errors.hpp"

namespace gpcsg {

void HyperbolicModel::symmetrizers(std::span<const double> u, double xi, Axis axis, std::span<double> a0,
                                   std::span<double> a1) const {
  const int n = vars();
  std::array<double, 16> lambda{};
  std::array<double, 64> left{};
  eigen(u, xi, axis, std::span<double>(lambda.data(), n), std::span<double>(left.data(), n * n));
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c) {
      double s0 = 0.0;
      double s1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double prod = left[k * n + r] * left[k * n + c];
        s0 += prod;
        s1 += lambda[k] * prod;
      }
      a0[r * n + c] = a0[c * n + r] = s0;
      a1[r * n + c] = a1[c * n + r] = s1;
    }
  }
}

Eigen::VectorXd HyperbolicModel::flux(const Eigen::VectorXd& u, double xi, Axis axis) const {
  Eigen::VectorXd f(vars());
  flux(std::span<const double>(u.data(), u.size()), xi, axis, std::span<double>(f.data(), f.size()));
  return f;
}

EigenStructure HyperbolicModel::eigen(const Eigen::VectorXd& u, double xi, Axis axis) const {
  const int n = vars();
  EigenStructure es{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> left(n, n);
  eigen(std::span<const double>(u.data(), u.size()), xi, axis, std::span<double>(es.eigenvalues.data(), n),
        std::span<double>(left.data(), n * n));
  es.left = left;
  return es;
}

Symmetrizers HyperbolicModel::symmetrizers(const Eigen::VectorXd& u, double xi, Axis axis) const {
  const int n = vars();
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> a0(n, n), a1(n, n);
  symmetrizers(std::span<const double>(u.data(), u.size()), xi, axis, std::span<double>(a0.data(), n * n),
               std::span<double>(a1.data(), n * n));
  return {a0, a1};
}

bool HyperbolicModel::is_admissible(const Eigen::VectorXd& u, double xi) const noexcept {
  return u.size() == vars() && is_admissible(std::span<const double>(u.data(), u.size()), xi);
}

EulerModel::EulerModel(int dims, GammaLaw gamma) : dims_(dims), gamma_(gamma) {
  if (dims != 1 && dims != 2) throw ConfigError("Euler model supports 1 or 2 dimensions");
}

double EulerModel::pressure(std::span<const double> u, double xi) const noexcept {
  const double rho = u[0];
  double kinetic = u[1] * u[1];
  if (dims_ == 2) kinetic += u[2] * u[2];
  return (gamma_(xi) - 1.0) * (u[dims_ + 1] - 0.5 * kinetic / rho);
}

bool EulerModel::is_admissible(std::span<const double> u, double xi) const noexcept {
  if (!(u[0] > kDensityFloor)) return false;
  const double p = pressure(u, xi);
  return p > kPressureFloor && std::isfinite(p);
}

Eigen::VectorXd EulerModel::conserved(const Primitive& w, double xi) const {
  const double g = gamma_(xi);
  Eigen::VectorXd u(vars());
  u[0] = w.rho;
  u[1] = w.rho * w.u;
  if (dims_ == 2) {
    u[2] = w.rho * w.v;
    u[3] = w.p / (g - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v);
  } else {
    u[2] = w.p / (g - 1.0) + 0.5 * w.rho * w.u * w.u;
  }
  return u;
}

Primitive EulerModel::primitive(std::span<const double> u, double xi) const noexcept {
  Primitive w;
  w.rho = u[0];
  w.u = u[1] / u[0];
  w.v = dims_ == 2 ? u[2] / u[0] : 0.0;
  w.p = pressure(u, xi);
  return w;
}

namespace {

[[noreturn]] void throw_inadmissible(std::span<const double> u, double xi) {
  std::string msg = "inadmissible state (";
  for (std::size_t i = 0; i < u.size(); ++i) msg += (i ? ", " : "") + std::to_string(u[i]);
  msg += ") at xi = " + std::to_string(xi);
  throw InadmissibleState(msg, xi);
}

}  // namespace

void EulerModel::flux(std::span<const double> u, double xi, Axis axis, std::span<double> f) const {
  if (!is_admissible(u, xi)) throw_inadmissible(u, xi);
  const double p = pressure(u, xi);
  const int e = dims_ + 1;
  const int normal = (dims_ == 2 && axis == Axis::y) ? 2 : 1;
  const double vn = u[normal] / u[0];
  f[0] = u[normal];
  for (int k = 1; k <= dims_; ++k) f[k] = u[k] * vn;
  f[normal] += p;
  f[e] = vn * (u[e] + p);
}

double EulerModel::max_speed(std::span<const double> u, double xi, Axis axis) const {
  if (!is_admissible(u, xi)) throw_inadmissible(u, xi);
  const int normal = (dims_ == 2 && axis == Axis::y) ? 2 : 1;
  const double c = std::sqrt(gamma_(xi) * pressure(u, xi) / u[0]);
  return std::abs(u[normal] / u[0]) + c;
}

void EulerModel::eigen(std::span<const double> u, double xi, Axis axis, std::span<double> lambda,
                       std::span<double> left) const {
  if (!is_admissible(u, xi)) throw_inadmissible(u, xi);
  const double g = gamma_(xi);
  const double b = g - 1.0;
  const double rho = u[0];
  const double p = pressure(u, xi);
  const double c2 = g * p / rho;
  const double c = std::sqrt(c2);
  const int n = vars();

  if (dims_ == 1) {
    const double vx = u[1] / rho;
    const double q2 = vx * vx;
    const double rows[3][3] = {
        {0.5 * b * q2 + vx * c, -b * vx - c, b},
        {1.0 - 0.5 * b * q2 / c2, b * vx / c2, -b / c2},
        {0.5 * b * q2 - vx * c, -b * vx + c, b},
    };
    lambda[0] = vx - c;
    lambda[1] = vx;
    lambda[2] = vx + c;
    for (int r = 0; r < 3; ++r) {
      const double norm = std::sqrt(rows[r][0] * rows[r][0] + rows[r][1] * rows[r][1] + rows[r][2] * rows[r][2]);
      for (int k = 0; k < 3; ++k) left[r * 3 + k] = rows[r][k] / norm;
    }
    return;
  }

  // 2D: work in the frame where the normal velocity occupies slot 1, then
  // swap the momentum columns back for the y direction.
  const bool swap = axis == Axis::y;
  const double vn = (swap ? u[2] : u[1]) / rho;
  const double vt = (swap ? u[1] : u[2]) / rho;
  const double q2 = vn * vn + vt * vt;
  double rows[4][4] = {
      {0.5 * b * q2 + vn * c, -b * vn - c, -b * vt, b},
      {1.0 - 0.5 * b * q2 / c2, b * vn / c2, b * vt / c2, -b / c2},
      {-vt, 0.0, 1.0, 0.0},
      {0.5 * b * q2 - vn * c, -b * vn + c, -b * vt, b},
  };
  lambda[0] = vn - c;
  lambda[1] = vn;
  lambda[2] = vn;
  lambda[3] = vn + c;
  for (int r = 0; r < 4; ++r) {
    if (swap) std::swap(rows[r][1], rows[r][2]);
    double norm = 0.0;
    for (int k = 0; k < 4; ++k) norm += rows[r][k] * rows[r][k];
    norm = std::sqrt(norm);
    for (int k = 0; k < n; ++k) left[r * n + k] = rows[r][k] / norm;
  }
}

}  // namespace gpcsg
