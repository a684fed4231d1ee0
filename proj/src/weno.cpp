#include "gpcsg/weno.hpp"

#include <Eigen/Dense>

#include "gpcsg/basis.hpp"

namespace gpcsg {

namespace {

// Coefficients w with sum_l w_l ubar_l = p(z) for the polynomial of degree
// cells.size()-1 matching the averages of the given cells (cell c spans
// [c - 1/2, c + 1/2]).
Eigen::VectorXd point_from_averages(const std::vector<int>& cells, double z) {
  const int n = static_cast<int>(cells.size());
  Eigen::MatrixXd moments(n, n);
  for (int r = 0; r < n; ++r) {
    const double a = cells[r] - 0.5;
    const double b = cells[r] + 0.5;
    double pa = a;
    double pb = b;
    for (int p = 0; p < n; ++p) {
      moments(r, p) = (pb - pa) / (p + 1);
      pa *= a;
      pb *= b;
    }
  }
  Eigen::VectorXd powers(n);
  double zp = 1.0;
  for (int p = 0; p < n; ++p) {
    powers[p] = zp;
    zp *= z;
  }
  // p(z) = powers . a with moments a = ubar, so the weights are moments^{-T} powers
  return moments.transpose().fullPivLu().solve(powers);
}

}  // namespace

Weno5::Weno5(std::span<const double> offsets) {
  for (double z : offsets) {
    Point pt{};
    pt.offset = z;
    Eigen::MatrixXd cand = Eigen::MatrixXd::Zero(5, 3);
    for (int k = 0; k < 3; ++k) {
      const auto w = point_from_averages({k - 2, k - 1, k}, z);
      for (int l = 0; l < 3; ++l) cand(k + l, k) = w[l];
    }
    const auto full = point_from_averages({-2, -1, 0, 1, 2}, z);
    const Eigen::Vector3d d = cand.colPivHouseholderQr().solve(full);
    for (int k = 0; k < 3; ++k) {
      pt.linear[k] = d[k];
      for (int l = 0; l < 5; ++l) pt.diff[k][l] = l == 2 ? 0.0 : cand(l, k);
    }
    points_.push_back(pt);
  }
}

std::array<double, 3> weno_smoothness(const double* v, std::ptrdiff_t s) noexcept {
  const double um2 = v[0], um1 = v[s], u0 = v[2 * s], up1 = v[3 * s], up2 = v[4 * s];
  const double a0 = um2 - 2.0 * um1 + u0, b0 = um2 - 4.0 * um1 + 3.0 * u0;
  const double a1 = um1 - 2.0 * u0 + up1, b1 = um1 - up1;
  const double a2 = u0 - 2.0 * up1 + up2, b2 = 3.0 * u0 - 4.0 * up1 + up2;
  constexpr double c = 13.0 / 12.0;
  return {c * a0 * a0 + 0.25 * b0 * b0, c * a1 * a1 + 0.25 * b1 * b1, c * a2 * a2 + 0.25 * b2 * b2};
}

void Weno5::reconstruct(const double* stencil, double* out, WenoWeights mode) const noexcept {
  reconstruct(stencil, 1, out, 1, mode);
}

void Weno5::reconstruct(const double* v, std::ptrdiff_t s, double* out, std::ptrdiff_t out_stride,
                        WenoWeights mode) const noexcept {
  const double uj = v[2 * s];
  const double diff[5] = {v[0] - uj, v[s] - uj, 0.0, v[3 * s] - uj, v[4 * s] - uj};
  std::array<double, 3> inv{1.0, 1.0, 1.0};
  if (mode == WenoWeights::nonlinear) {
    const auto beta = weno_smoothness(v, s);
    for (int k = 0; k < 3; ++k) {
      const double e = kEpsilon + beta[k];
      inv[k] = 1.0 / (e * e);
    }
  }
  for (std::size_t p = 0; p < points_.size(); ++p) {
    const Point& pt = points_[p];
    double wsum = 0.0;
    double acc = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double w = pt.linear[k] * inv[k];
      double cand = 0.0;
      for (int l = 0; l < 5; ++l) cand += pt.diff[k][l] * diff[l];
      acc += w * cand;
      wsum += w;
    }
    out[p * out_stride] = uj + acc / wsum;
  }
}

const Weno5& Weno5::lobatto4() {
  static const Weno5 instance = [] {
    const auto rule = gauss_lobatto_rule(4);
    std::vector<double> z;
    for (double x : rule.nodes) z.push_back(0.5 * x);
    return Weno5(z);
  }();
  return instance;
}

const Weno5& Weno5::right_face() {
  static const Weno5 instance(std::vector<double>{0.5});
  return instance;
}

}  // namespace gpcsg
