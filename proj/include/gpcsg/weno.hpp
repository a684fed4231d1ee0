#pragma once

#include <array>
#include <span>
#include <vector>

namespace gpcsg {

enum class WenoWeights { nonlinear, linear };

/// Fifth-order WENO reconstruction from five consecutive cell averages
/// (u_{j-2} .. u_{j+2}) to arbitrary points inside cell j.
///
/// Candidate quadratics and linear weights are derived once for the requested
/// offsets (cell units, relative to the cell center, in [-1/2, 1/2]).
/// Nonlinear weights follow Jiang-Shu with eps = 1e-6 and exponent 2.
/// Candidates are evaluated in difference form u_j + sum c (u_l - u_j), so a
/// constant stencil reproduces the constant exactly.
class Weno5 {
 public:
  static constexpr double kEpsilon = 1e-6;

  explicit Weno5(std::span<const double> offsets);

  std::size_t points() const noexcept { return points_.size(); }
  double offset(std::size_t k) const noexcept { return points_[k].offset; }
  const std::array<double, 3>& linear_weights(std::size_t k) const noexcept { return points_[k].linear; }

  /// Values at every offset from one stencil.
  void reconstruct(const double* stencil, double* out, WenoWeights mode = WenoWeights::nonlinear) const noexcept;

  /// Strided variant: stencil value l lives at base[l * stride].
  void reconstruct(const double* base, std::ptrdiff_t stride, double* out, std::ptrdiff_t out_stride,
                   WenoWeights mode = WenoWeights::nonlinear) const noexcept;

  /// The four Gauss-Lobatto points of a cell.
  static const Weno5& lobatto4();
  /// Right face x_{j+1/2} only (left-biased face value).
  static const Weno5& right_face();

 private:
  struct Point {
    double offset;
    std::array<double, 3> linear;
    // coefficients on (u_l - u_j), l = j-2..j+2, for the three candidates
    std::array<std::array<double, 5>, 3> diff;
  };
  std::vector<Point> points_;
};

/// Jiang-Shu smoothness indicators of the three candidate stencils.
std::array<double, 3> weno_smoothness(const double* stencil, std::ptrdiff_t stride = 1) noexcept;

}  // namespace gpcsg
