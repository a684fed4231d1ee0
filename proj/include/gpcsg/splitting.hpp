#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "gpcsg/fv_scheme.hpp"
#include "gpcsg/time_integration.hpp"

namespace gpcsg {

struct Mesh2D {
  Mesh1D x;
  Mesh1D y;
};

/// Cell averages on an nx x ny mesh, cell (i, k) at index k * nx + i.
class Field2D {
 public:
  Field2D() = default;
  Field2D(int nx, int ny, int width) : nx_(nx), ny_(ny), width_(width), data_(static_cast<std::size_t>(nx) * ny * width, 0.0) {}

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  int width() const noexcept { return width_; }

  std::span<double> cell(int i, int k) noexcept {
    return {data_.data() + (static_cast<std::size_t>(k) * nx_ + i) * width_, static_cast<std::size_t>(width_)};
  }
  std::span<const double> cell(int i, int k) const noexcept {
    return {data_.data() + (static_cast<std::size_t>(k) * nx_ + i) * width_, static_cast<std::size_t>(width_)};
  }
  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  int nx_ = 0, ny_ = 0, width_ = 0;
  std::vector<double> data_;
};

enum class SplitMode { strang, thirdorder };

/// Sub-step lengths of one split step.
struct SplitSchedule {
  std::array<double, 4> taus{};
  SplitMode mode = SplitMode::thirdorder;
  /// false: x-sweep last in the written product (the E_x^{tau1} ... E_y^{tau4}
  /// ordering); true: the x/y-swapped ordering.
  bool swapped = false;
};

/// Third-order coefficients: tau1 = 2dt / (5 - sqrt13 + sqrt(2(1+sqrt13))),
/// tau2 = (7 + sqrt13 - sqrt(2(1+sqrt13))) dt / 12, tau3 = tau1^2/(tau2-tau1),
/// tau4 = dt - (tau1 + tau2 + tau3). tau4 is negative for dt > 0.
SplitSchedule split_coefficients(double dt);

struct Sweep {
  Axis axis;
  double tau;
};

/// Sweeps in application order (first applied first).
std::vector<Sweep> sweep_sequence(const SplitSchedule& schedule, double dt);

/// Dimension-by-dimension gPC-SG solver for 2D problems.
class SplitSolver {
 public:
  SplitSolver(const GalerkinSystem& x_system, Mesh2D mesh, Boundaries boundary, SchemeOptions options,
              StepController controller);

  /// Applies the 1D scheme along every line of the axis for time tau.
  void sweep(Field2D& field, Axis axis, double t, double tau, LimiterLog* log = nullptr) const;

  /// One split step of length dt; in thirdorder mode with alternation the
  /// ordering flips on each call.
  void advance(Field2D& field, double t, double dt, SplitMode mode, LimiterLog* log = nullptr);

  /// Largest stable outer step: cfl / max(alpha_x / dx, alpha_y / dy).
  double stable_dt(const Field2D& field, double t) const;

  bool alternate = true;
  bool swapped = false;

  const Mesh2D& mesh() const noexcept { return mesh_; }

 private:
  const GalerkinSystem& sys_;
  Mesh2D mesh_;
  StepController controller_;
  std::unique_ptr<FvScheme> x_scheme_;
  std::unique_ptr<FvScheme> y_scheme_;
};

}  // namespace gpcsg
