#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gpcsg/galerkin.hpp"
#include "gpcsg/problems.hpp"
#include "gpcsg/weno.hpp"

namespace gpcsg {

inline constexpr int kGhost = 3;

/// Uniform 1D mesh; face j sits at lower + j * dx.
struct Mesh1D {
  int cells = 0;
  double lower = 0.0;
  double upper = 1.0;

  double dx() const noexcept { return (upper - lower) / cells; }
  double face(int j) const noexcept { return lower + j * dx(); }
  double center(int j) const noexcept { return lower + (j + 0.5) * dx(); }
};

/// Cell averages (one flattened GpcState of `width` scalars per cell) with
/// kGhost ghost cells on each side. Cell indices run from -kGhost to
/// cells + kGhost - 1.
class CellField {
 public:
  CellField() = default;
  CellField(int cells, int width) : cells_(cells), width_(width), data_((cells + 2 * kGhost) * width, 0.0) {}

  int cells() const noexcept { return cells_; }
  int width() const noexcept { return width_; }

  std::span<double> cell(int j) noexcept { return {data_.data() + (j + kGhost) * width_, static_cast<std::size_t>(width_)}; }
  std::span<const double> cell(int j) const noexcept {
    return {data_.data() + (j + kGhost) * width_, static_cast<std::size_t>(width_)};
  }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  int cells_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

struct LimiterEvent {
  enum class Kind { node, average };
  Kind kind;
  std::int64_t step;
  int line;  // grid line for 2D sweeps, -1 in 1D
  int cell;
  double theta;
};

/// Record of every limiter activation.
struct LimiterLog {
  std::vector<LimiterEvent> events;
  std::int64_t step = 0;
  int line = -1;
  std::size_t max_events = 100000;
  std::size_t node_count = 0;
  std::size_t average_count = 0;

  void add(LimiterEvent::Kind kind, int cell, double theta);
};

/// Largest s in [0, 1] with base + s (target - base) admissible, by bisection
/// (tolerance 1e-12, at most 60 iterations). base must be admissible.
double admissible_fraction(const GalerkinSystem& sys, std::span<const double> base, std::span<const double> target);

/// Scales every node toward the cell average by the common theta that makes
/// all nodes admissible. nodes holds q blocks of width scalars. Returns theta.
double limit_node_values(const GalerkinSystem& sys, std::span<const double> average, std::span<double> nodes,
                         int node_count);

/// Shrinks modes 1..M toward zero when the average leaves the lifted
/// admissible set. Returns the factor applied (1 when untouched). Throws
/// InadmissibleState when mode 0 alone is inadmissible.
double limit_cell_average(const GalerkinSystem& sys, std::span<double> average);

struct SchemeOptions {
  bool limiter = true;
  WenoWeights weights = WenoWeights::nonlinear;
};

/// Driver-side ghost data: gPC coefficients of the imposed state at time t.
using GhostProvider = std::function<void(double t, std::span<double> coeffs)>;

struct BoundaryPair {
  BoundaryKind lower = BoundaryKind::outflow;
  BoundaryKind upper = BoundaryKind::outflow;
  GhostProvider lower_driver;
  GhostProvider upper_driver;
};

/// Semi-discrete operator dU/dt = L(U) on a uniform 1D mesh.
class SemiDiscreteOperator {
 public:
  virtual ~SemiDiscreteOperator() = default;
  /// Ghost filling and admissibility limiting of the cell averages.
  virtual void prepare(CellField& u, double t) const = 0;
  /// Interior rates; returns the largest interface wave-speed bound.
  virtual double evaluate(const CellField& u, double t, CellField& rate) const = 0;
  /// Largest interface wave-speed bound of a prepared field.
  virtual double max_alpha(const CellField& u, double t) const = 0;
  virtual double dx() const = 0;
};

/// Path-conservative finite-volume WENO operator of the gPC Galerkin system
/// along one axis.
class FvScheme final : public SemiDiscreteOperator {
 public:
  FvScheme(const GalerkinSystem& system, Mesh1D mesh, BoundaryPair boundary, Axis axis = Axis::x,
           SchemeOptions options = {});

  const Mesh1D& mesh() const noexcept { return mesh_; }
  const GalerkinSystem& system() const noexcept { return sys_; }
  void set_log(LimiterLog* log) noexcept { log_ = log; }

  void fill_ghosts(CellField& u, double t) const;
  void prepare(CellField& u, double t) const override;
  double evaluate(const CellField& u, double t, CellField& rate) const override;
  double max_alpha(const CellField& u, double t) const override;
  double dx() const override { return mesh_.dx(); }

  /// Reconstructed (and limited) values at the 4 Lobatto nodes of cells
  /// -1 .. cells; layout [(j + 1) * 4 + m] blocks of width scalars.
  std::vector<double> reconstruct(const CellField& u, bool log_events) const;

 private:
  const GalerkinSystem& sys_;
  Mesh1D mesh_;
  BoundaryPair boundary_;
  Axis axis_;
  SchemeOptions options_;
  LimiterLog* log_ = nullptr;
  std::array<double, 4> lobatto_weights_{};
  std::array<std::array<double, 4>, 4> deriv_{};  // d/dz of the Lagrange basis, cell units
};

/// Driver ghost provider projecting a primitive boundary state on the basis.
GhostProvider make_driver_provider(const GalerkinSystem& system, const EulerModel& model,
                                   std::function<Primitive(double t, double xi)> state);

}  // namespace gpcsg
