#pragma once

#include <memory>
#include <span>

#include <Eigen/Dense>

namespace gpcsg {

enum class Axis { x, y };

/// Admissibility floors for density and pressure.
inline constexpr double kDensityFloor = 1e-13;
inline constexpr double kPressureFloor = 1e-13;

struct EigenStructure {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd left;  // rows are left eigenvectors, unit Euclidean norm
};

struct Symmetrizers {
  Eigen::MatrixXd a0;  // L^T L
  Eigen::MatrixXd a1;  // L^T Lambda L
};

/// Hyperbolic system dU/dt + dF(U; xi)/dx (+ dG(U; xi)/dy) = 0 whose closure
/// may depend on the random variable xi.
///
/// The span-based members are the hot path used by the Galerkin assembly;
/// they do no validation beyond what is documented.
class HyperbolicModel {
 public:
  virtual ~HyperbolicModel() = default;

  virtual int vars() const noexcept = 0;
  virtual int dims() const noexcept = 0;

  virtual bool is_admissible(std::span<const double> u, double xi) const noexcept = 0;

  /// Flux along axis. Throws InadmissibleState for inadmissible u.
  virtual void flux(std::span<const double> u, double xi, Axis axis, std::span<double> f) const = 0;

  /// max_l |lambda_l(u; xi)| along axis. Throws InadmissibleState.
  virtual double max_speed(std::span<const double> u, double xi, Axis axis) const = 0;

  /// Eigenvalues and left eigenvectors (row-major N x N into left).
  virtual void eigen(std::span<const double> u, double xi, Axis axis, std::span<double> lambda,
                     std::span<double> left) const = 0;

  /// A0 = L^T L and A1 = L^T Lambda L, row-major N x N. Throws InadmissibleState.
  void symmetrizers(std::span<const double> u, double xi, Axis axis, std::span<double> a0,
                    std::span<double> a1) const;

  Eigen::VectorXd flux(const Eigen::VectorXd& u, double xi, Axis axis = Axis::x) const;
  EigenStructure eigen(const Eigen::VectorXd& u, double xi, Axis axis = Axis::x) const;
  Symmetrizers symmetrizers(const Eigen::VectorXd& u, double xi, Axis axis = Axis::x) const;
  bool is_admissible(const Eigen::VectorXd& u, double xi) const noexcept;
};

/// Adiabatic index Gamma(xi) = base + slope * xi.
struct GammaLaw {
  double base = 1.4;
  double slope = 0.0;

  double operator()(double xi) const noexcept { return base + slope * xi; }
};

/// Primitive variables (rho, u, v, p); v is ignored in one dimension.
struct Primitive {
  double rho = 1.0;
  double u = 0.0;
  double v = 0.0;
  double p = 1.0;
};

/// Ideal-gas Euler equations in one or two space dimensions.
/// Conserved variables: (rho, rho u, E) or (rho, rho u, rho v, E).
class EulerModel final : public HyperbolicModel {
 public:
  EulerModel(int dims, GammaLaw gamma);

  using HyperbolicModel::eigen;
  using HyperbolicModel::flux;
  using HyperbolicModel::is_admissible;

  int vars() const noexcept override { return dims_ + 2; }
  int dims() const noexcept override { return dims_; }
  const GammaLaw& gamma() const noexcept { return gamma_; }

  bool is_admissible(std::span<const double> u, double xi) const noexcept override;
  void flux(std::span<const double> u, double xi, Axis axis, std::span<double> f) const override;
  double max_speed(std::span<const double> u, double xi, Axis axis) const override;
  void eigen(std::span<const double> u, double xi, Axis axis, std::span<double> lambda,
             std::span<double> left) const override;

  double pressure(std::span<const double> u, double xi) const noexcept;
  Eigen::VectorXd conserved(const Primitive& w, double xi) const;
  Primitive primitive(std::span<const double> u, double xi) const noexcept;

 private:
  int dims_;
  GammaLaw gamma_;
};

}  // namespace gpcsg
