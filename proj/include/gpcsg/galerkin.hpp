#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "gpcsg/basis.hpp"
#include "gpcsg/model.hpp"

namespace gpcsg {

struct GalerkinOptions {
  /// Gauss nodes in xi for the block integrals; 0 selects max(2(M+1), 8).
  int xi_nodes = 0;
  /// Gauss nodes on the straight path between interface states.
  int path_nodes = 3;
  /// Multiplier applied to the sampled wave-speed bound before it is used in
  /// the fluctuation splitting and the time-step restriction.
  double alpha_safety = 1.05;
  /// Equispaced xi points added to the admissibility check set.
  int check_points = 33;
};

/// Blocks A0_hat, A1_hat of the Galerkin system A0_hat dU/dt + A1_hat dU/dx = 0.
struct GalerkinMatrices {
  Eigen::MatrixXd a0_hat;
  Eigen::MatrixXd a1_hat;
};

/// B+ and B- with B- + B+ = B_psi and B+ - B- = alpha I.
struct FluctuationSplit {
  Eigen::MatrixXd b_minus;
  Eigen::MatrixXd b_plus;
  double alpha = 0.0;
};

struct AdmissibilityCheck {
  bool admissible = true;
  double witness = 0.0;  // offending xi when not admissible

  explicit operator bool() const noexcept { return admissible; }
};

/// Scratch buffers for the allocation-free assembly path. One per thread.
struct GalerkinWorkspace {
  Eigen::MatrixXd a0;
  Eigen::VectorXd rhs;
  Eigen::LLT<Eigen::MatrixXd> llt;
  std::vector<double> states;  // physical states at xi nodes, per path point
  std::vector<double> left_at_nodes;
  std::vector<double> right_at_nodes;
  std::vector<double> vec_at_nodes;
  std::vector<double> sym0, sym1;
  Eigen::MatrixXd sym_stack;  // weighted A0 per xi node (row-major N x N per row)
  Eigen::MatrixXd y_stack;    // weighted A1 v per xi node
  Eigen::MatrixXd pairs;      // lower-triangle blocks of A0_hat, one row per (i >= j)
};

/// Stochastic Galerkin discretization of a hyperbolic model with an
/// orthonormal Legendre basis of order M.
///
/// All members are const and thread-compatible; the span overloads take an
/// explicit workspace.
class GalerkinSystem {
 public:
  GalerkinSystem(std::shared_ptr<const HyperbolicModel> model, int order, GalerkinOptions options = {});

  const HyperbolicModel& model() const noexcept { return *model_; }
  const OrthonormalBasis& basis() const noexcept { return basis_; }
  const QuadratureRule& xi_rule() const noexcept { return xi_rule_; }
  const QuadratureRule& path_rule() const noexcept { return path_rule_; }
  const std::vector<double>& check_set() const noexcept { return check_xi_; }
  const GalerkinOptions& options() const noexcept { return options_; }

  int modes() const noexcept { return basis_.size(); }
  int vars() const noexcept { return vars_; }
  /// (M+1) N
  int size() const noexcept { return modes() * vars_; }

  /// Full A0_hat, A1_hat at a state. Throws InadmissibleState naming the
  /// first quadrature node where u_M(xi) is inadmissible.
  GalerkinMatrices assemble(const GpcState& state, Axis axis = Axis::x) const;

  /// Path-averaged intermediate matrix (sum w A0_hat)^{-1} (sum w A1_hat)
  /// along the straight segment from left to right.
  Eigen::MatrixXd path_matrix(const GpcState& left, const GpcState& right, Axis axis = Axis::x) const;

  /// Path-averaged blocks sum_m w_m A_k_hat(Psi(s_m)).
  GalerkinMatrices path_averaged(const GpcState& left, const GpcState& right, Axis axis = Axis::x) const;

  /// max over path nodes, xi samples and characteristic fields of |lambda|.
  /// The xi samples are the quadrature nodes plus the endpoints -1 and 1.
  /// No safety factor is applied.
  double alpha_bound(const GpcState& left, const GpcState& right, Axis axis = Axis::x) const;
  double alpha_bound(std::span<const double> left, std::span<const double> right, Axis axis,
                     GalerkinWorkspace& ws) const;

  /// Membership of the lifted admissible set, tested on the check set.
  AdmissibilityCheck check_admissible(const GpcState& state) const;
  AdmissibilityCheck check_admissible(std::span<const double> state) const noexcept;

  /// out = A0_hat(state)^{-1} A1_hat(state) v without forming either inverse.
  void apply_b(std::span<const double> state, std::span<const double> v, Axis axis, std::span<double> out,
               GalerkinWorkspace& ws) const;

  /// Interface fluctuations B-(R - L) and B+(R - L) of the Lax-Friedrichs
  /// splitting. Returns the alpha used, which includes the safety factor.
  double fluctuations(std::span<const double> left, std::span<const double> right, Axis axis,
                      std::span<double> b_minus_jump, std::span<double> b_plus_jump, GalerkinWorkspace& ws) const;

  GalerkinWorkspace make_workspace() const;

 private:
  // Physical states at the xi nodes: out[q * N + v].
  void eval_at_nodes(std::span<const double> state, std::span<double> out) const noexcept;
  // Accumulates weight * A0_hat into ws.a0 and weight * A1_hat v into ws.rhs
  // for physical node states (nodes x N).
  void accumulate(std::span<const double> node_states, double weight, Axis axis,
                  std::span<const double> v_at_nodes, GalerkinWorkspace& ws) const;
  void factor(GalerkinWorkspace& ws) const;

  std::shared_ptr<const HyperbolicModel> model_;
  GalerkinOptions options_;
  OrthonormalBasis basis_;
  int vars_;
  QuadratureRule xi_rule_;
  QuadratureRule path_rule_;
  std::vector<double> phi_nodes_;    // phi at xi nodes
  std::vector<double> wphiphi_;      // w_q phi_i phi_j, per node
  Eigen::MatrixXd pair_weights_;     // (i >= j pairs) x nodes: w_q phi_i phi_j
  Eigen::MatrixXd phiw_t_;           // modes x nodes: w_q phi_i
  Eigen::MatrixXd phi_mat_;          // nodes x modes: phi_i(xi_q)
  std::vector<std::pair<int, int>> pair_index_;
  std::vector<double> sample_xi_;    // xi nodes and endpoints
  std::vector<double> phi_samples_;
  std::vector<double> check_xi_;
  std::vector<double> phi_check_;
};

/// B+- = (B_psi +- alpha I) / 2.
FluctuationSplit lf_split(const Eigen::MatrixXd& bpsi, double alpha);

}  // namespace gpcsg
