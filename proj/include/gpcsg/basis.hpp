#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace gpcsg {

/// Quadrature nodes and weights. For rules on the random domain the weights
/// are normalized to the uniform probability measure, i.e. they sum to 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1] with weights summing to 1
/// (measure dxi/2). Exact for polynomials of degree <= 2n-1.
QuadratureRule gauss_rule(int n);

/// n-point Gauss-Legendre rule mapped to [0, 1], weights summing to 1.
QuadratureRule gauss_rule_unit(int n);

/// q-point Gauss-Lobatto rule on [-1, 1] (endpoints included), weights
/// summing to 1. Exact for polynomials of degree <= 2q-3.
QuadratureRule gauss_lobatto_rule(int q);

/// Legendre polynomial P_n(x) and its derivative by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x);

/// Orthonormal Legendre basis on [-1, 1] under the uniform probability
/// measure: phi_i = sqrt(2i+1) P_i.
///
/// The class is the seam for other random dimensions or measures; only the
/// one-dimensional uniform case exists.
class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(int order);

  int order() const noexcept { return order_; }
  int size() const noexcept { return order_ + 1; }

  /// phi_i(xi); throws DomainError for i outside [0, M] or xi outside [-1, 1].
  double eval(int i, double xi) const;

  /// All phi_0..phi_M at xi, written into out (size M+1). No range checks.
  void eval_all(double xi, std::span<double> out) const noexcept;

  /// Table phi[q * (M+1) + i] = phi_i(nodes[q]).
  std::vector<double> tabulate(std::span<const double> nodes) const;

 private:
  int order_;
};

/// Coefficients of one gPC expansion: (M+1) modes of N components each,
/// stored mode-major (all components of mode 0 first, then mode 1, ...).
class GpcState {
 public:
  GpcState() = default;
  GpcState(int modes, int vars) : modes_(modes), vars_(vars), data_(Eigen::VectorXd::Zero(modes * vars)) {}
  GpcState(int modes, int vars, Eigen::VectorXd flat);

  int modes() const noexcept { return modes_; }
  int vars() const noexcept { return vars_; }
  Eigen::Index size() const noexcept { return data_.size(); }

  double& operator()(int mode, int var) { return data_[mode * vars_ + var]; }
  double operator()(int mode, int var) const { return data_[mode * vars_ + var]; }

  auto mode(int i) { return data_.segment(i * vars_, vars_); }
  auto mode(int i) const { return data_.segment(i * vars_, vars_); }

  Eigen::VectorXd& flat() noexcept { return data_; }
  const Eigen::VectorXd& flat() const noexcept { return data_; }

 private:
  int modes_ = 0;
  int vars_ = 0;
  Eigen::VectorXd data_;
};

/// u_M(xi) = sum_i u_i phi_i(xi). Throws DomainError when xi is outside [-1, 1].
Eigen::VectorXd gpc_eval(const GpcState& coeffs, const OrthonormalBasis& basis, double xi);

/// Evaluates the expansion given precomputed basis values phi (size M+1).
inline void gpc_eval(std::span<const double> coeffs, int vars, std::span<const double> phi,
                     std::span<double> out) noexcept {
  for (int v = 0; v < vars; ++v) out[v] = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double* c = coeffs.data() + i * vars;
    for (int v = 0; v < vars; ++v) out[v] += c[v] * phi[i];
  }
}

struct MeanStd {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
};

/// Mean is mode 0; variance is the sum of squares of modes 1..M.
MeanStd mean_std(const GpcState& coeffs);

/// Projects f(xi) onto phi_0..phi_M with the given rule.
template <typename F>
GpcState project(const OrthonormalBasis& basis, const QuadratureRule& rule, int vars, F&& f) {
  GpcState out(basis.size(), vars);
  std::vector<double> phi(basis.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd u = f(rule.nodes[q]);
    basis.eval_all(rule.nodes[q], phi);
    for (int i = 0; i < basis.size(); ++i) out.mode(i) += rule.weights[q] * phi[i] * u;
  }
  return out;
}

}  // namespace gpcsg
