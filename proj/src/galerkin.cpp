#include "gpcsg/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gpcsg/errors.hpp"

namespace gpcsg {

namespace {

std::span<const double> as_span(const GpcState& s) { return {s.flat().data(), static_cast<std::size_t>(s.size())}; }

void check_shape(const GalerkinSystem& sys, const GpcState& s) {
  if (s.modes() != sys.modes() || s.vars() != sys.vars()) {
    throw ConfigError("GpcState shape does not match the Galerkin system");
  }
}

}  // namespace

GalerkinSystem::GalerkinSystem(std::shared_ptr<const HyperbolicModel> model, int order, GalerkinOptions options)
    : model_(std::move(model)), options_(options), basis_(order), vars_(model_->vars()) {
  const int n_xi = options_.xi_nodes > 0 ? options_.xi_nodes : std::max(2 * (order + 1), 8);
  if (options_.path_nodes < 1) throw ConfigError("path rule needs at least one node");
  if (options_.alpha_safety < 1.0) throw ConfigError("alpha safety factor must be >= 1");
  xi_rule_ = gauss_rule(n_xi);
  path_rule_ = gauss_rule_unit(options_.path_nodes);
  phi_nodes_ = basis_.tabulate(xi_rule_.nodes);

  const int m = modes();
  wphiphi_.resize(xi_rule_.size() * m * m);
  for (std::size_t q = 0; q < xi_rule_.size(); ++q) {
    const double* phi = &phi_nodes_[q * m];
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) wphiphi_[(q * m + i) * m + j] = xi_rule_.weights[q] * phi[i] * phi[j];
    }
  }

  const int nq = static_cast<int>(xi_rule_.size());
  for (int j = 0; j < m; ++j) {
    for (int i = j; i < m; ++i) pair_index_.emplace_back(i, j);
  }
  pair_weights_.resize(static_cast<Eigen::Index>(pair_index_.size()), nq);
  phiw_t_.resize(m, nq);
  phi_mat_.resize(nq, m);
  for (int q = 0; q < nq; ++q) {
    for (std::size_t p = 0; p < pair_index_.size(); ++p) {
      const auto [i, j] = pair_index_[p];
      pair_weights_(static_cast<Eigen::Index>(p), q) = wphiphi_[(q * m + i) * m + j];
    }
    for (int i = 0; i < m; ++i) {
      phiw_t_(i, q) = xi_rule_.weights[q] * phi_nodes_[q * m + i];
      phi_mat_(q, i) = phi_nodes_[q * m + i];
    }
  }

  sample_xi_ = xi_rule_.nodes;
  sample_xi_.push_back(-1.0);
  sample_xi_.push_back(1.0);
  phi_samples_ = basis_.tabulate(sample_xi_);

  check_xi_ = xi_rule_.nodes;
  const int k = std::max(options_.check_points, 2);
  for (int i = 0; i < k; ++i) check_xi_.push_back(-1.0 + 2.0 * i / (k - 1));
  std::sort(check_xi_.begin(), check_xi_.end());
  check_xi_.erase(std::unique(check_xi_.begin(), check_xi_.end()), check_xi_.end());
  phi_check_ = basis_.tabulate(check_xi_);
}

GalerkinWorkspace GalerkinSystem::make_workspace() const {
  GalerkinWorkspace ws;
  const std::size_t nodes = xi_rule_.size();
  ws.a0.resize(size(), size());
  ws.rhs.resize(size());
  ws.states.resize(nodes * vars_);
  ws.left_at_nodes.resize(sample_xi_.size() * vars_);
  ws.right_at_nodes.resize(sample_xi_.size() * vars_);
  ws.vec_at_nodes.resize(nodes * vars_);
  ws.sym0.resize(vars_ * vars_);
  ws.sym1.resize(vars_ * vars_);
  ws.sym_stack.resize(static_cast<Eigen::Index>(nodes), vars_ * vars_);
  ws.y_stack.resize(static_cast<Eigen::Index>(nodes), vars_);
  ws.pairs.resize(static_cast<Eigen::Index>(pair_index_.size()), vars_ * vars_);
  return ws;
}

void GalerkinSystem::eval_at_nodes(std::span<const double> state, std::span<double> out) const noexcept {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> coeffs(state.data(), modes(), vars_);
  Eigen::Map<RowMajor> values(out.data(), static_cast<Eigen::Index>(xi_rule_.size()), vars_);
  values.noalias() = phi_mat_ * coeffs;
}

void GalerkinSystem::accumulate(std::span<const double> node_states, double weight, Axis axis,
                                std::span<const double> v_at_nodes, GalerkinWorkspace& ws) const {
  // Block sums become two small products: pairs += W S and rhs += (w phi)^T Y.
  const int n = vars_;
  const int nn = n * n;
  const bool with_rhs = !v_at_nodes.empty();
  for (std::size_t q = 0; q < xi_rule_.size(); ++q) {
    const auto u = node_states.subspan(q * n, n);
    const double xi = xi_rule_.nodes[q];
    if (!model_->is_admissible(u, xi)) {
      throw InadmissibleState("Galerkin assembly: inadmissible state at xi node " + std::to_string(xi), xi);
    }
    model_->symmetrizers(u, xi, axis, ws.sym0, ws.sym1);
    const auto row = static_cast<Eigen::Index>(q);
    for (int k = 0; k < nn; ++k) ws.sym_stack(row, k) = weight * ws.sym0[k];
    if (with_rhs) {
      const double* v = &v_at_nodes[q * n];
      for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int b = 0; b < n; ++b) s += ws.sym1[a * n + b] * v[b];
        ws.y_stack(row, a) = weight * s;
      }
    }
  }
  ws.pairs.noalias() += pair_weights_ * ws.sym_stack;
  if (with_rhs) {
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> rhs(ws.rhs.data(), modes(), n);
    rhs.noalias() += phiw_t_ * ws.y_stack;
  }
}

void GalerkinSystem::factor(GalerkinWorkspace& ws) const {
  const int n = vars_;
  for (std::size_t p = 0; p < pair_index_.size(); ++p) {
    const auto [i, j] = pair_index_[p];
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < n; ++a) ws.a0(i * n + a, j * n + b) = ws.pairs(static_cast<Eigen::Index>(p), a * n + b);
    }
  }
  ws.llt.compute(ws.a0);
  if (ws.llt.info() != Eigen::Success) {
    throw HyperbolicityLoss("symmetric factorization of A0_hat failed: Galerkin system lost hyperbolicity");
  }
}

void GalerkinSystem::apply_b(std::span<const double> state, std::span<const double> v, Axis axis,
                             std::span<double> out, GalerkinWorkspace& ws) const {
  eval_at_nodes(state, ws.states);
  eval_at_nodes(v, ws.vec_at_nodes);
  ws.pairs.setZero();
  ws.rhs.setZero();
  accumulate(ws.states, 1.0, axis, ws.vec_at_nodes, ws);
  factor(ws);
  Eigen::Map<Eigen::VectorXd>(out.data(), size()) = ws.llt.solve(ws.rhs);
}

double GalerkinSystem::alpha_bound(std::span<const double> left, std::span<const double> right, Axis axis,
                                   GalerkinWorkspace& ws) const {
  const int m = modes();
  const int n = vars_;
  const std::size_t ns = sample_xi_.size();
  for (std::size_t q = 0; q < ns; ++q) {
    const auto phi = std::span<const double>(&phi_samples_[q * m], m);
    gpc_eval(left, n, phi, std::span<double>(ws.left_at_nodes).subspan(q * n, n));
    gpc_eval(right, n, phi, std::span<double>(ws.right_at_nodes).subspan(q * n, n));
  }
  double alpha = 0.0;
  double u[16];
  for (double s : path_rule_.nodes) {
    for (std::size_t q = 0; q < ns; ++q) {
      const double* l = &ws.left_at_nodes[q * n];
      const double* r = &ws.right_at_nodes[q * n];
      for (int a = 0; a < n; ++a) u[a] = l[a] + s * (r[a] - l[a]);
      alpha = std::max(alpha, model_->max_speed(std::span<const double>(u, n), sample_xi_[q], axis));
    }
  }
  return alpha;
}

double GalerkinSystem::fluctuations(std::span<const double> left, std::span<const double> right, Axis axis,
                                    std::span<double> b_minus_jump, std::span<double> b_plus_jump,
                                    GalerkinWorkspace& ws) const {
  const int n = vars_;
  const int dim = size();
  const double alpha = options_.alpha_safety * alpha_bound(left, right, axis, ws);

  bool zero_jump = true;
  for (int k = 0; k < dim; ++k) {
    if (left[k] != right[k]) {
      zero_jump = false;
      break;
    }
  }
  if (zero_jump) {
    std::fill(b_minus_jump.begin(), b_minus_jump.end(), 0.0);
    std::fill(b_plus_jump.begin(), b_plus_jump.end(), 0.0);
    return alpha;
  }

  // alpha_bound left the states at the first xi_rule_.size() samples, which
  // are exactly the quadrature nodes.
  const std::size_t nodes = xi_rule_.size();
  for (std::size_t q = 0; q < nodes * n; ++q) ws.vec_at_nodes[q] = ws.right_at_nodes[q] - ws.left_at_nodes[q];
  ws.pairs.setZero();
  ws.rhs.setZero();
  for (std::size_t mm = 0; mm < path_rule_.size(); ++mm) {
    const double s = path_rule_.nodes[mm];
    for (std::size_t q = 0; q < nodes * n; ++q) ws.states[q] = ws.left_at_nodes[q] + s * ws.vec_at_nodes[q];
    accumulate(ws.states, path_rule_.weights[mm], axis, ws.vec_at_nodes, ws);
  }
  factor(ws);
  const Eigen::VectorXd bpsi_jump = ws.llt.solve(ws.rhs);
  for (int k = 0; k < dim; ++k) {
    const double jump = right[k] - left[k];
    b_minus_jump[k] = 0.5 * (bpsi_jump[k] - alpha * jump);
    b_plus_jump[k] = 0.5 * (bpsi_jump[k] + alpha * jump);
  }
  return alpha;
}

GalerkinMatrices GalerkinSystem::assemble(const GpcState& state, Axis axis) const {
  check_shape(*this, state);
  const int m = modes();
  const int n = vars_;
  GalerkinMatrices out{Eigen::MatrixXd::Zero(size(), size()), Eigen::MatrixXd::Zero(size(), size())};
  std::vector<double> states(xi_rule_.size() * n);
  eval_at_nodes(as_span(state), states);
  std::vector<double> a0(n * n), a1(n * n);
  for (std::size_t q = 0; q < xi_rule_.size(); ++q) {
    const auto u = std::span<const double>(&states[q * n], n);
    const double xi = xi_rule_.nodes[q];
    if (!model_->is_admissible(u, xi)) {
      throw InadmissibleState("Galerkin assembly: inadmissible state at xi node " + std::to_string(xi), xi);
    }
    model_->symmetrizers(u, xi, axis, a0, a1);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const double c = wphiphi_[(q * m + i) * m + j];
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            out.a0_hat(i * n + a, j * n + b) += c * a0[a * n + b];
            out.a1_hat(i * n + a, j * n + b) += c * a1[a * n + b];
          }
        }
      }
    }
  }
  return out;
}

GalerkinMatrices GalerkinSystem::path_averaged(const GpcState& left, const GpcState& right, Axis axis) const {
  check_shape(*this, left);
  check_shape(*this, right);
  GalerkinMatrices sum{Eigen::MatrixXd::Zero(size(), size()), Eigen::MatrixXd::Zero(size(), size())};
  for (std::size_t mm = 0; mm < path_rule_.size(); ++mm) {
    const double s = path_rule_.nodes[mm];
    GpcState psi(modes(), vars_, left.flat() + s * (right.flat() - left.flat()));
    if (auto chk = check_admissible(psi); !chk) {
      throw InadmissibleState("path state at s = " + std::to_string(s) + " leaves the admissible set (xi = " +
                                  std::to_string(chk.witness) + ")",
                              chk.witness);
    }
    const auto blocks = assemble(psi, axis);
    sum.a0_hat += path_rule_.weights[mm] * blocks.a0_hat;
    sum.a1_hat += path_rule_.weights[mm] * blocks.a1_hat;
  }
  return sum;
}

Eigen::MatrixXd GalerkinSystem::path_matrix(const GpcState& left, const GpcState& right, Axis axis) const {
  const auto sum = path_averaged(left, right, axis);
  Eigen::LLT<Eigen::MatrixXd> llt(sum.a0_hat);
  if (llt.info() != Eigen::Success) {
    throw HyperbolicityLoss("symmetric factorization of the path-averaged A0_hat failed");
  }
  return llt.solve(sum.a1_hat);
}

double GalerkinSystem::alpha_bound(const GpcState& left, const GpcState& right, Axis axis) const {
  check_shape(*this, left);
  check_shape(*this, right);
  auto ws = make_workspace();
  return alpha_bound(as_span(left), as_span(right), axis, ws);
}

AdmissibilityCheck GalerkinSystem::check_admissible(const GpcState& state) const {
  check_shape(*this, state);
  return check_admissible(as_span(state));
}

AdmissibilityCheck GalerkinSystem::check_admissible(std::span<const double> state) const noexcept {
  const int m = modes();
  double u[16];
  for (std::size_t q = 0; q < check_xi_.size(); ++q) {
    gpc_eval(state, vars_, std::span<const double>(&phi_check_[q * m], m), std::span<double>(u, vars_));
    if (!model_->is_admissible(std::span<const double>(u, vars_), check_xi_[q])) return {false, check_xi_[q]};
  }
  return {true, 0.0};
}

FluctuationSplit lf_split(const Eigen::MatrixXd& bpsi, double alpha) {
  if (alpha < 0.0) throw ConfigError("lf_split: alpha must be nonnegative");
  const Eigen::MatrixXd shift = alpha * Eigen::MatrixXd::Identity(bpsi.rows(), bpsi.cols());
  return {0.5 * (bpsi - shift), 0.5 * (bpsi + shift), alpha};
}

}  // namespace gpcsg
