#include "gpcsg/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gpcsg/errors.hpp"

namespace gpcsg {

namespace {

constexpr double kNewtonTol = 1e-15;
constexpr int kNewtonMaxIter = 100;

void check_xi(double xi) {
  if (!(xi >= -1.0 && xi <= 1.0)) throw DomainError("xi = " + std::to_string(xi) + " outside [-1, 1]");
}

// Sorts the rule by node, keeping weights attached.
void sort_rule(QuadratureRule& rule) {
  std::vector<std::size_t> idx(rule.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return rule.nodes[a] < rule.nodes[b]; });
  QuadratureRule sorted;
  for (auto i : idx) {
    sorted.nodes.push_back(rule.nodes[i]);
    sorted.weights.push_back(rule.weights[i]);
  }
  rule = std::move(sorted);
}

}  // namespace

std::pair<double, double> legendre_with_derivative(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0;
  double p = x;
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = p_next;
  }
  double dp;
  if (std::abs(std::abs(x) - 1.0) < 1e-14) {
    const double end = 0.5 * n * (n + 1.0);
    dp = (x > 0.0 || n % 2 == 1) ? end : -end;
  } else {
    dp = n * (x * p - p_prev) / (x * x - 1.0);
  }
  return {p, dp};
}

QuadratureRule gauss_rule(int n) {
  if (n < 1) throw ConfigError("gauss_rule needs n >= 1, got " + std::to_string(n));
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < kNewtonMaxIter; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < kNewtonTol) break;
    }
    const auto [p, dp] = legendre_with_derivative(n, x);
    (void)p;
    rule.nodes[i] = x;
    // 2 / ((1-x^2) P_n'^2), halved for the probability measure
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  sort_rule(rule);
  return rule;
}

QuadratureRule gauss_rule_unit(int n) {
  QuadratureRule rule = gauss_rule(n);
  for (auto& x : rule.nodes) x = 0.5 * (x + 1.0);
  return rule;
}

QuadratureRule gauss_lobatto_rule(int q) {
  if (q < 2) throw ConfigError("gauss_lobatto_rule needs q >= 2, got " + std::to_string(q));
  const int n = q - 1;
  QuadratureRule rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  rule.nodes[0] = -1.0;
  rule.nodes[q - 1] = 1.0;
  // interior nodes are the roots of P'_{q-1}; Newton on P' using P'' from the
  // Legendre ODE (1-x^2)P'' = 2xP' - n(n+1)P
  for (int i = 1; i < q - 1; ++i) {
    double x = -std::cos(std::numbers::pi * i / n);
    for (int it = 0; it < kNewtonMaxIter; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double ddp = (2.0 * x * dp - n * (n + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / ddp;
      x -= dx;
      if (std::abs(dx) < kNewtonTol) break;
    }
    rule.nodes[i] = x;
  }
  if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
  for (int i = 0; i < q; ++i) {
    const double p = legendre_with_derivative(n, rule.nodes[i]).first;
    rule.weights[i] = 1.0 / (n * (n + 1.0) * p * p);
  }
  sort_rule(rule);
  return rule;
}

OrthonormalBasis::OrthonormalBasis(int order) : order_(order) {
  if (order < 0) throw ConfigError("gPC order must be nonnegative, got " + std::to_string(order));
}

double OrthonormalBasis::eval(int i, double xi) const {
  if (i < 0 || i > order_) {
    throw DomainError("basis index " + std::to_string(i) + " outside [0, " + std::to_string(order_) + "]");
  }
  check_xi(xi);
  return std::sqrt(2.0 * i + 1.0) * legendre_with_derivative(i, xi).first;
}

void OrthonormalBasis::eval_all(double xi, std::span<double> out) const noexcept {
  double p_prev = 1.0;
  double p = xi;
  out[0] = 1.0;
  if (order_ >= 1) out[1] = std::sqrt(3.0) * xi;
  for (int k = 1; k < order_; ++k) {
    const double p_next = ((2.0 * k + 1.0) * xi * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = p_next;
    out[k + 1] = std::sqrt(2.0 * k + 3.0) * p;
  }
}

std::vector<double> OrthonormalBasis::tabulate(std::span<const double> nodes) const {
  std::vector<double> table(nodes.size() * size());
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    eval_all(nodes[q], std::span<double>(table).subspan(q * size(), size()));
  }
  return table;
}

GpcState::GpcState(int modes, int vars, Eigen::VectorXd flat)
    : modes_(modes), vars_(vars), data_(std::move(flat)) {
  if (data_.size() != static_cast<Eigen::Index>(modes) * vars) {
    throw ConfigError("GpcState: flat vector has wrong length");
  }
}

Eigen::VectorXd gpc_eval(const GpcState& coeffs, const OrthonormalBasis& basis, double xi) {
  check_xi(xi);
  if (coeffs.modes() != basis.size()) throw ConfigError("gpc_eval: basis size does not match state");
  std::vector<double> phi(basis.size());
  basis.eval_all(xi, phi);
  Eigen::VectorXd out(coeffs.vars());
  gpc_eval(std::span<const double>(coeffs.flat().data(), coeffs.size()), coeffs.vars(), phi,
           std::span<double>(out.data(), out.size()));
  return out;
}

MeanStd mean_std(const GpcState& coeffs) {
  MeanStd out;
  out.mean = coeffs.mode(0);
  Eigen::VectorXd var = Eigen::VectorXd::Zero(coeffs.vars());
  for (int i = 1; i < coeffs.modes(); ++i) var += coeffs.mode(i).cwiseAbs2();
  out.std = var.cwiseSqrt();
  return out;
}

}  // namespace gpcsg
