#include <algorithm>
#include <cmath>
#include <string>

#include "gpcsg/errors.hpp"
#include "gpcsg/reference.hpp"

namespace gpcsg {

namespace {

constexpr double kPressureTol = 1e-12;
constexpr int kMaxIter = 200;

struct Side {
  double rho, u, p, c;
};

// Pressure function f_K(p) and its derivative (shock branch for p > p_K).
std::pair<double, double> pressure_function(double p, const Side& k, double g) {
  if (p > k.p) {
    const double a = 2.0 / ((g + 1.0) * k.rho);
    const double b = (g - 1.0) / (g + 1.0) * k.p;
    const double root = std::sqrt(a / (p + b));
    return {(p - k.p) * root, root * (1.0 - 0.5 * (p - k.p) / (b + p))};
  }
  const double ratio = p / k.p;
  const double f = 2.0 * k.c / (g - 1.0) * (std::pow(ratio, (g - 1.0) / (2.0 * g)) - 1.0);
  const double df = 1.0 / (k.rho * k.c) * std::pow(ratio, -(g + 1.0) / (2.0 * g));
  return {f, df};
}

}  // namespace

RiemannSolution exact_riemann(const Primitive& left, const Primitive& right, double g) {
  if (!(left.rho > 0.0 && left.p > 0.0 && right.rho > 0.0 && right.p > 0.0)) {
    throw InadmissibleState("exact_riemann: nonpositive density or pressure in the data", std::nan(""));
  }
  const Side l{left.rho, left.u, left.p, std::sqrt(g * left.p / left.rho)};
  const Side r{right.rho, right.u, right.p, std::sqrt(g * right.p / right.rho)};
  const double du = r.u - l.u;
  if (2.0 * (l.c + r.c) / (g - 1.0) <= du) throw VacuumError("exact_riemann: data generate vacuum");

  auto total = [&](double p) {
    const auto [fl, dfl] = pressure_function(p, l, g);
    const auto [fr, dfr] = pressure_function(p, r, g);
    return std::pair{fl + fr + du, dfl + dfr};
  };

  // two-rarefaction initial guess
  const double z = (g - 1.0) / (2.0 * g);
  double p = std::pow((l.c + r.c - 0.5 * (g - 1.0) * du) / (l.c / std::pow(l.p, z) + r.c / std::pow(r.p, z)), 1.0 / z);
  p = std::max(p, kPressureTol);

  // bracket [lo, hi] with f(lo) < 0 < f(hi); f is increasing in p
  double lo = 0.0;
  double hi = std::max({p, l.p, r.p});
  while (total(hi).first < 0.0) hi *= 2.0;

  bool converged = false;
  for (int it = 0; it < kMaxIter; ++it) {
    const auto [f, df] = total(p);
    if (f < 0.0) {
      lo = p;
    } else {
      hi = p;
    }
    double next = p - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double change = std::abs(next - p) / (0.5 * (next + p));
    p = next;
    if (change < kPressureTol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error("exact_riemann: pressure iteration did not converge");

  RiemannSolution sol;
  sol.left = left;
  sol.right = right;
  sol.gamma = g;
  sol.p_star = p;
  const double fl = pressure_function(p, l, g).first;
  const double fr = pressure_function(p, r, g).first;
  sol.u_star = 0.5 * (l.u + r.u) + 0.5 * (fr - fl);
  const double g6 = (g - 1.0) / (g + 1.0);
  auto star_density = [&](const Side& k, WaveKind& kind) {
    const double ratio = p / k.p;
    if (p > k.p) {
      kind = WaveKind::shock;
      return k.rho * (ratio + g6) / (g6 * ratio + 1.0);
    }
    kind = WaveKind::rarefaction;
    return k.rho * std::pow(ratio, 1.0 / g);
  };
  sol.rho_star_left = star_density(l, sol.left_wave);
  sol.rho_star_right = star_density(r, sol.right_wave);
  return sol;
}

Primitive RiemannSolution::sample(double s) const {
  const double g = gamma;
  const double g6 = (g - 1.0) / (g + 1.0);
  if (s <= u_star) {
    const Primitive& k = left;
    const double c = std::sqrt(g * k.p / k.rho);
    if (left_wave == WaveKind::shock) {
      const double speed = k.u - c * std::sqrt((g + 1.0) / (2.0 * g) * p_star / k.p + (g - 1.0) / (2.0 * g));
      if (s <= speed) return k;
      return {rho_star_left, u_star, 0.0, p_star};
    }
    const double head = k.u - c;
    const double c_star = c * std::pow(p_star / k.p, (g - 1.0) / (2.0 * g));
    const double tail = u_star - c_star;
    if (s <= head) return k;
    if (s >= tail) return {rho_star_left, u_star, 0.0, p_star};
    const double factor = 2.0 / (g + 1.0) + g6 / c * (k.u - s);
    return {k.rho * std::pow(factor, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * k.u + s), 0.0,
            k.p * std::pow(factor, 2.0 * g / (g - 1.0))};
  }
  const Primitive& k = right;
  const double c = std::sqrt(g * k.p / k.rho);
  if (right_wave == WaveKind::shock) {
    const double speed = k.u + c * std::sqrt((g + 1.0) / (2.0 * g) * p_star / k.p + (g - 1.0) / (2.0 * g));
    if (s >= speed) return k;
    return {rho_star_right, u_star, 0.0, p_star};
  }
  const double head = k.u + c;
  const double c_star = c * std::pow(p_star / k.p, (g - 1.0) / (2.0 * g));
  const double tail = u_star + c_star;
  if (s >= head) return k;
  if (s <= tail) return {rho_star_right, u_star, 0.0, p_star};
  const double factor = 2.0 / (g + 1.0) - g6 / c * (k.u - s);
  return {k.rho * std::pow(factor, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * k.u + s), 0.0,
          k.p * std::pow(factor, 2.0 * g / (g - 1.0))};
}

Primitive exact_riemann(const Primitive& left, const Primitive& right, double gamma, double s) {
  return exact_riemann(left, right, gamma).sample(s);
}

ProfileStats exact_sod_stats(const std::vector<double>& faces, double t, double gamma, const QuadratureRule& rule) {
  if (!(t > 0.0)) throw ConfigError("exact_sod_stats needs t > 0");
  if (faces.size() < 2) throw ConfigError("exact_sod_stats needs at least one cell");
  const auto sol = exact_riemann({1.0, 0.0, 0.0, 1.0}, {0.125, 0.0, 0.0, 0.1}, gamma);
  const auto cell_rule = gauss_rule(5);
  const std::size_t cells = faces.size() - 1;
  ProfileStats out{std::vector<double>(cells, 0.0), std::vector<double>(cells, 0.0)};
  std::vector<double> avg(rule.size());
  for (std::size_t j = 0; j < cells; ++j) {
    const double a = faces[j];
    const double b = faces[j + 1];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double interface = 0.5 + 0.05 * rule.nodes[q];
      double s = 0.0;
      for (std::size_t g = 0; g < cell_rule.size(); ++g) {
        const double x = 0.5 * (a + b) + 0.5 * (b - a) * cell_rule.nodes[g];
        s += cell_rule.weights[g] * sol.sample((x - interface) / t).rho;
      }
      avg[q] = s;
    }
    double mean = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) mean += rule.weights[q] * avg[q];
    double var = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) var += rule.weights[q] * (avg[q] - mean) * (avg[q] - mean);
    out.mean[j] = mean;
    out.std[j] = std::sqrt(var);
  }
  return out;
}

}  // namespace gpcsg
