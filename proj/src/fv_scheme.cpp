#include "gpcsg/fv_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpcsg/errors.hpp"

namespace gpcsg {

namespace {

constexpr double kBisectionTol = 1e-12;
constexpr int kBisectionMaxIter = 60;

}  // namespace

void LimiterLog::add(LimiterEvent::Kind kind, int cell, double theta) {
  if (kind == LimiterEvent::Kind::node) {
    ++node_count;
  } else {
    ++average_count;
  }
  if (events.size() < max_events) events.push_back({kind, step, line, cell, theta});
}

double admissible_fraction(const GalerkinSystem& sys, std::span<const double> base, std::span<const double> target) {
  const std::size_t w = base.size();
  std::vector<double> trial(w);
  auto admissible_at = [&](double s) {
    for (std::size_t k = 0; k < w; ++k) trial[k] = base[k] + s * (target[k] - base[k]);
    return sys.check_admissible(trial).admissible;
  };
  if (admissible_at(1.0)) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < kBisectionMaxIter && hi - lo > kBisectionTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (admissible_at(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double limit_node_values(const GalerkinSystem& sys, std::span<const double> average, std::span<double> nodes,
                         int node_count) {
  const std::size_t w = average.size();
  double theta = 1.0;
  for (int m = 0; m < node_count; ++m) {
    const auto node = nodes.subspan(m * w, w);
    if (sys.check_admissible(node)) continue;
    if (theta == 1.0) {
      if (auto chk = sys.check_admissible(average); !chk) {
        throw InadmissibleState("node limiter: cell average is inadmissible at xi = " + std::to_string(chk.witness),
                                chk.witness);
      }
    }
    theta = std::min(theta, admissible_fraction(sys, average, node));
  }
  if (theta < 1.0) {
    for (int m = 0; m < node_count; ++m) {
      for (std::size_t k = 0; k < w; ++k) {
        double& v = nodes[m * w + k];
        v = average[k] + theta * (v - average[k]);
      }
    }
  }
  return theta;
}

double limit_cell_average(const GalerkinSystem& sys, std::span<double> average) {
  if (sys.check_admissible(average)) return 1.0;
  const int n = sys.vars();
  std::vector<double> base(average.size(), 0.0);
  std::copy(average.begin(), average.begin() + n, base.begin());
  if (auto chk = sys.check_admissible(base); !chk) {
    throw InadmissibleState("cell-average limiter: mean mode is inadmissible at xi = " + std::to_string(chk.witness),
                            chk.witness);
  }
  const double theta = admissible_fraction(sys, base, average);
  for (std::size_t k = n; k < average.size(); ++k) average[k] *= theta;
  return theta;
}

FvScheme::FvScheme(const GalerkinSystem& system, Mesh1D mesh, BoundaryPair boundary, Axis axis,
                   SchemeOptions options)
    : sys_(system), mesh_(mesh), boundary_(std::move(boundary)), axis_(axis), options_(options) {
  if (mesh_.cells < 1 || !(mesh_.upper > mesh_.lower)) throw ConfigError("invalid 1D mesh");
  const bool periodic = boundary_.lower == BoundaryKind::periodic || boundary_.upper == BoundaryKind::periodic;
  if (periodic && (boundary_.lower != boundary_.upper)) {
    throw ConfigError("periodic boundaries must be paired");
  }
  if (periodic && mesh_.cells < kGhost) throw ConfigError("periodic mesh needs at least 3 cells");
  if ((boundary_.lower == BoundaryKind::driver && !boundary_.lower_driver) ||
      (boundary_.upper == BoundaryKind::driver && !boundary_.upper_driver)) {
    throw ConfigError("driver boundary without a ghost provider");
  }
  const auto rule = gauss_lobatto_rule(4);
  std::array<double, 4> z{};
  for (int m = 0; m < 4; ++m) {
    z[m] = 0.5 * rule.nodes[m];
    lobatto_weights_[m] = rule.weights[m];
  }
  for (int m = 0; m < 4; ++m) {
    for (int k = 0; k < 4; ++k) {
      if (m == k) {
        double s = 0.0;
        for (int l = 0; l < 4; ++l) {
          if (l != k) s += 1.0 / (z[k] - z[l]);
        }
        deriv_[m][k] = s;
      } else {
        double num = 1.0;
        double den = 1.0;
        for (int l = 0; l < 4; ++l) {
          if (l == k) continue;
          den *= z[k] - z[l];
          if (l != m) num *= z[m] - z[l];
        }
        deriv_[m][k] = num / den;
      }
    }
  }
}

void FvScheme::fill_ghosts(CellField& u, double t) const {
  const int n = u.cells();
  const std::size_t w = u.width();
  auto copy = [&](int dst, int src) { std::copy_n(u.cell(src).begin(), w, u.cell(dst).begin()); };
  for (int g = 1; g <= kGhost; ++g) {
    switch (boundary_.lower) {
      case BoundaryKind::periodic: copy(-g, n - g); break;
      case BoundaryKind::outflow: copy(-g, 0); break;
      case BoundaryKind::driver: boundary_.lower_driver(t, u.cell(-g)); break;
    }
    switch (boundary_.upper) {
      case BoundaryKind::periodic: copy(n - 1 + g, g - 1); break;
      case BoundaryKind::outflow: copy(n - 1 + g, n - 1); break;
      case BoundaryKind::driver: boundary_.upper_driver(t, u.cell(n - 1 + g)); break;
    }
  }
}

void FvScheme::prepare(CellField& u, double t) const {
  fill_ghosts(u, t);
  if (!options_.limiter) return;
  bool changed = false;
  for (int j = 0; j < u.cells(); ++j) {
    double theta;
    try {
      theta = limit_cell_average(sys_, u.cell(j));
    } catch (const InadmissibleState& e) {
      throw InadmissibleState(std::string(e.what()) + " (cell " + std::to_string(j) + ")", e.xi());
    }
    if (theta < 1.0) {
      changed = true;
      if (log_) log_->add(LimiterEvent::Kind::average, j, theta);
    }
  }
  if (changed) fill_ghosts(u, t);
}

std::vector<double> FvScheme::reconstruct(const CellField& u, bool log_events) const {
  const int n = u.cells();
  const int w = u.width();
  const Weno5& weno = Weno5::lobatto4();
  std::vector<double> nodes(static_cast<std::size_t>(n + 2) * 4 * w);
  for (int j = -1; j <= n; ++j) {
    double* out = &nodes[static_cast<std::size_t>(j + 1) * 4 * w];
    const double* base = u.cell(j - 2).data();
    for (int s = 0; s < w; ++s) weno.reconstruct(base + s, w, out + s, w, options_.weights);
    if (options_.limiter) {
      double theta;
      try {
        theta = limit_node_values(sys_, u.cell(j), std::span<double>(out, 4 * w), 4);
      } catch (const InadmissibleState& e) {
        throw InadmissibleState(std::string(e.what()) + " (cell " + std::to_string(j) + ")", e.xi());
      }
      if (theta < 1.0 && log_events && log_ && j >= 0 && j < n) log_->add(LimiterEvent::Kind::node, j, theta);
    }
  }
  return nodes;
}

double FvScheme::evaluate(const CellField& u, double, CellField& rate) const {
  const int n = u.cells();
  const int w = u.width();
  const double dx = mesh_.dx();
  const auto nodes = reconstruct(u, true);
  auto node = [&](int j, int m) {
    return std::span<const double>(&nodes[(static_cast<std::size_t>(j + 1) * 4 + m) * w], w);
  };

  auto ws = sys_.make_workspace();
  std::vector<double> bminus(static_cast<std::size_t>(n + 1) * w);
  std::vector<double> bplus(static_cast<std::size_t>(n + 1) * w);
  double alpha_max = 0.0;
  for (int f = 0; f <= n; ++f) {
    const auto bm = std::span<double>(&bminus[static_cast<std::size_t>(f) * w], w);
    const auto bp = std::span<double>(&bplus[static_cast<std::size_t>(f) * w], w);
    try {
      alpha_max = std::max(alpha_max, sys_.fluctuations(node(f - 1, 3), node(f, 0), axis_, bm, bp, ws));
    } catch (const InadmissibleState& e) {
      throw InadmissibleState(std::string(e.what()) + " (face " + std::to_string(f) + ")", e.xi());
    }
  }

  std::vector<double> du(w), bdu(w);
  for (int j = 0; j < n; ++j) {
    auto r = rate.cell(j);
    const double* bm = &bminus[static_cast<std::size_t>(j + 1) * w];
    const double* bp = &bplus[static_cast<std::size_t>(j) * w];
    for (int k = 0; k < w; ++k) r[k] = -(bp[k] + bm[k]) / dx;
    for (int m = 0; m < 4; ++m) {
      bool nonzero = false;
      const auto u0 = node(j, 0);
      for (int k = 0; k < w; ++k) {
        double d = 0.0;
        for (int l = 1; l < 4; ++l) d += deriv_[m][l] * (node(j, l)[k] - u0[k]);
        du[k] = d / dx;
        nonzero = nonzero || d != 0.0;
      }
      if (!nonzero) continue;
      try {
        sys_.apply_b(node(j, m), du, axis_, bdu, ws);
      } catch (const InadmissibleState& e) {
        throw InadmissibleState(std::string(e.what()) + " (cell " + std::to_string(j) + ")", e.xi());
      }
      for (int k = 0; k < w; ++k) r[k] -= lobatto_weights_[m] * bdu[k];
    }
  }
  return alpha_max;
}

double FvScheme::max_alpha(const CellField& u, double) const {
  const int n = u.cells();
  const int w = u.width();
  const auto nodes = reconstruct(u, false);
  auto ws = sys_.make_workspace();
  double alpha = 0.0;
  for (int f = 0; f <= n; ++f) {
    const auto left = std::span<const double>(&nodes[(static_cast<std::size_t>(f) * 4 + 3) * w], w);
    const auto right = std::span<const double>(&nodes[(static_cast<std::size_t>(f + 1) * 4) * w], w);
    alpha = std::max(alpha, sys_.alpha_bound(left, right, axis_, ws));
  }
  return sys_.options().alpha_safety * alpha;
}

GhostProvider make_driver_provider(const GalerkinSystem& system, const EulerModel& model,
                                   std::function<Primitive(double t, double xi)> state) {
  return [&system, model, state = std::move(state)](double t, std::span<double> coeffs) {
    const auto coeff = project(system.basis(), system.xi_rule(), model.vars(),
                               [&](double xi) { return model.conserved(state(t, xi), xi); });
    std::copy_n(coeff.flat().data(), coeffs.size(), coeffs.begin());
  };
}

}  // namespace gpcsg
