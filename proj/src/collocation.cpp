#include <algorithm>
#include <cmath>
#include <string>

#include "gpcsg/errors.hpp"
#include "gpcsg/reference.hpp"
#include "gpcsg/weno.hpp"

namespace gpcsg {

namespace {

constexpr int G = 3;

// Point values with a ghost frame of G cells (only along x in 1D).
struct Grid {
  int nx, ny, vars, gy;
  std::vector<double> v;

  Grid(int nx_, int ny_, int vars_, bool two_d)
      : nx(nx_), ny(ny_), vars(vars_), gy(two_d ? G : 0),
        v(static_cast<std::size_t>(nx_ + 2 * G) * (ny_ + 2 * gy) * vars_, 0.0) {}

  std::size_t index(int i, int k) const {
    return (static_cast<std::size_t>(k + gy) * (nx + 2 * G) + (i + G)) * vars;
  }
  double* at(int i, int k) { return v.data() + index(i, k); }
  const double* at(int i, int k) const { return v.data() + index(i, k); }
};

class FdWeno {
 public:
  FdWeno(const ProblemSetup& problem, double xi, int nx, int ny)
      : p_(problem), model_(problem.model()), xi_(xi), nx_(nx), ny_(problem.dims == 2 ? ny : 1),
        dx_((problem.x_hi - problem.x_lo) / nx), dy_((problem.y_hi - problem.y_lo) / ny_) {
    if (nx < 5 || (problem.dims == 2 && ny < 5)) throw ConfigError("deterministic_solve needs at least 5 cells per axis");
  }

  Grid initial() const {
    Grid g(nx_, ny_, model_.vars(), p_.dims == 2);
    for (int k = 0; k < ny_; ++k) {
      for (int i = 0; i < nx_; ++i) {
        const double x = p_.x_lo + (i + 0.5) * dx_;
        const double y = p_.dims == 2 ? p_.y_lo + (k + 0.5) * dy_ : 0.0;
        const auto u = model_.conserved(p_.initial(x, y, xi_), xi_);
        std::copy(u.data(), u.data() + u.size(), g.at(i, k));
      }
    }
    return g;
  }

  void fill_ghosts(Grid& g, double t) const {
    const int n = g.vars;
    std::vector<double> drive;
    if (p_.boundary.x_lo.kind == BoundaryKind::driver || p_.boundary.x_hi.kind == BoundaryKind::driver) {
      const auto d = model_.conserved(p_.driver_state(t, xi_), xi_);
      drive.assign(d.data(), d.data() + d.size());
    }
    auto side = [&](BoundaryKind kind, double* dst, const double* periodic_src, const double* edge) {
      const double* src = kind == BoundaryKind::periodic ? periodic_src
                          : kind == BoundaryKind::driver ? drive.data()
                                                         : edge;
      std::copy(src, src + n, dst);
    };
    for (int k = 0; k < ny_; ++k) {
      for (int s = 1; s <= G; ++s) {
        side(p_.boundary.x_lo.kind, g.at(-s, k), g.at(nx_ - s, k), g.at(0, k));
        side(p_.boundary.x_hi.kind, g.at(nx_ - 1 + s, k), g.at(s - 1, k), g.at(nx_ - 1, k));
      }
    }
    if (p_.dims == 2) {
      if (p_.boundary.y_lo.kind == BoundaryKind::driver || p_.boundary.y_hi.kind == BoundaryKind::driver) {
        throw ConfigError("driver boundaries are not supported in 2D");
      }
      for (int i = 0; i < nx_; ++i) {
        for (int s = 1; s <= G; ++s) {
          side(p_.boundary.y_lo.kind, g.at(i, -s), g.at(i, ny_ - s), g.at(i, 0));
          side(p_.boundary.y_hi.kind, g.at(i, ny_ - 1 + s), g.at(i, s - 1), g.at(i, ny_ - 1));
        }
      }
    }
  }

  double max_speed(const Grid& g, Axis axis) const {
    double a = 0.0;
    const std::size_t n = static_cast<std::size_t>(g.vars);
    for (int k = 0; k < ny_; ++k) {
      for (int i = 0; i < nx_; ++i) {
        a = std::max(a, model_.max_speed({g.at(i, k), n}, xi_, axis));
      }
    }
    return a;
  }

  // Adds -(F_{i+1/2} - F_{i-1/2}) / h along one axis to rate.
  void add_axis(const Grid& g, Axis axis, double alpha, Grid& rate) const {
    const int n = g.vars;
    const bool along_x = axis == Axis::x;
    const int len = along_x ? nx_ : ny_;
    const int lines = along_x ? ny_ : nx_;
    const double h = along_x ? dx_ : dy_;
    const auto& face = Weno5::right_face();
    std::vector<double> fp((len + 2 * G) * n), fm((len + 2 * G) * n), flux(n), faces((len + 1) * n);
    double s[5];
    double val;
    for (int l = 0; l < lines; ++l) {
      for (int c = -G; c < len + G; ++c) {
        const double* u = along_x ? g.at(c, l) : g.at(l, c);
        model_.flux({u, static_cast<std::size_t>(n)}, xi_, axis, flux);
        for (int v = 0; v < n; ++v) {
          fp[(c + G) * n + v] = 0.5 * (flux[v] + alpha * u[v]);
          fm[(c + G) * n + v] = 0.5 * (flux[v] - alpha * u[v]);
        }
      }
      // face f sits between cells f-1 and f
      for (int f = 0; f <= len; ++f) {
        for (int v = 0; v < n; ++v) {
          for (int m = 0; m < 5; ++m) s[m] = fp[(f - 3 + m + G) * n + v];
          face.reconstruct(s, &val);
          double total = val;
          for (int m = 0; m < 5; ++m) s[m] = fm[(f + 2 - m + G) * n + v];
          face.reconstruct(s, &val);
          faces[f * n + v] = total + val;
        }
      }
      for (int c = 0; c < len; ++c) {
        double* r = along_x ? rate.at(c, l) : rate.at(l, c);
        for (int v = 0; v < n; ++v) r[v] -= (faces[(c + 1) * n + v] - faces[c * n + v]) / h;
      }
    }
  }

  void rate(Grid& g, double t, Grid& out) const {
    fill_ghosts(g, t);
    std::fill(out.v.begin(), out.v.end(), 0.0);
    add_axis(g, Axis::x, max_speed(g, Axis::x), out);
    if (p_.dims == 2) add_axis(g, Axis::y, max_speed(g, Axis::y), out);
  }

  void check(const Grid& g) const {
    const std::size_t n = static_cast<std::size_t>(g.vars);
    for (int k = 0; k < ny_; ++k) {
      for (int i = 0; i < nx_; ++i) {
        if (!model_.is_admissible(std::span<const double>(g.at(i, k), n), xi_)) {
          throw InadmissibleState("deterministic solver lost admissibility at cell " + std::to_string(i) + "," +
                                      std::to_string(k),
                                  xi_);
        }
      }
    }
  }

  DeterministicField run(double cfl, double t_final) {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
    Grid u = initial();
    Grid stage = u;
    Grid r = u;
    double t = 0.0;
    while (t < t_final) {
      check(u);
      double rate_bound = max_speed(u, Axis::x) / dx_;
      if (p_.dims == 2) rate_bound += max_speed(u, Axis::y) / dy_;
      double dt = rate_bound > 0.0 ? cfl / rate_bound : t_final - t;
      if (t + dt >= t_final - 1e-12 * t_final) dt = t_final - t;

      rate(u, t, r);
      for (std::size_t k = 0; k < u.v.size(); ++k) stage.v[k] = u.v[k] + dt * r.v[k];
      rate(stage, t + dt, r);
      for (std::size_t k = 0; k < u.v.size(); ++k) stage.v[k] = 0.75 * u.v[k] + 0.25 * (stage.v[k] + dt * r.v[k]);
      rate(stage, t + 0.5 * dt, r);
      for (std::size_t k = 0; k < u.v.size(); ++k) u.v[k] = u.v[k] / 3.0 + 2.0 / 3.0 * (stage.v[k] + dt * r.v[k]);
      t = (dt == t_final - t) ? t_final : t + dt;
    }
    check(u);
    DeterministicField out;
    out.nx = nx_;
    out.ny = ny_;
    out.vars = u.vars;
    out.values.reserve(static_cast<std::size_t>(nx_) * ny_ * u.vars);
    for (int k = 0; k < ny_; ++k) {
      for (int i = 0; i < nx_; ++i) out.values.insert(out.values.end(), u.at(i, k), u.at(i, k) + u.vars);
    }
    return out;
  }

 private:
  const ProblemSetup& p_;
  EulerModel model_;
  double xi_;
  int nx_, ny_;
  double dx_, dy_;
};

}  // namespace

DeterministicField deterministic_solve(const ProblemSetup& problem, double xi, int nx, int ny, double cfl,
                                       double t_final) {
  FdWeno solver(problem, xi, nx, ny);
  return solver.run(cfl, t_final);
}

CollocationResult collocation_solve(const ProblemSetup& problem, const CollocationPlan& plan, int nx, int ny,
                                    double t_final, bool keep_nodes) {
  const double tf = t_final < 0.0 ? problem.t_final : t_final;
  CollocationResult res;
  // weighted running mean and sum of squared deviations (West), so identical
  // node solutions give exactly zero spread
  std::vector<double> mean, m2;
  double wsum = 0.0;
  if (plan.rule.size() == 0) throw ConfigError("collocation needs at least one node");
  for (std::size_t q = 0; q < plan.rule.size(); ++q) {
    auto f = deterministic_solve(problem, plan.rule.nodes[q], nx, ny, plan.cfl, tf);
    const double w = plan.rule.weights[q];
    if (q == 0) {
      res.mean = f;
      res.std = f;
      mean.assign(f.values.size(), 0.0);
      m2.assign(f.values.size(), 0.0);
    }
    wsum += w;
    for (std::size_t k = 0; k < f.values.size(); ++k) {
      const double delta = f.values[k] - mean[k];
      mean[k] += (w / wsum) * delta;
      m2[k] += w * delta * (f.values[k] - mean[k]);
    }
    if (keep_nodes) res.nodes.push_back(std::move(f));
  }
  for (std::size_t k = 0; k < mean.size(); ++k) {
    res.mean.values[k] = mean[k];
    res.std.values[k] = std::sqrt(std::max(0.0, m2[k] / wsum));
  }
  return res;
}

Eigen::VectorXd error_norm_l1(const std::vector<double>& a, const std::vector<double>& b, int vars,
                              double cell_volume) {
  if (vars <= 0 || a.size() != b.size() || a.size() % vars != 0) throw ConfigError("error_norm_l1: size mismatch");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(vars);
  for (std::size_t k = 0; k < a.size(); ++k) e[k % vars] += std::abs(a[k] - b[k]);
  return e * cell_volume;
}

Eigen::VectorXd error_norm_l1(const std::vector<double>& a, const std::vector<double>& faces, int vars,
                              const std::function<Eigen::VectorXd(double x)>& exact) {
  if (faces.size() < 2 || vars <= 0 || a.size() != (faces.size() - 1) * static_cast<std::size_t>(vars)) {
    throw ConfigError("error_norm_l1: size mismatch");
  }
  const auto rule = gauss_rule(5);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(vars);
  for (std::size_t j = 0; j + 1 < faces.size(); ++j) {
    const double lo = faces[j];
    const double hi = faces[j + 1];
    Eigen::VectorXd avg = Eigen::VectorXd::Zero(vars);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      avg += rule.weights[q] * exact(0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[q]);
    }
    for (int v = 0; v < vars; ++v) e[v] += (hi - lo) * std::abs(a[j * vars + v] - avg[v]);
  }
  return e;
}

}  // namespace gpcsg
