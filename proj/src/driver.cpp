#include "gpcsg/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gpcsg/errors.hpp"
#include "gpcsg/reference.hpp"
#include "gpcsg/time_integration.hpp"

namespace gpcsg {

using nlohmann::json;

namespace {

const char* const kVarNames2D[] = {"rho", "mx", "my", "E"};
const char* const kVarNames1D[] = {"rho", "mx", "E"};

const char* var_name(int dims, int v) { return dims == 2 ? kVarNames2D[v] : kVarNames1D[v]; }

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

// Sub-intervals of [a, b] split at the breaks strictly inside.
std::vector<double> pieces(double a, double b, const std::function<std::vector<double>(double)>& breaks, double xi) {
  std::vector<double> pts{a};
  if (breaks) {
    auto br = breaks(xi);
    std::sort(br.begin(), br.end());
    for (double s : br) {
      if (s > a && s < b) pts.push_back(s);
    }
  }
  pts.push_back(b);
  return pts;
}

ProblemSetup problem_for(const RunConfig& c) {
  auto p = builtin_problem(c.problem);
  if (c.t_final) p.t_final = *c.t_final;
  return p;
}

int effective_ny(const RunConfig& c, const ProblemSetup& p) {
  if (p.dims == 1) return 1;
  return c.ny > 0 ? c.ny : c.nx;
}

std::vector<double> output_times(const RunConfig& c, const ProblemSetup& p) {
  std::vector<double> times = c.snapshots;
  times.push_back(p.t_final);
  return times;
}

}  // namespace

// ---------------------------------------------------------------------------
// configuration

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    if (k == "problem") {
      c.problem = get_as<std::string>(v, "problem");
    } else if (k == "order") {
      c.order = get_as<int>(v, "order");
    } else if (k == "cells") {
      if (v.is_array()) {
        if (v.size() != 2) throw ConfigError("config key 'cells' must be an integer or [nx, ny]");
        c.nx = get_as<int>(v[0], "cells");
        c.ny = get_as<int>(v[1], "cells");
      } else {
        c.nx = get_as<int>(v, "cells");
        c.ny = 0;
      }
    } else if (k == "cfl") {
      c.cfl = get_as<double>(v, "cfl");
    } else if (k == "dt_policy") {
      c.dt_policy = get_as<std::string>(v, "dt_policy");
    } else if (k == "xi_nodes") {
      c.xi_nodes = get_as<int>(v, "xi_nodes");
    } else if (k == "projection_nodes") {
      c.projection_nodes = get_as<int>(v, "projection_nodes");
    } else if (k == "limiter") {
      c.limiter = get_as<bool>(v, "limiter");
    } else if (k == "weights") {
      c.weights = get_as<std::string>(v, "weights");
    } else if (k == "split_mode") {
      c.split_mode = get_as<std::string>(v, "split_mode");
    } else if (k == "alternate") {
      c.alternate = get_as<bool>(v, "alternate");
    } else if (k == "solver") {
      c.solver = get_as<std::string>(v, "solver");
    } else if (k == "collocation_nodes") {
      c.collocation_nodes = get_as<int>(v, "collocation_nodes");
    } else if (k == "t_final") {
      if (v.is_null()) {
        c.t_final.reset();
      } else {
        c.t_final = get_as<double>(v, "t_final");
      }
    } else if (k == "snapshots") {
      c.snapshots = get_as<std::vector<double>>(v, "snapshots");
    } else if (k == "out") {
      c.out = get_as<std::string>(v, "out");
    } else if (k == "dry_run") {
      c.dry_run = get_as<bool>(v, "dry_run");
    } else {
      throw ConfigError("unknown config key '" + k + "'");
    }
  }
  return c;
}

std::string config_json(const RunConfig& c) {
  json j;
  j["problem"] = c.problem;
  j["order"] = c.order;
  if (c.ny > 0) {
    j["cells"] = {c.nx, c.ny};
  } else {
    j["cells"] = c.nx;
  }
  j["cfl"] = c.cfl;
  j["dt_policy"] = c.dt_policy;
  j["xi_nodes"] = c.xi_nodes;
  j["projection_nodes"] = c.projection_nodes;
  j["limiter"] = c.limiter;
  j["weights"] = c.weights;
  j["split_mode"] = c.split_mode;
  j["alternate"] = c.alternate;
  j["solver"] = c.solver;
  j["collocation_nodes"] = c.collocation_nodes;
  j["t_final"] = c.t_final ? json(*c.t_final) : json(nullptr);
  j["snapshots"] = c.snapshots;
  j["out"] = c.out;
  j["dry_run"] = c.dry_run;
  return j.dump(2);
}

void validate(const RunConfig& c) {
  const auto p = problem_for(c);  // throws for unknown names
  if (c.order < 0 || c.order > 20) throw ConfigError("order must lie in [0, 20]");
  if (c.nx < 5) throw ConfigError("at least 5 cells are needed along x");
  if (p.dims == 1 && c.ny > 1) throw ConfigError("problem '" + c.problem + "' is one-dimensional");
  if (p.dims == 2 && c.ny != 0 && c.ny < 5) throw ConfigError("at least 5 cells are needed along y");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
  if (c.dt_policy != "cfl" && c.dt_policy != "dx53") throw ConfigError("dt_policy must be 'cfl' or 'dx53'");
  if (c.xi_nodes < 0 || (c.xi_nodes > 0 && c.xi_nodes < c.order + 1)) {
    throw ConfigError("xi_nodes must be 0 (automatic) or at least order + 1");
  }
  if (c.projection_nodes < c.order + 1) throw ConfigError("projection_nodes must be at least order + 1");
  if (c.weights != "nonlinear" && c.weights != "linear") throw ConfigError("weights must be 'nonlinear' or 'linear'");
  if (c.split_mode != "strang" && c.split_mode != "thirdorder") {
    throw ConfigError("split_mode must be 'strang' or 'thirdorder'");
  }
  if (c.solver != "sg" && c.solver != "collocation") throw ConfigError("solver must be 'sg' or 'collocation'");
  if (c.collocation_nodes < 1) throw ConfigError("collocation_nodes must be positive");
  if (!(p.t_final >= 0.0)) throw ConfigError("t_final must be nonnegative");
  double last = 0.0;
  for (double s : c.snapshots) {
    if (!(s > last && s < p.t_final)) throw ConfigError("snapshots must increase strictly inside (0, t_final)");
    last = s;
  }
}

// ---------------------------------------------------------------------------
// projection

CellField project_initial_1d(const ProblemSetup& problem, const GalerkinSystem& system, const Mesh1D& mesh,
                             int xi_nodes) {
  const auto rule = gauss_rule(xi_nodes);
  const auto cell_rule = gauss_rule(5);
  const auto phi = system.basis().tabulate(rule.nodes);
  const int modes = system.modes();
  const int n = system.vars();
  const EulerModel model = problem.model();
  CellField u(mesh.cells, system.size());
  Eigen::VectorXd avg(n);
  for (int j = 0; j < mesh.cells; ++j) {
    auto cell = u.cell(j);
    const double a = mesh.face(j);
    const double b = mesh.face(j + 1);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double xi = rule.nodes[q];
      avg.setZero();
      const auto pts = pieces(a, b, problem.x_breaks, xi);
      for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        const double lo = pts[s];
        const double hi = pts[s + 1];
        for (std::size_t g = 0; g < cell_rule.size(); ++g) {
          const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * cell_rule.nodes[g];
          avg += cell_rule.weights[g] * (hi - lo) / (b - a) * model.conserved(problem.initial(x, 0.0, xi), xi);
        }
      }
      for (int i = 0; i < modes; ++i) {
        const double w = rule.weights[q] * phi[q * modes + i];
        for (int v = 0; v < n; ++v) cell[i * n + v] += w * avg[v];
      }
    }
  }
  return u;
}

Field2D project_initial_2d(const ProblemSetup& problem, const GalerkinSystem& system, const Mesh2D& mesh,
                           int xi_nodes) {
  const auto rule = gauss_rule(xi_nodes);
  const auto cell_rule = gauss_rule(5);
  const auto phi = system.basis().tabulate(rule.nodes);
  const int modes = system.modes();
  const int n = system.vars();
  const EulerModel model = problem.model();
  Field2D f(mesh.x.cells, mesh.y.cells, system.size());
  Eigen::VectorXd avg(n);
  for (int k = 0; k < mesh.y.cells; ++k) {
    const double c = mesh.y.face(k);
    const double d = mesh.y.face(k + 1);
    for (int i = 0; i < mesh.x.cells; ++i) {
      auto cell = f.cell(i, k);
      const double a = mesh.x.face(i);
      const double b = mesh.x.face(i + 1);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const double xi = rule.nodes[q];
        avg.setZero();
        const auto px = pieces(a, b, problem.x_breaks, xi);
        const auto py = pieces(c, d, problem.y_breaks, xi);
        for (std::size_t sx = 0; sx + 1 < px.size(); ++sx) {
          for (std::size_t sy = 0; sy + 1 < py.size(); ++sy) {
            const double wx = (px[sx + 1] - px[sx]) / (b - a);
            const double wy = (py[sy + 1] - py[sy]) / (d - c);
            for (std::size_t gx = 0; gx < cell_rule.size(); ++gx) {
              const double x = 0.5 * (px[sx] + px[sx + 1]) + 0.5 * (px[sx + 1] - px[sx]) * cell_rule.nodes[gx];
              for (std::size_t gy = 0; gy < cell_rule.size(); ++gy) {
                const double y = 0.5 * (py[sy] + py[sy + 1]) + 0.5 * (py[sy + 1] - py[sy]) * cell_rule.nodes[gy];
                avg += cell_rule.weights[gx] * cell_rule.weights[gy] * wx * wy *
                       model.conserved(problem.initial(x, y, xi), xi);
              }
            }
          }
        }
        for (int m = 0; m < modes; ++m) {
          const double w = rule.weights[q] * phi[q * modes + m];
          for (int v = 0; v < n; ++v) cell[m * n + v] += w * avg[v];
        }
      }
    }
  }
  return f;
}

FieldStats coefficient_stats(const std::vector<double>& coeffs, int modes, int vars, double t) {
  const std::size_t width = static_cast<std::size_t>(modes) * vars;
  const std::size_t cells = coeffs.size() / width;
  FieldStats s;
  s.t = t;
  s.mean.resize(cells * vars);
  s.std.resize(cells * vars);
  for (std::size_t c = 0; c < cells; ++c) {
    const double* u = coeffs.data() + c * width;
    for (int v = 0; v < vars; ++v) {
      double var = 0.0;
      for (int m = 1; m < modes; ++m) var += u[m * vars + v] * u[m * vars + v];
      s.mean[c * vars + v] = u[v];
      s.std[c * vars + v] = std::sqrt(var);
    }
  }
  return s;
}

std::vector<double> OutputBundle::x_faces() const {
  std::vector<double> f(nx + 1);
  for (int j = 0; j <= nx; ++j) f[j] = x_lo + j * (x_hi - x_lo) / nx;
  return f;
}

// ---------------------------------------------------------------------------
// runs

namespace {

OutputBundle empty_bundle(const RunConfig& c, const ProblemSetup& p) {
  OutputBundle b;
  b.config = c;
  b.solver = c.solver;
  b.dims = p.dims;
  b.nx = c.nx;
  b.ny = effective_ny(c, p);
  b.vars = p.dims + 2;
  b.x_lo = p.x_lo;
  b.x_hi = p.x_hi;
  b.y_lo = p.y_lo;
  b.y_hi = p.y_hi;
  b.result.t = p.t_final;
  return b;
}

StepController controller_for(const RunConfig& c) {
  StepController ctl;
  ctl.cfl = c.cfl;
  if (c.dt_policy == "dx53") ctl.dt_override = [](double dx) { return std::pow(dx, 5.0 / 3.0); };
  return ctl;
}

SchemeOptions scheme_options(const RunConfig& c) {
  SchemeOptions o;
  o.limiter = c.limiter;
  o.weights = c.weights == "linear" ? WenoWeights::linear : WenoWeights::nonlinear;
  return o;
}

void run_sg_1d(const RunConfig& c, const ProblemSetup& p, OutputBundle& out) {
  auto model = std::make_shared<EulerModel>(p.model());
  GalerkinOptions go;
  go.xi_nodes = c.xi_nodes;
  GalerkinSystem sys(model, c.order, go);
  const Mesh1D mesh{c.nx, p.x_lo, p.x_hi};
  BoundaryPair bp{p.boundary.x_lo.kind, p.boundary.x_hi.kind, {}, {}};
  if (bp.lower == BoundaryKind::driver) bp.lower_driver = make_driver_provider(sys, *model, p.driver_state);
  if (bp.upper == BoundaryKind::driver) bp.upper_driver = make_driver_provider(sys, *model, p.driver_state);
  FvScheme scheme(sys, mesh, bp, Axis::x, scheme_options(c));
  scheme.set_log(&out.log);
  CellField u = project_initial_1d(p, sys, mesh, c.projection_nodes);
  const StepController ctl = controller_for(c);
  double t = 0.0;
  for (double target : output_times(c, p)) {
    out.steps += advance(u, t, target - t, scheme, ctl, &out.log).steps;
    t = target;
    std::vector<double> coeffs(u.data().begin() + kGhost * u.width(),
                               u.data().begin() + (kGhost + u.cells()) * u.width());
    auto stats = coefficient_stats(coeffs, sys.modes(), sys.vars(), t);
    if (target == p.t_final) {
      out.result = std::move(stats);
      out.coefficients = std::move(coeffs);
    } else {
      out.snapshots.push_back(std::move(stats));
    }
  }
}

void run_sg_2d(const RunConfig& c, const ProblemSetup& p, OutputBundle& out) {
  auto model = std::make_shared<EulerModel>(p.model());
  GalerkinOptions go;
  go.xi_nodes = c.xi_nodes;
  GalerkinSystem sys(model, c.order, go);
  const Mesh2D mesh{{out.nx, p.x_lo, p.x_hi}, {out.ny, p.y_lo, p.y_hi}};
  const StepController ctl = controller_for(c);
  SplitSolver split(sys, mesh, p.boundary, scheme_options(c), ctl);
  split.alternate = c.alternate;
  const SplitMode mode = c.split_mode == "thirdorder" ? SplitMode::thirdorder : SplitMode::strang;
  Field2D f = project_initial_2d(p, sys, mesh, c.projection_nodes);
  const double h = std::min(mesh.x.dx(), mesh.y.dx());
  double t = 0.0;
  for (double target : output_times(c, p)) {
    while (t < target) {
      double dt = ctl.dt_override ? ctl.dt_override(h) : split.stable_dt(f, t);
      if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("could not determine a positive time step");
      if (target - (t + dt) < 1e-12 * target) dt = target - t;
      out.log.step = out.steps;
      split.advance(f, t, dt, mode, &out.log);
      t = (dt == target - t) ? target : t + dt;
      ++out.steps;
    }
    auto stats = coefficient_stats(f.data(), sys.modes(), sys.vars(), t);
    if (target == p.t_final) {
      out.result = std::move(stats);
      out.coefficients = f.data();
    } else {
      out.snapshots.push_back(std::move(stats));
    }
  }
}

FieldStats collocation_stats(const CollocationResult& r, double t) {
  FieldStats s;
  s.t = t;
  s.mean = r.mean.values;
  s.std = r.std.values;
  return s;
}

void run_collocation(const RunConfig& c, const ProblemSetup& p, OutputBundle& out) {
  CollocationPlan plan{gauss_rule(c.collocation_nodes), c.cfl};
  for (double target : output_times(c, p)) {
    const auto r = collocation_solve(p, plan, out.nx, out.ny, target, false);
    if (target == p.t_final) {
      out.result = collocation_stats(r, target);
    } else {
      out.snapshots.push_back(collocation_stats(r, target));
    }
  }
}

}  // namespace

OutputBundle run_case(const RunConfig& config) {
  validate(config);
  const auto p = problem_for(config);
  OutputBundle out = empty_bundle(config, p);
  if (config.dry_run) return out;
  const auto start = std::chrono::steady_clock::now();
  if (config.solver == "collocation") {
    run_collocation(config, p, out);
  } else if (p.dims == 1) {
    run_sg_1d(config, p, out);
  } else {
    run_sg_2d(config, p, out);
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

FieldStats exact_stats(const ProblemSetup& p, int nx, double t, int xi_nodes) {
  if (p.dims != 1 || !p.exact) throw ConfigError("problem '" + p.name + "' has no exact 1D solution");
  const auto rule = gauss_rule(xi_nodes);
  const auto cell_rule = gauss_rule(5);
  const EulerModel model = p.model();
  const int n = model.vars();
  const double dx = (p.x_hi - p.x_lo) / nx;
  FieldStats s;
  s.t = t;
  s.mean.assign(static_cast<std::size_t>(nx) * n, 0.0);
  s.std.assign(static_cast<std::size_t>(nx) * n, 0.0);
  // two passes per cell so xi-independent cells get exactly zero spread
  std::vector<Eigen::VectorXd> avg(rule.size());
  for (int j = 0; j < nx; ++j) {
    const double a = p.x_lo + j * dx;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n), var = Eigen::VectorXd::Zero(n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double xi = rule.nodes[q];
      avg[q] = Eigen::VectorXd::Zero(n);
      for (std::size_t g = 0; g < cell_rule.size(); ++g) {
        const double x = a + 0.5 * dx * (1.0 + cell_rule.nodes[g]);
        avg[q] += cell_rule.weights[g] * model.conserved(p.exact(x, 0.0, t, xi), xi);
      }
      mean += rule.weights[q] * avg[q];
    }
    for (std::size_t q = 0; q < rule.size(); ++q) var += rule.weights[q] * (avg[q] - mean).cwiseAbs2();
    for (int v = 0; v < n; ++v) {
      s.mean[j * n + v] = mean[v];
      s.std[j * n + v] = std::sqrt(var[v]);
    }
  }
  return s;
}

OutputBundle reference_case(const RunConfig& config) {
  validate(config);
  const auto p = problem_for(config);
  OutputBundle out = empty_bundle(config, p);
  if (config.dry_run) return out;
  const auto start = std::chrono::steady_clock::now();
  if (p.dims == 1 && p.exact) {
    out.solver = "exact";
    for (double target : output_times(config, p)) {
      auto s = exact_stats(p, out.nx, target);
      if (target == p.t_final) {
        out.result = std::move(s);
      } else {
        out.snapshots.push_back(std::move(s));
      }
    }
  } else {
    out.solver = "collocation";
    run_collocation(config, p, out);
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// ---------------------------------------------------------------------------
// output

std::string solution_csv(const OutputBundle& b, const FieldStats& s) {
  std::ostringstream os;
  os << "x";
  if (b.dims == 2) os << ",y";
  for (int v = 0; v < b.vars; ++v) os << ",mean_" << var_name(b.dims, v) << ",std_" << var_name(b.dims, v);
  os << "\n";
  const double dx = b.dx();
  const double dy = b.dy();
  for (int k = 0; k < b.ny; ++k) {
    for (int i = 0; i < b.nx; ++i) {
      os << num(b.x_lo + (i + 0.5) * dx);
      if (b.dims == 2) os << "," << num(b.y_lo + (k + 0.5) * dy);
      const std::size_t c = static_cast<std::size_t>(k) * b.nx + i;
      for (int v = 0; v < b.vars; ++v) os << "," << num(s.mean[c * b.vars + v]) << "," << num(s.std[c * b.vars + v]);
      os << "\n";
    }
  }
  return os.str();
}

std::string meta_json(const OutputBundle& b) {
  json j;
  j["config"] = json::parse(config_json(b.config));
  j["solver"] = b.solver;
  j["dims"] = b.dims;
  j["cells"] = {b.nx, b.ny};
  j["vars"] = b.vars;
  j["domain"] = {b.x_lo, b.x_hi, b.y_lo, b.y_hi};
  j["t_final"] = b.result.t;
  j["steps"] = b.steps;
  std::vector<double> snaps;
  for (const auto& s : b.snapshots) snaps.push_back(s.t);
  j["snapshots"] = snaps;
  json events = json::array();
  std::int64_t last_step = -1;
  for (const auto& e : b.log.events) {
    events.push_back({{"kind", e.kind == LimiterEvent::Kind::node ? "node" : "average"},
                      {"step", e.step},
                      {"line", e.line},
                      {"cell", e.cell},
                      {"theta", e.theta}});
    last_step = std::max(last_step, e.step);
  }
  j["limiter"] = {{"node_activations", b.log.node_count},
                  {"average_activations", b.log.average_count},
                  {"last_step", last_step},
                  {"events_truncated", b.log.node_count + b.log.average_count > b.log.events.size()},
                  {"events", events}};
  return j.dump(2);
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw IoError("failed writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string vtk(const OutputBundle& b) {
  std::ostringstream os;
  os << "# vtk DataFile Version 3.0\n" << b.config.problem << " t=" << num(b.result.t) << "\nASCII\n";
  os << "DATASET STRUCTURED_POINTS\nDIMENSIONS " << b.nx << " " << b.ny << " 1\n";
  os << "ORIGIN " << num(b.x_lo + 0.5 * b.dx()) << " " << num(b.y_lo + 0.5 * b.dy()) << " 0\n";
  os << "SPACING " << num(b.dx()) << " " << num(b.dy()) << " 1\n";
  os << "POINT_DATA " << static_cast<std::size_t>(b.nx) * b.ny << "\n";
  for (int which = 0; which < 2; ++which) {
    const auto& data = which == 0 ? b.result.mean : b.result.std;
    for (int v = 0; v < b.vars; ++v) {
      os << "SCALARS " << (which == 0 ? "mean_" : "std_") << var_name(b.dims, v) << " double 1\nLOOKUP_TABLE default\n";
      for (std::size_t c = 0; c < static_cast<std::size_t>(b.nx) * b.ny; ++c) os << num(data[c * b.vars + v]) << "\n";
    }
  }
  return os.str();
}

}  // namespace

void write_outputs(const OutputBundle& b, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  const fs::path root(dir);
  write_file(root / "meta.json", meta_json(b) + "\n");
  write_file(root / "timing.json", json{{"wall_seconds", b.wall_seconds}}.dump(2) + "\n");
  if (b.config.dry_run) return;
  write_file(root / "solution.csv", solution_csv(b, b.result));
  for (std::size_t s = 0; s < b.snapshots.size(); ++s) {
    write_file(root / ("snapshot_" + std::to_string(s) + ".csv"), solution_csv(b, b.snapshots[s]));
  }
  if (b.dims == 2) write_file(root / "solution.vtk", vtk(b));
}

OutputBundle load_outputs(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  OutputBundle b;
  try {
    const json j = json::parse(read_file(root / "meta.json"));
    b.config = parse_config(j.at("config").dump());
    b.solver = j.at("solver").get<std::string>();
    b.dims = j.at("dims").get<int>();
    b.nx = j.at("cells").at(0).get<int>();
    b.ny = j.at("cells").at(1).get<int>();
    b.vars = j.at("vars").get<int>();
    const auto d = j.at("domain").get<std::vector<double>>();
    b.x_lo = d.at(0);
    b.x_hi = d.at(1);
    b.y_lo = d.at(2);
    b.y_hi = d.at(3);
    b.result.t = j.at("t_final").get<double>();
    b.steps = j.at("steps").get<std::int64_t>();
  } catch (const json::exception& e) {
    throw IoError("malformed meta.json in " + dir + ": " + e.what());
  }
  std::istringstream csv(read_file(root / "solution.csv"));
  std::string line;
  std::getline(csv, line);  // header
  const int skip = b.dims;
  const std::size_t cells = static_cast<std::size_t>(b.nx) * b.ny;
  b.result.mean.reserve(cells * b.vars);
  b.result.std.reserve(cells * b.vars);
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() != static_cast<std::size_t>(skip + 2 * b.vars)) throw IoError("malformed row in solution.csv");
    for (int v = 0; v < b.vars; ++v) {
      b.result.mean.push_back(vals[skip + 2 * v]);
      b.result.std.push_back(vals[skip + 2 * v + 1]);
    }
  }
  if (b.result.mean.size() != cells * b.vars) throw IoError("solution.csv has the wrong number of rows");
  return b;
}

// ---------------------------------------------------------------------------
// convergence

std::vector<ConvergenceRow> convergence_study(const RunConfig& base, const std::vector<int>& meshes,
                                              const std::vector<int>& orders) {
  const bool by_order = !orders.empty();
  const std::vector<int>& sweep = by_order ? orders : meshes;
  if (sweep.empty()) throw ConfigError("convergence study needs at least one mesh or order");
  if (by_order && meshes.size() > 1) throw ConfigError("an order sweep takes a single mesh");
  std::vector<ConvergenceRow> rows;
  for (int value : sweep) {
    RunConfig c = base;
    if (by_order) {
      c.order = value;
      if (!meshes.empty()) c.nx = meshes.front();
    } else {
      c.nx = value;
    }
    const auto p = problem_for(c);
    const auto bundle = run_case(c);
    const auto ref = exact_stats(p, c.nx, p.t_final);
    ConvergenceRow row;
    row.nx = c.nx;
    row.order = c.order;
    row.mean_error.assign(bundle.vars, 0.0);
    row.std_error.assign(bundle.vars, 0.0);
    const double dx = bundle.dx();
    for (std::size_t k = 0; k < ref.mean.size(); ++k) {
      row.mean_error[k % bundle.vars] += dx * std::abs(bundle.result.mean[k] - ref.mean[k]);
      row.std_error[k % bundle.vars] += dx * std::abs(bundle.result.std[k] - ref.std[k]);
    }
    if (!rows.empty()) {
      const auto& prev = rows.back();
      if (by_order) {
        row.mean_rate = prev.mean_error[0] / row.mean_error[0];
        row.std_rate = prev.std_error[0] / row.std_error[0];
      } else {
        const double scale = std::log(static_cast<double>(row.nx) / prev.nx);
        row.mean_rate = std::log(prev.mean_error[0] / row.mean_error[0]) / scale;
        row.std_rate = std::log(prev.std_error[0] / row.std_error[0]) / scale;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string convergence_table(const std::vector<ConvergenceRow>& rows) {
  // rates are observed orders for mesh sweeps and error ratios for order sweeps
  std::ostringstream os;
  os << "cells,order,mean_l1_rho,mean_rate,std_l1_rho,std_rate\n";
  for (const auto& r : rows) {
    os << r.nx << "," << r.order << "," << num(r.mean_error[0]) << ","
       << (r.mean_rate ? num(*r.mean_rate) : std::string()) << "," << num(r.std_error[0]) << ","
       << (r.std_rate ? num(*r.std_rate) : std::string()) << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// comparison

namespace {

// Row-stochastic overlap weights from n cells onto m cells of [0, 1].
std::vector<std::vector<std::pair<int, double>>> overlap(int n, int m) {
  std::vector<std::vector<std::pair<int, double>>> w(m);
  for (int I = 0; I < m; ++I) {
    const double lo = static_cast<double>(I) / m;
    const double hi = static_cast<double>(I + 1) / m;
    const int first = std::max(0, static_cast<int>(std::floor(lo * n)) - 1);
    const int last = std::min(n - 1, static_cast<int>(std::ceil(hi * n)) + 1);
    for (int i = first; i <= last; ++i) {
      const double a = std::max(lo, static_cast<double>(i) / n);
      const double b = std::min(hi, static_cast<double>(i + 1) / n);
      if (b > a) w[I].emplace_back(i, (b - a) * m);
    }
  }
  return w;
}

}  // namespace

std::vector<double> restrict_field(const std::vector<double>& values, int nx, int ny, int vars, int to_nx, int to_ny) {
  if (values.size() != static_cast<std::size_t>(nx) * ny * vars) throw ConfigError("restrict_field: size mismatch");
  if (to_nx > nx || to_ny > ny || to_nx < 1 || to_ny < 1) throw ConfigError("restrict_field: target must be coarser");
  if (to_nx == nx && to_ny == ny) return values;
  const auto wx = overlap(nx, to_nx);
  const auto wy = overlap(ny, to_ny);
  std::vector<double> mid(static_cast<std::size_t>(to_nx) * ny * vars, 0.0);
  for (int k = 0; k < ny; ++k) {
    for (int I = 0; I < to_nx; ++I) {
      for (const auto& [i, w] : wx[I]) {
        for (int v = 0; v < vars; ++v) {
          mid[(static_cast<std::size_t>(k) * to_nx + I) * vars + v] += w * values[(static_cast<std::size_t>(k) * nx + i) * vars + v];
        }
      }
    }
  }
  std::vector<double> out(static_cast<std::size_t>(to_nx) * to_ny * vars, 0.0);
  for (int K = 0; K < to_ny; ++K) {
    for (const auto& [k, w] : wy[K]) {
      for (int I = 0; I < to_nx; ++I) {
        for (int v = 0; v < vars; ++v) {
          out[(static_cast<std::size_t>(K) * to_nx + I) * vars + v] += w * mid[(static_cast<std::size_t>(k) * to_nx + I) * vars + v];
        }
      }
    }
  }
  return out;
}

CompareReport compare(const OutputBundle& a, const OutputBundle& b, const std::string& slice) {
  if (a.dims != b.dims || a.vars != b.vars || a.x_lo != b.x_lo || a.x_hi != b.x_hi ||
      (a.dims == 2 && (a.y_lo != b.y_lo || a.y_hi != b.y_hi))) {
    throw ConfigError("compare: bundles live on different domains");
  }
  if (slice != "none" && slice != "x" && slice != "diagonal") throw ConfigError("compare: unknown slice '" + slice + "'");
  if (slice == "diagonal" && a.dims != 2) throw ConfigError("compare: diagonal slices need 2D fields");
  CompareReport r;
  r.nx = std::min(a.nx, b.nx);
  r.ny = std::min(a.ny, b.ny);
  r.vars = a.vars;
  const auto ma = restrict_field(a.result.mean, a.nx, a.ny, a.vars, r.nx, r.ny);
  const auto sa = restrict_field(a.result.std, a.nx, a.ny, a.vars, r.nx, r.ny);
  const auto mb = restrict_field(b.result.mean, b.nx, b.ny, b.vars, r.nx, r.ny);
  const auto sb = restrict_field(b.result.std, b.nx, b.ny, b.vars, r.nx, r.ny);
  const double volume = (a.x_hi - a.x_lo) / r.nx * (a.dims == 2 ? (a.y_hi - a.y_lo) / r.ny : 1.0);
  r.l1_mean.assign(r.vars, 0.0);
  r.l1_std.assign(r.vars, 0.0);
  r.linf_mean.assign(r.vars, 0.0);
  r.linf_std.assign(r.vars, 0.0);
  for (std::size_t k = 0; k < ma.size(); ++k) {
    const int v = static_cast<int>(k % r.vars);
    const double dm = std::abs(ma[k] - mb[k]);
    const double ds = std::abs(sa[k] - sb[k]);
    r.l1_mean[v] += volume * dm;
    r.l1_std[v] += volume * ds;
    r.linf_mean[v] = std::max(r.linf_mean[v], dm);
    r.linf_std[v] = std::max(r.linf_std[v], ds);
  }
  if (slice == "none") return r;
  if (slice == "diagonal" && r.nx != r.ny) throw ConfigError("compare: diagonal slices need a square grid");
  std::ostringstream os;
  os << (slice == "diagonal" ? "s" : "x");
  for (int v = 0; v < r.vars; ++v) {
    const char* n = var_name(a.dims, v);
    os << ",a_mean_" << n << ",b_mean_" << n << ",a_std_" << n << ",b_std_" << n;
  }
  os << "\n";
  const int row = a.dims == 2 ? r.ny / 2 : 0;
  for (int i = 0; i < r.nx; ++i) {
    const std::size_t c = slice == "diagonal" ? static_cast<std::size_t>(i) * r.nx + i
                                              : static_cast<std::size_t>(row) * r.nx + i;
    const double s = slice == "diagonal" ? (i + 0.5) / r.nx : a.x_lo + (i + 0.5) * (a.x_hi - a.x_lo) / r.nx;
    os << num(s);
    for (int v = 0; v < r.vars; ++v) {
      const std::size_t k = c * r.vars + v;
      os << "," << num(ma[k]) << "," << num(mb[k]) << "," << num(sa[k]) << "," << num(sb[k]);
    }
    os << "\n";
  }
  r.slice_csv = os.str();
  return r;
}

std::string compare_json(const CompareReport& r) {
  json j;
  j["cells"] = {r.nx, r.ny};
  j["l1_mean"] = r.l1_mean;
  j["l1_std"] = r.l1_std;
  j["linf_mean"] = r.linf_mean;
  j["linf_std"] = r.linf_std;
  return j.dump(2);
}

}  // namespace gpcsg
