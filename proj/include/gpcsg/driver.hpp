#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpcsg/fv_scheme.hpp"
#include "gpcsg/problems.hpp"
#include "gpcsg/splitting.hpp"

namespace gpcsg {

/// Everything a run needs. All fields have defaults; parse_config accepts a
/// JSON object with any subset of the keys written by config_json.
struct RunConfig {
  std::string problem = "sod";
  int order = 3;
  int nx = 100;
  int ny = 0;  // 0: same as nx for 2D problems
  double cfl = 0.6;
  std::string dt_policy = "cfl";  // "cfl" or "dx53" (dt = dx^{5/3})
  int xi_nodes = 0;               // 0: automatic
  int projection_nodes = 64;      // xi rule of the initial projection
  bool limiter = true;
  std::string weights = "nonlinear";
  std::string split_mode = "strang";  // "strang" or "thirdorder"
  bool alternate = true;
  std::string solver = "sg";  // "sg" or "collocation"
  int collocation_nodes = 40;
  std::optional<double> t_final;  // problem default when unset
  std::vector<double> snapshots;  // extra output times before t_final
  std::string out;
  bool dry_run = false;
};

/// Throws ConfigError on malformed JSON, unknown keys or bad values.
RunConfig parse_config(const std::string& json_text);
/// Pretty-printed JSON echo; parse_config(config_json(c)) reproduces c.
std::string config_json(const RunConfig& config);
/// Checks values against the problem (dimension, ranges). Throws ConfigError.
void validate(const RunConfig& config);

/// Mean and standard deviation of the conserved variables, cell (i, k) at
/// (k * nx + i) * vars + v.
struct FieldStats {
  double t = 0.0;
  std::vector<double> mean;
  std::vector<double> std;
};

struct OutputBundle {
  RunConfig config;
  std::string solver;
  int dims = 1, nx = 0, ny = 1, vars = 0;
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  FieldStats result;
  std::vector<FieldStats> snapshots;
  std::vector<double> coefficients;  // SG coefficients per cell (modes * vars), empty otherwise
  LimiterLog log;
  std::int64_t steps = 0;
  double wall_seconds = 0.0;

  double dx() const noexcept { return (x_hi - x_lo) / nx; }
  double dy() const noexcept { return dims == 2 ? (y_hi - y_lo) / ny : 1.0; }
  std::vector<double> x_faces() const;
};

/// Cell averages of the gPC projection of the problem's initial data.
CellField project_initial_1d(const ProblemSetup& problem, const GalerkinSystem& system, const Mesh1D& mesh,
                             int xi_nodes);
Field2D project_initial_2d(const ProblemSetup& problem, const GalerkinSystem& system, const Mesh2D& mesh,
                           int xi_nodes);

/// Statistics of gPC coefficients: mean = mode 0, std^2 = sum of modes 1..M squared.
FieldStats coefficient_stats(const std::vector<double>& coeffs, int modes, int vars, double t);

/// Runs the configured solver to t_final. A dry run returns an empty bundle
/// that only carries the config.
OutputBundle run_case(const RunConfig& config);

/// Mean and std over xi (rule of `xi_nodes` points) of exact cell averages
/// (5-point Gauss per cell) for 1D problems with a known solution.
FieldStats exact_stats(const ProblemSetup& problem, int nx, double t, int xi_nodes = 64);

/// Reference run: exact statistics when the problem has an exact solution,
/// collocation otherwise.
OutputBundle reference_case(const RunConfig& config);

/// solution.csv, meta.json, timing.json and solution.vtk (2D) in dir.
void write_outputs(const OutputBundle& bundle, const std::string& dir);
/// Reads a directory written by write_outputs (fields and metadata).
OutputBundle load_outputs(const std::string& dir);

std::string solution_csv(const OutputBundle& bundle, const FieldStats& stats);
std::string meta_json(const OutputBundle& bundle);

struct ConvergenceRow {
  int nx = 0;
  int order = 0;
  std::vector<double> mean_error;  // l1 per conserved variable
  std::vector<double> std_error;
  std::optional<double> mean_rate;  // of the density, vs the previous row
  std::optional<double> std_rate;
};

/// Runs the config once per mesh (or per order when orders is non-empty) and
/// measures l1 errors against exact statistics.
std::vector<ConvergenceRow> convergence_study(const RunConfig& base, const std::vector<int>& meshes,
                                              const std::vector<int>& orders = {});
std::string convergence_table(const std::vector<ConvergenceRow>& rows);

struct CompareReport {
  int nx = 0, ny = 1, vars = 0;
  std::vector<double> l1_mean, l1_std, linf_mean, linf_std;
  std::string slice_csv;
};

/// Differences of two bundles on a common grid (the finer field is restricted
/// to the coarser by overlap-weighted averaging). slice: "none", "x" (1D
/// profile or the row nearest y = 0.5), "diagonal" (cells on y = x,
/// arclength scaled to [0, 1]).
CompareReport compare(const OutputBundle& a, const OutputBundle& b, const std::string& slice = "none");
std::string compare_json(const CompareReport& report);

/// Overlap-weighted restriction of cell data (nx x ny x vars) onto a coarser
/// grid of the same domain.
std::vector<double> restrict_field(const std::vector<double>& values, int nx, int ny, int vars, int to_nx, int to_ny);

}  // namespace gpcsg
