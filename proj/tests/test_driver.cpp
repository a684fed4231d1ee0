#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "gpcsg/driver.hpp"
#include "gpcsg/errors.hpp"

using namespace gpcsg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("gpcsg_test_" + name);
  fs::remove_all(dir);
  return dir;
}

RunConfig smooth_config(int order, int cells) {
  RunConfig c;
  c.problem = "smooth";
  c.order = order;
  c.nx = cells;
  return c;
}

}  // namespace

TEST_CASE("solution csv shape") {
  const auto b = run_case(smooth_config(4, 20));
  const auto csv = solution_csv(b, b.result);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,mean_rho,std_rho,mean_mx,std_mx,mean_E,std_E");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
  }
  CHECK(rows == 20);
  CHECK(b.result.t == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(b.steps > 0);
}

TEST_CASE("dry run only echoes the config") {
  auto c = smooth_config(4, 20);
  c.dry_run = true;
  const auto b = run_case(c);
  CHECK(b.steps == 0);
  CHECK(b.result.mean.empty());
  CHECK(config_json(b.config) == config_json(c));
}

TEST_CASE("config round trip and validation") {
  RunConfig c;
  c.problem = "rp1_gamma";
  c.order = 5;
  c.nx = 64;
  c.ny = 48;
  c.cfl = 0.45;
  c.dt_policy = "dx53";
  c.xi_nodes = 14;
  c.limiter = false;
  c.weights = "linear";
  c.split_mode = "thirdorder";
  c.alternate = false;
  c.solver = "collocation";
  c.collocation_nodes = 12;
  c.t_final = 0.1;
  c.snapshots = {0.025, 0.05};
  c.out = "some/dir";
  const auto echo = config_json(c);
  CHECK(config_json(parse_config(echo)) == echo);
  CHECK_NOTHROW(validate(parse_config(echo)));

  CHECK(parse_config(R"({"cells": [30, 20], "problem": "rp2_density"})").ny == 20);
  CHECK(parse_config("{}").problem == "sod");
  CHECK_THROWS_AS(parse_config(R"({"colour": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"order": "three"})"), ConfigError);

  auto bad = smooth_config(4, 20);
  bad.order = -1;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = smooth_config(4, 20);
  bad.cfl = 1.5;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = smooth_config(4, 20);
  bad.ny = 10;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = smooth_config(4, 20);
  bad.problem = "nope";
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = smooth_config(4, 20);
  bad.split_mode = "fourthorder";
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("runs are deterministic and outputs round-trip") {
  const auto c = smooth_config(2, 16);
  const auto a = run_case(c), b = run_case(c);
  const auto da = scratch("det_a"), db = scratch("det_b");
  write_outputs(a, da.string());
  write_outputs(b, db.string());
  CHECK(slurp(da / "solution.csv") == slurp(db / "solution.csv"));
  CHECK(slurp(da / "meta.json") == slurp(db / "meta.json"));
  CHECK(fs::exists(da / "timing.json"));

  const auto loaded = load_outputs(da.string());
  CHECK(loaded.nx == 16);
  CHECK(loaded.vars == 3);
  CHECK(loaded.steps == a.steps);
  CHECK(loaded.result.mean == a.result.mean);
  CHECK(loaded.result.std == a.result.std);
  const auto r = compare(a, loaded);
  for (double v : r.l1_mean) CHECK(v == 0.0);
  for (double v : r.linf_std) CHECK(v == 0.0);
  fs::remove_all(da);
  fs::remove_all(db);
}

TEST_CASE("snapshots") {
  auto c = smooth_config(1, 12);
  c.snapshots = {0.05, 0.1};
  const auto b = run_case(c);
  REQUIRE(b.snapshots.size() == 2);
  CHECK(b.snapshots[0].t == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(b.snapshots[1].t == doctest::Approx(0.1).epsilon(1e-14));
  const auto dir = scratch("snap");
  write_outputs(b, dir.string());
  CHECK(fs::exists(dir / "snapshot_0.csv"));
  CHECK(fs::exists(dir / "snapshot_1.csv"));
  fs::remove_all(dir);
}

TEST_CASE("restriction and comparison across meshes") {
  // 4 x 2 cells of one variable onto 2 x 1
  const std::vector<double> fine = {1, 2, 3, 4, 5, 6, 7, 8};
  const auto coarse = restrict_field(fine, 4, 2, 1, 2, 1);
  REQUIRE(coarse.size() == 2);
  CHECK(coarse[0] == doctest::Approx((1 + 2 + 5 + 6) / 4.0).epsilon(1e-15));
  CHECK(coarse[1] == doctest::Approx((3 + 4 + 7 + 8) / 4.0).epsilon(1e-15));
  // non-nested: 3 cells onto 2 (cell 1 is split in half)
  const auto odd = restrict_field({3.0, 6.0, 9.0}, 3, 1, 1, 2, 1);
  CHECK(odd[0] == doctest::Approx((3.0 * 2 + 6.0) / 3.0).epsilon(1e-14));
  CHECK(odd[1] == doctest::Approx((6.0 + 9.0 * 2) / 3.0).epsilon(1e-14));
  // constants are preserved
  const auto c = restrict_field(std::vector<double>(15 * 2, 4.5), 15, 1, 2, 10, 1);
  for (double v : c) CHECK(v == doctest::Approx(4.5).epsilon(1e-14));

  const auto a = run_case(smooth_config(2, 20));
  const auto b = run_case(smooth_config(2, 40));
  const auto r = compare(a, b, "x");
  CHECK(r.nx == 20);
  CHECK(r.l1_mean[0] > 0.0);
  CHECK(r.l1_mean[0] < 1e-2);
  CHECK(r.slice_csv.substr(0, 2) == "x,");
}

TEST_CASE("2D diagonal slice") {
  RunConfig c;
  c.problem = "smooth2d";
  c.order = 1;
  c.nx = 10;
  c.t_final = 0.01;
  const auto b = run_case(c);
  CHECK(b.dims == 2);
  CHECK(b.ny == 10);
  const auto r = compare(b, b, "diagonal");
  std::istringstream in(r.slice_csv);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("s,", 0) == 0);
  int rows = 0;
  double first = -1, last = -1;
  while (std::getline(in, line)) {
    const double s = std::stod(line.substr(0, line.find(',')));
    if (rows == 0) first = s;
    last = s;
    ++rows;
  }
  CHECK(rows == 10);
  CHECK(first >= 0.0);
  CHECK(last <= 1.0);
  const auto dir = scratch("vtk");
  write_outputs(b, dir.string());
  CHECK(slurp(dir / "solution.vtk").rfind("# vtk DataFile", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("convergence table") {
  const auto rows = convergence_study(smooth_config(2, 10), {10});
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].mean_rate);
  const auto table = convergence_table(rows);
  std::istringstream in(table);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "cells,order,mean_l1_rho,mean_rate,std_l1_rho,std_rate");
  CHECK(row.rfind("10,2,", 0) == 0);
  const auto two = convergence_study(smooth_config(2, 10), {10, 20});
  REQUIRE(two.size() == 2);
  REQUIRE(two[1].mean_rate);
  CHECK(*two[1].mean_rate > 2.0);
}

TEST_CASE("exact statistics of the smooth problem") {
  const auto p = builtin_problem("smooth");
  const auto s = exact_stats(p, 10, 0.0, 16);
  // at t = 0 the density does not depend on xi
  for (int j = 0; j < 10; ++j) {
    CHECK(s.std[j * 3] <= 1e-13);
    const double a = j / 10.0, b = a + 0.1;
    const double exact = 1.0 + 0.2 * (std::cos(2 * M_PI * a) - std::cos(2 * M_PI * b)) / (2 * M_PI * 0.1);
    CHECK(s.mean[j * 3] == doctest::Approx(exact).epsilon(1e-9));
  }
  CHECK_THROWS_AS(exact_stats(builtin_problem("rp1_gamma"), 10, 0.1), ConfigError);
}
