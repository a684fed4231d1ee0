// Command-line front end; talks to the solver only through the C interface.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpcsg/gpcsg.h"

namespace {

struct CommonFlags {
  std::string config;
  std::string problem;
  int order = -1;
  std::vector<int> cells;
  double cfl = -1.0;
  std::string mode;
  std::string out;
  std::string solver;
  std::vector<std::string> sets;
  bool dry_run = false;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("--problem", f.problem, "built-in problem name");
  app->add_option("--order", f.order, "gPC order M")->check(CLI::NonNegativeNumber);
  app->add_option("--cells", f.cells, "cells (nx, or nx ny)")->expected(1, 2);
  app->add_option("--cfl", f.cfl, "CFL number");
  app->add_option("--mode", f.mode, "splitting mode: strang or thirdorder");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--solver", f.solver, "sg or collocation");
  app->add_option("--set", f.sets, "extra config entry key=json_value")->take_all();
  app->add_flag("--dry-run", f.dry_run, "echo the effective config only");
}

[[noreturn]] void die(gpcsg_status s) {
  std::fprintf(stderr, "error (%d): %s\n", static_cast<int>(s), gpcsg_last_error());
  std::exit(2);
}

void check(gpcsg_status s) {
  if (s != GPCSG_OK) die(s);
}

std::string quoted(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') q += '\\';
    q += c;
  }
  return q + "\"";
}

gpcsg_config* build_config(const CommonFlags& f) {
  gpcsg_config* c = nullptr;
  check(f.config.empty() ? gpcsg_config_new(&c) : gpcsg_config_load(f.config.c_str(), &c));
  auto set = [&](const char* key, const std::string& json) { check(gpcsg_config_set(c, key, json.c_str())); };
  if (!f.problem.empty()) set("problem", quoted(f.problem));
  if (f.order >= 0) set("order", std::to_string(f.order));
  if (f.cells.size() == 1) set("cells", std::to_string(f.cells[0]));
  if (f.cells.size() == 2) set("cells", "[" + std::to_string(f.cells[0]) + "," + std::to_string(f.cells[1]) + "]");
  if (f.cfl > 0.0) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", f.cfl);
    set("cfl", buf);
  }
  if (!f.mode.empty()) set("split_mode", quoted(f.mode));
  if (!f.out.empty()) set("out", quoted(f.out));
  if (!f.solver.empty()) set("solver", quoted(f.solver));
  if (f.dry_run) set("dry_run", "true");
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "--set expects key=value, got '%s'\n", kv.c_str());
      std::exit(2);
    }
    set(kv.substr(0, eq).c_str(), kv.substr(eq + 1));
  }
  check(gpcsg_config_validate(c));
  return c;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  gpcsg_string_free(s);
  return out;
}

std::string out_dir(gpcsg_config* c) {
  char* json = nullptr;
  check(gpcsg_config_get(c, "out", &json));
  const std::string text = take(json);
  // a JSON string; paths with escapes are not expected here
  return text.size() >= 2 ? text.substr(1, text.size() - 2) : "";
}

int run_like(const CommonFlags& f, bool reference) {
  gpcsg_config* c = build_config(f);
  char* echo = nullptr;
  check(gpcsg_config_to_json(c, &echo));
  const std::string config_text = take(echo);
  gpcsg_result* r = nullptr;
  check(reference ? gpcsg_reference(c, &r) : gpcsg_run(c, &r));
  const std::string dir = out_dir(c);
  if (f.dry_run) {
    std::printf("%s\n", config_text.c_str());
  } else if (dir.empty()) {
    char* csv = nullptr;
    check(gpcsg_result_csv(r, &csv));
    std::fputs(take(csv).c_str(), stdout);
  } else {
    long long steps = 0, node = 0, average = 0;
    check(gpcsg_result_steps(r, &steps));
    check(gpcsg_result_limiter_counts(r, &node, &average));
    std::printf("steps %lld, limiter activations %lld node / %lld average\n", steps, node, average);
  }
  if (!dir.empty()) {
    check(gpcsg_result_write(r, dir.c_str()));
    std::printf("wrote %s\n", dir.c_str());
  }
  gpcsg_result_free(r);
  gpcsg_config_free(c);
  return 0;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) {
    std::fprintf(stderr, "cannot write %s\n", path.c_str());
    std::exit(2);
  }
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gPC stochastic Galerkin WENO solver for the Euler equations"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run = app.add_subcommand("run", "run one configuration");
  add_common(run, run_flags);

  CommonFlags ref_flags;
  auto* ref = app.add_subcommand("reference", "exact statistics or stochastic collocation for a configuration");
  add_common(ref, ref_flags);

  CommonFlags conv_flags;
  std::vector<int> meshes, orders;
  auto* conv = app.add_subcommand("converge", "l1 errors against exact statistics over meshes or orders");
  add_common(conv, conv_flags);
  conv->add_option("--meshes", meshes, "cell counts")->expected(1, -1);
  conv->add_option("--orders", orders, "gPC orders (single mesh)")->expected(1, -1);

  std::string dir_a, dir_b, slice = "none", cmp_out;
  auto* cmp = app.add_subcommand("compare", "difference of two output directories");
  cmp->add_option("a", dir_a, "first output directory")->required()->check(CLI::ExistingDirectory);
  cmp->add_option("b", dir_b, "second output directory")->required()->check(CLI::ExistingDirectory);
  cmp->add_option("--slice", slice, "none, x or diagonal");
  cmp->add_option("--out", cmp_out, "file for the slice CSV");

  auto* names = app.add_subcommand("problems", "list built-in problems");

  CLI11_PARSE(app, argc, argv);

  if (*run) return run_like(run_flags, false);
  if (*ref) return run_like(ref_flags, true);
  if (*names) {
    char* s = nullptr;
    check(gpcsg_problem_names(&s));
    std::fputs(take(s).c_str(), stdout);
    return 0;
  }
  if (*conv) {
    gpcsg_config* c = build_config(conv_flags);
    if (meshes.empty() && orders.empty()) {
      std::fprintf(stderr, "converge needs --meshes or --orders\n");
      return 2;
    }
    char* table = nullptr;
    check(gpcsg_converge(c, meshes.data(), meshes.size(), orders.empty() ? nullptr : orders.data(), orders.size(),
                         &table));
    const std::string text = take(table);
    std::fputs(text.c_str(), stdout);
    const std::string dir = out_dir(c);
    if (!dir.empty()) {
      std::filesystem::create_directories(dir);
      write_text(dir + "/convergence.csv", text);
    }
    gpcsg_config_free(c);
    return 0;
  }
  if (*cmp) {
    gpcsg_result *a = nullptr, *b = nullptr;
    check(gpcsg_result_load(dir_a.c_str(), &a));
    check(gpcsg_result_load(dir_b.c_str(), &b));
    char *report = nullptr, *csv = nullptr;
    check(gpcsg_compare(a, b, slice.c_str(), &report, &csv));
    std::printf("%s\n", take(report).c_str());
    const std::string slice_text = take(csv);
    if (!cmp_out.empty() && !slice_text.empty()) write_text(cmp_out, slice_text);
    gpcsg_result_free(a);
    gpcsg_result_free(b);
    return 0;
  }
  return 0;
}
