#include "gpcsg/gpcsg.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gpcsg/driver.hpp"
#include "gpcsg/errors.hpp"

struct gpcsg_config {
  gpcsg::RunConfig value;
};

struct gpcsg_result {
  gpcsg::OutputBundle value;
};

namespace {

thread_local std::string last_error;

gpcsg_status fail(gpcsg_status code, const std::string& msg) {
  last_error = msg;
  return code;
}

// Runs f, translating exceptions into status codes.
template <class F>
gpcsg_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return GPCSG_OK;
  } catch (const gpcsg::ConfigError& e) {
    return fail(GPCSG_ERR_CONFIG, e.what());
  } catch (const gpcsg::DomainError& e) {
    return fail(GPCSG_ERR_DOMAIN, e.what());
  } catch (const gpcsg::InadmissibleState& e) {
    return fail(GPCSG_ERR_INADMISSIBLE, e.what());
  } catch (const gpcsg::HyperbolicityLoss& e) {
    return fail(GPCSG_ERR_HYPERBOLICITY, e.what());
  } catch (const gpcsg::VacuumError& e) {
    return fail(GPCSG_ERR_VACUUM, e.what());
  } catch (const gpcsg::IoError& e) {
    return fail(GPCSG_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(GPCSG_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GPCSG_ERR_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define GPCSG_REQUIRE(cond)                                                  \
  do {                                                                       \
    if (!(cond)) return fail(GPCSG_ERR_ARGUMENT, "invalid argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* gpcsg_last_error(void) { return last_error.c_str(); }

const char* gpcsg_version(void) { return "0.1.0"; }

void gpcsg_string_free(char* s) { std::free(s); }

gpcsg_status gpcsg_problem_names(char** out) {
  GPCSG_REQUIRE(out);
  return guarded([&] {
    std::string s;
    for (const auto& n : gpcsg::builtin_problem_names()) s += n + "\n";
    *out = dup(s);
  });
}

gpcsg_status gpcsg_config_new(gpcsg_config** out) {
  GPCSG_REQUIRE(out);
  return guarded([&] { *out = new gpcsg_config{}; });
}

gpcsg_status gpcsg_config_from_json(const char* text, gpcsg_config** out) {
  GPCSG_REQUIRE(text && out);
  return guarded([&] { *out = new gpcsg_config{gpcsg::parse_config(text)}; });
}

gpcsg_status gpcsg_config_load(const char* path, gpcsg_config** out) {
  GPCSG_REQUIRE(path && out);
  return guarded([&] {
    std::ifstream f(path);
    if (!f) throw gpcsg::IoError(std::string("cannot open config file ") + path);
    std::ostringstream os;
    os << f.rdbuf();
    *out = new gpcsg_config{gpcsg::parse_config(os.str())};
  });
}

gpcsg_status gpcsg_config_set(gpcsg_config* config, const char* key, const char* json_value) {
  GPCSG_REQUIRE(config && key && json_value);
  return guarded([&] {
    nlohmann::json j = nlohmann::json::parse(gpcsg::config_json(config->value));
    nlohmann::json v;
    try {
      v = nlohmann::json::parse(json_value);
    } catch (const nlohmann::json::exception&) {
      throw gpcsg::ConfigError(std::string("value for '") + key + "' is not valid JSON");
    }
    j[key] = v;
    config->value = gpcsg::parse_config(j.dump());
  });
}

gpcsg_status gpcsg_config_get(const gpcsg_config* config, const char* key, char** json_value) {
  GPCSG_REQUIRE(config && key && json_value);
  return guarded([&] {
    const auto j = nlohmann::json::parse(gpcsg::config_json(config->value));
    if (!j.contains(key)) throw gpcsg::ConfigError(std::string("unknown config key '") + key + "'");
    *json_value = dup(j[key].dump());
  });
}

gpcsg_status gpcsg_config_validate(const gpcsg_config* config) {
  GPCSG_REQUIRE(config);
  return guarded([&] { gpcsg::validate(config->value); });
}

gpcsg_status gpcsg_config_to_json(const gpcsg_config* config, char** out) {
  GPCSG_REQUIRE(config && out);
  return guarded([&] { *out = dup(gpcsg::config_json(config->value)); });
}

void gpcsg_config_free(gpcsg_config* config) { delete config; }

gpcsg_status gpcsg_run(const gpcsg_config* config, gpcsg_result** out) {
  GPCSG_REQUIRE(config && out);
  return guarded([&] { *out = new gpcsg_result{gpcsg::run_case(config->value)}; });
}

gpcsg_status gpcsg_reference(const gpcsg_config* config, gpcsg_result** out) {
  GPCSG_REQUIRE(config && out);
  return guarded([&] { *out = new gpcsg_result{gpcsg::reference_case(config->value)}; });
}

gpcsg_status gpcsg_result_load(const char* dir, gpcsg_result** out) {
  GPCSG_REQUIRE(dir && out);
  return guarded([&] { *out = new gpcsg_result{gpcsg::load_outputs(dir)}; });
}

gpcsg_status gpcsg_result_write(const gpcsg_result* result, const char* dir) {
  GPCSG_REQUIRE(result && dir);
  return guarded([&] { gpcsg::write_outputs(result->value, dir); });
}

gpcsg_status gpcsg_result_shape(const gpcsg_result* result, int* dims, int* nx, int* ny, int* vars) {
  GPCSG_REQUIRE(result);
  const auto& b = result->value;
  if (dims) *dims = b.dims;
  if (nx) *nx = b.nx;
  if (ny) *ny = b.ny;
  if (vars) *vars = b.vars;
  return GPCSG_OK;
}

gpcsg_status gpcsg_result_field(const gpcsg_result* result, int which, double* out, size_t len) {
  GPCSG_REQUIRE(result && out && (which == 0 || which == 1));
  const auto& data = which == 0 ? result->value.result.mean : result->value.result.std;
  if (len < data.size()) return fail(GPCSG_ERR_ARGUMENT, "output buffer too small");
  std::memcpy(out, data.data(), data.size() * sizeof(double));
  return GPCSG_OK;
}

gpcsg_status gpcsg_result_steps(const gpcsg_result* result, long long* steps) {
  GPCSG_REQUIRE(result && steps);
  *steps = result->value.steps;
  return GPCSG_OK;
}

gpcsg_status gpcsg_result_limiter_counts(const gpcsg_result* result, long long* node, long long* average) {
  GPCSG_REQUIRE(result);
  if (node) *node = static_cast<long long>(result->value.log.node_count);
  if (average) *average = static_cast<long long>(result->value.log.average_count);
  return GPCSG_OK;
}

gpcsg_status gpcsg_result_meta_json(const gpcsg_result* result, char** out) {
  GPCSG_REQUIRE(result && out);
  return guarded([&] { *out = dup(gpcsg::meta_json(result->value)); });
}

gpcsg_status gpcsg_result_csv(const gpcsg_result* result, char** out) {
  GPCSG_REQUIRE(result && out);
  return guarded([&] { *out = dup(gpcsg::solution_csv(result->value, result->value.result)); });
}

void gpcsg_result_free(gpcsg_result* result) { delete result; }

gpcsg_status gpcsg_converge(const gpcsg_config* config, const int* meshes, size_t n_meshes, const int* orders,
                            size_t n_orders, char** table_csv) {
  GPCSG_REQUIRE(config && table_csv && (meshes || n_meshes == 0) && (orders || n_orders == 0));
  return guarded([&] {
    const std::vector<int> m(meshes, meshes + n_meshes);
    const std::vector<int> o = orders ? std::vector<int>(orders, orders + n_orders) : std::vector<int>{};
    *table_csv = dup(gpcsg::convergence_table(gpcsg::convergence_study(config->value, m, o)));
  });
}

gpcsg_status gpcsg_compare(const gpcsg_result* a, const gpcsg_result* b, const char* slice, char** report_json,
                           char** slice_csv) {
  GPCSG_REQUIRE(a && b && report_json);
  return guarded([&] {
    const auto r = gpcsg::compare(a->value, b->value, slice ? slice : "none");
    *report_json = dup(gpcsg::compare_json(r));
    if (slice_csv) *slice_csv = dup(r.slice_csv);
  });
}

}  // extern "C"
