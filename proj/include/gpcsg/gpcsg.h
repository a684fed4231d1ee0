/* C interface of the gPC stochastic Galerkin solver. */
#ifndef GPCSG_H
#define GPCSG_H

#include <stddef.h>

#if defined(_WIN32)
#define GPCSG_API __declspec(dllexport)
#else
#define GPCSG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gpcsg_status {
  GPCSG_OK = 0,
  GPCSG_ERR_ARGUMENT = 1,      /* null handle or bad argument */
  GPCSG_ERR_CONFIG = 2,        /* invalid configuration */
  GPCSG_ERR_DOMAIN = 3,        /* value outside its domain */
  GPCSG_ERR_INADMISSIBLE = 4,  /* state left the admissible set */
  GPCSG_ERR_HYPERBOLICITY = 5, /* Galerkin system lost hyperbolicity */
  GPCSG_ERR_VACUUM = 6,        /* Riemann data generate vacuum */
  GPCSG_ERR_IO = 7,
  GPCSG_ERR_INTERNAL = 8
} gpcsg_status;

typedef struct gpcsg_config gpcsg_config;
typedef struct gpcsg_result gpcsg_result;

/* Message of the last failing call on this thread ("" if none). */
GPCSG_API const char* gpcsg_last_error(void);
GPCSG_API const char* gpcsg_version(void);
/* Frees strings returned through char** out-parameters. */
GPCSG_API void gpcsg_string_free(char* s);

/* Newline-separated list of built-in problem names. */
GPCSG_API gpcsg_status gpcsg_problem_names(char** out);

GPCSG_API gpcsg_status gpcsg_config_new(gpcsg_config** out);
GPCSG_API gpcsg_status gpcsg_config_from_json(const char* json_text, gpcsg_config** out);
GPCSG_API gpcsg_status gpcsg_config_load(const char* path, gpcsg_config** out);
/* Sets one key; value is JSON text (e.g. "4", "\"sod\"", "[100, 100]"). */
GPCSG_API gpcsg_status gpcsg_config_set(gpcsg_config* config, const char* key, const char* json_value);
/* JSON text of one key of the effective config. */
GPCSG_API gpcsg_status gpcsg_config_get(const gpcsg_config* config, const char* key, char** json_value);
GPCSG_API gpcsg_status gpcsg_config_validate(const gpcsg_config* config);
GPCSG_API gpcsg_status gpcsg_config_to_json(const gpcsg_config* config, char** out);
GPCSG_API void gpcsg_config_free(gpcsg_config* config);

/* Runs the configured solver. */
GPCSG_API gpcsg_status gpcsg_run(const gpcsg_config* config, gpcsg_result** out);
/* Exact statistics for 1D problems with a known solution, collocation otherwise. */
GPCSG_API gpcsg_status gpcsg_reference(const gpcsg_config* config, gpcsg_result** out);
/* Reads a directory written by gpcsg_result_write. */
GPCSG_API gpcsg_status gpcsg_result_load(const char* dir, gpcsg_result** out);

GPCSG_API gpcsg_status gpcsg_result_write(const gpcsg_result* result, const char* dir);
GPCSG_API gpcsg_status gpcsg_result_shape(const gpcsg_result* result, int* dims, int* nx, int* ny, int* vars);
/* which: 0 mean, 1 std. Copies nx * ny * vars values (cell-major, variable
   fastest) into out, whose capacity is len. */
GPCSG_API gpcsg_status gpcsg_result_field(const gpcsg_result* result, int which, double* out, size_t len);
GPCSG_API gpcsg_status gpcsg_result_steps(const gpcsg_result* result, long long* steps);
GPCSG_API gpcsg_status gpcsg_result_limiter_counts(const gpcsg_result* result, long long* node, long long* average);
GPCSG_API gpcsg_status gpcsg_result_meta_json(const gpcsg_result* result, char** out);
GPCSG_API gpcsg_status gpcsg_result_csv(const gpcsg_result* result, char** out);
GPCSG_API void gpcsg_result_free(gpcsg_result* result);

/* Convergence study. meshes/orders: arrays of length n_meshes/n_orders
   (orders may be NULL). Returns a CSV table. */
GPCSG_API gpcsg_status gpcsg_converge(const gpcsg_config* config, const int* meshes, size_t n_meshes,
                                      const int* orders, size_t n_orders, char** table_csv);

/* Differences of two results; slice is "none", "x" or "diagonal".
   slice_csv may be NULL. */
GPCSG_API gpcsg_status gpcsg_compare(const gpcsg_result* a, const gpcsg_result* b, const char* slice,
                                     char** report_json, char** slice_csv);

#ifdef __cplusplus
}
#endif

#endif
