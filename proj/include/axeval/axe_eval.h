#ifndef AXEVAL_AXE_EVAL_H
#define AXEVAL_AXE_EVAL_H

/* C interface to the explanation-evaluation toolkit. All functions return a
 * status code; on failure axev_last_error() holds a message for the calling
 * thread until the next failing call. Strings returned through out-params are
 * heap-allocated and must be released with axev_string_free. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  AXEV_OK = 0,
  AXEV_ERR_INTERNAL = 1,   /* unexpected failure */
  AXEV_ERR_CONFIG = 2,     /* invalid configuration or arguments */
  AXEV_ERR_DATA = 3,       /* unreadable/malformed input data */
  AXEV_ERR_CAPABILITY = 4  /* operation unsupported by this model */
} axev_status;

typedef struct axev_dataset axev_dataset;
typedef struct axev_model axev_model;

const char* axev_last_error(void);

/* ---- datasets ---- */
axev_status axev_dataset_load_csv(const char* path, axev_dataset** out);
void axev_dataset_free(axev_dataset* ds);
size_t axev_dataset_rows(const axev_dataset* ds);
size_t axev_dataset_cols(const axev_dataset* ds);
int axev_dataset_has_target(const axev_dataset* ds);

/* ---- models ---- */
axev_status axev_model_load(const char* path, axev_model** out);
/* kind: "logistic" or "mlp"; the dataset must carry a target column. */
axev_status axev_model_fit(const axev_dataset* ds, const char* kind,
                           uint64_t seed, axev_model** out);
void axev_model_free(axev_model* m);
/* Score at a point in standardized coordinates (n must equal dataset cols). */
axev_status axev_model_score(const axev_model* m, const double* std_x,
                             size_t n, double* out_score);
axev_status axev_model_save(const axev_model* m, const axev_dataset* ds,
                            const char* path);

/* ---- runs ----
 * Each takes a JSON configuration document and returns the run's JSON result
 * document. Reports are also written under the config's "out" directory. */
axev_status axev_evaluate(const char* config_json, char** result_json);
axev_status axev_run_synthetic(const char* config_json, char** result_json);
axev_status axev_run_fairwash(const char* config_json, char** result_json);
axev_status axev_run_benchmark(const char* config_json, char** result_json);

void axev_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* AXEVAL_AXE_EVAL_H */
