/*
 * crlearn C interface.
 *
 * Opaque handles own their data; every handle returned through an out
 * parameter must be released with the matching *_destroy function. Functions
 * return CRL_OK or an error status; crl_last_error() then holds a message for
 * the calling thread.
 */
#ifndef CRLEARN_H
#define CRLEARN_H

#include <stddef.h>
#include <stdint.h>

#if defined(CRLEARN_BUILDING_LIBRARY)
#define CRLEARN_API __attribute__((visibility("default")))
#else
#define CRLEARN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum crl_status {
  CRL_OK = 0,
  CRL_ERR_INVALID_CONFIG = 1,
  CRL_ERR_UNKNOWN_KEY = 2,
  CRL_ERR_NON_POSITIVE_THRESHOLD = 3,
  CRL_ERR_TRUTH_OUTSIDE_PRIOR = 4,
  CRL_ERR_GEOMETRY = 5,
  CRL_ERR_IO = 6,
  CRL_ERR_INVALID_ARGUMENT = 7,
  CRL_ERR_INTERNAL = 8
} crl_status;

typedef enum crl_learner { CRL_LEARNER_ACCPM = 0, CRL_LEARNER_CGCPM = 1 } crl_learner;
typedef enum crl_feedback { CRL_FEEDBACK_BINARY = 0, CRL_FEEDBACK_MCC = 1 } crl_feedback;

typedef struct crl_config crl_config;
typedef struct crl_trace crl_trace;
typedef struct crl_ensemble crl_ensemble;

typedef struct crl_trace_row {
  int32_t flop;
  double error;
  double i_pu_dbm;
  double capacity;
  double epsilon;
  int32_t mcs; /* 0 = outage */
  int32_t explored;
} crl_trace_row;

typedef struct crl_run_summary {
  int32_t flops_to_1pct; /* -1 when never reached */
  double mean_i_pu_dbm;
  double mean_capacity;
  int32_t reference_mcs;
  int32_t dropped_observations;
  int32_t geometry_recoveries;
  int32_t newton_nonconverged;
} crl_run_summary;

typedef struct crl_ensemble_summary {
  int32_t n_runs;
  int32_t n_converged;
  int32_t flops;
  double mean_flops_to_1pct;
  double mean_i_pu_dbm;
  double mean_capacity;
} crl_ensemble_summary;

typedef struct crl_threshold_row {
  int32_t level;
  char label[32];
  double gamma_db;
  double i_th_dbm;
  double gamma_ratio;     /* 10^((gamma_j - gamma_ref)/10) */
  double threshold_ratio; /* I_th_ref / I_th_j, NaN above the reference */
} crl_threshold_row;

CRLEARN_API const char* crl_version(void);
CRLEARN_API const char* crl_last_error(void);
CRLEARN_API const char* crl_status_name(crl_status status);

/* Configuration */
CRLEARN_API crl_status crl_config_create(crl_config** out);
CRLEARN_API crl_status crl_config_load(const char* path, crl_config** out);
CRLEARN_API crl_status crl_config_clone(const crl_config* cfg, crl_config** out);
CRLEARN_API crl_status crl_config_set(crl_config* cfg, const char* key, const char* value);
CRLEARN_API crl_status crl_config_validate(const crl_config* cfg);
CRLEARN_API void crl_config_destroy(crl_config* cfg);

/* Thresholds table; *count receives the number of ladder levels even when
 * capacity is too small (then CRL_ERR_INVALID_ARGUMENT is returned). */
CRLEARN_API crl_status crl_thresholds(const crl_config* cfg, crl_threshold_row* rows,
                                      size_t capacity, size_t* count);

/* Single run (static or fading as configured). */
CRLEARN_API crl_status crl_run(const crl_config* cfg, crl_trace** out);
CRLEARN_API size_t crl_trace_length(const crl_trace* trace);
CRLEARN_API crl_status crl_trace_row_at(const crl_trace* trace, size_t index, crl_trace_row* out);
CRLEARN_API crl_status crl_trace_get_summary(const crl_trace* trace, crl_run_summary* out);
CRLEARN_API crl_status crl_trace_write_csv(const crl_trace* trace, const char* path);
CRLEARN_API void crl_trace_destroy(crl_trace* trace);

/* Ensemble of independent topologies; threads = 0 uses the hardware count.
 * n_topologies <= 0 takes the config value; flops <= 0 takes the configured
 * budget (t_c * n_blocks when fading is on). */
CRLEARN_API crl_status crl_ensemble_run(const crl_config* cfg, crl_learner learner,
                                        crl_feedback feedback, int32_t n_topologies,
                                        int32_t flops, int32_t threads, crl_ensemble** out);
CRLEARN_API size_t crl_ensemble_length(const crl_ensemble* ens);
CRLEARN_API crl_status crl_ensemble_mean_error(const crl_ensemble* ens, double* out,
                                               size_t capacity);
CRLEARN_API crl_status crl_ensemble_get_summary(const crl_ensemble* ens, crl_ensemble_summary* out);
CRLEARN_API crl_status crl_ensemble_write_csv(const crl_ensemble* ens, const char* path);
CRLEARN_API void crl_ensemble_destroy(crl_ensemble* ens);

#ifdef __cplusplus
}
#endif

#endif /* CRLEARN_H */
