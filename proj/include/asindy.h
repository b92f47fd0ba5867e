/* C API for the asindy disturbance-rejection workbench.
 *
 * All entry points return a status code; ASINDY_OK means success. On
 * failure, asindy_last_error() returns a thread-local message describing
 * what went wrong. Configurations are opaque handles created from the
 * key-value experiment files and released with asindy_config_free().
 */
#ifndef ASINDY_H
#define ASINDY_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct asindy_config asindy_config;

typedef enum asindy_status {
  ASINDY_OK = 0,
  ASINDY_ERR_IO = 1,          /* filesystem / serialization failure */
  ASINDY_ERR_CONFIG = 2,      /* invalid configuration */
  ASINDY_ERR_DATA = 3,        /* unusable input data */
  ASINDY_ERR_SOLVER = 4,      /* regression solver failure */
  ASINDY_ERR_SIM = 5,         /* simulation or adaptation divergence */
  ASINDY_ERR_INVALID = 6,     /* bad arguments / contract violation */
  ASINDY_ERR_INTERNAL = 7
} asindy_status;

/* Library version, e.g. "1.0.0". */
const char* asindy_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* asindy_last_error(void);

/* Load an experiment configuration file. On success *out owns the handle. */
asindy_status asindy_config_load(const char* path, asindy_config** out);

/* Override one entry, key in "section.key" form (e.g. "run.runs"). */
asindy_status asindy_config_set(asindy_config* cfg, const char* key,
                                const char* value);

void asindy_config_free(asindy_config* cfg);

/* Run the seeded data-collection campaign; one RunLog CSV per seed plus a
 * manifest is written into out_dir. */
asindy_status asindy_collect(const asindy_config* cfg, const char* out_dir);

/* Fit the residual-force model from RunLog CSVs and write it to model_out. */
asindy_status asindy_identify(const asindy_config* cfg,
                              const char* const* log_paths, size_t n_logs,
                              const char* model_out);

/* Run both controller arms over paired wind seeds and write per-run CSVs,
 * results tables, and a manifest into out_dir. model_path may be NULL or
 * empty to use run.model from the configuration. */
asindy_status asindy_evaluate(const asindy_config* cfg, const char* model_path,
                              const char* out_dir);

/* Cross-product of evaluate calls over grid entries of the form
 * "section.key=v1,v2,...". Writes sweep.csv plus one directory per cell. */
asindy_status asindy_sweep(const asindy_config* cfg, const char* model_path,
                           const char* const* grid, size_t n_grid,
                           const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ASINDY_H */
