/* shelfcast: retail demand forecasting and evaluation harness, C interface.
 *
 * All functions return an sc_status. On failure a message describing the
 * error is available from sc_last_error() on the calling thread until the
 * next call into the library from that thread. Handles are opaque and must
 * be released with the matching destroy function; destroy accepts NULL.
 */
#ifndef SHELFCAST_SHELFCAST_H
#define SHELFCAST_SHELFCAST_H

#include <stddef.h>

#if defined(SHELFCAST_BUILDING_LIBRARY)
#define SC_API __attribute__((visibility("default")))
#else
#define SC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sc_status {
  SC_OK = 0,
  SC_ERR_INVALID_ARGUMENT = 1,
  SC_ERR_IO = 2,
  SC_ERR_PARSE = 3,
  SC_ERR_EMPTY = 4,
  SC_ERR_NUMERIC = 5,
  SC_ERR_VERSION = 6,
  SC_ERR_PARTIAL = 7, /* run finished but some cells failed */
  SC_ERR_INTERNAL = 99
} sc_status;

typedef struct sc_config sc_config;
typedef struct sc_panel sc_panel;
typedef struct sc_model sc_model;

SC_API const char* sc_version(void);
SC_API const char* sc_status_string(sc_status status);
SC_API const char* sc_last_error(void);

/* Experiment configuration (INI text with [section] headers). */
SC_API sc_status sc_config_create(sc_config** out);
SC_API sc_status sc_config_load(const char* path, sc_config** out);
SC_API sc_status sc_config_set(sc_config* cfg, const char* section, const char* key, const char* value);
/* Current value of a setting as text; free with sc_string_free. */
SC_API sc_status sc_config_get(const sc_config* cfg, const char* section, const char* key, char** out_value);
SC_API sc_status sc_config_write(const sc_config* cfg, const char* path);
SC_API void sc_config_destroy(sc_config* cfg);

/* Panels. */
SC_API sc_status sc_panel_generate(const sc_config* cfg, sc_panel** out);
SC_API sc_status sc_panel_load(const sc_config* cfg, sc_panel** out); /* path or generator per config */
SC_API sc_status sc_panel_read_csv(const char* path, sc_panel** out);
SC_API sc_status sc_panel_write_csv(const sc_panel* panel, const char* path);
SC_API sc_status sc_panel_series_count(const sc_panel* panel, size_t* out);
SC_API sc_status sc_panel_row_count(const sc_panel* panel, size_t* out);

/* Class order: Smooth, Intermittent, Erratic, Lumpy, No Demand. */
typedef struct sc_panel_stats {
  size_t series_count;
  size_t train_series;
  size_t valid_series;
  double train_missingness;
  double valid_missingness;
  double train_coverage;
  double valid_coverage;
  size_t eliminated_count;
  size_t new_count;
  double eliminated_ratio;
  double new_ratio;
  size_t class_count[5];
  double class_fraction[5];
} sc_panel_stats;

/* cutoff_iso may be NULL to use the configured split (cfg may then not be NULL). */
SC_API sc_status sc_panel_summarize(const sc_panel* panel, const sc_config* cfg, const char* cutoff_iso,
                                    sc_panel_stats* out);
/* Writes series_key,adi,cv2,class. */
SC_API sc_status sc_panel_classify(const sc_panel* panel, int missing_as_zero, const char* csv_path);
SC_API void sc_panel_destroy(sc_panel* panel);

/* Boruta selection on the panel; writes feature,decision,hits,iters. */
SC_API sc_status sc_select_features(const sc_config* cfg, const sc_panel* panel, const char* csv_path);

/* Runs the configured cases and models and writes all tables under out_dir
 * (NULL: the configured output directory). panel may be NULL to load it per
 * config. Returns SC_ERR_PARTIAL when some cells failed; their status is in
 * summary.csv. */
SC_API sc_status sc_run(const sc_config* cfg, const sc_panel* panel, const char* out_dir);

/* Plain-text rendering of summary.csv and timings.csv from a run directory.
 * Free the returned string with sc_string_free. */
SC_API sc_status sc_report(const char* out_dir, char** out_text);
SC_API void sc_string_free(char* text);

/* Gradient-boosted tree models. columns[f] points at n_rows values of the
 * feature named names[f]; NaN marks a missing value. The [gbdt] section of
 * cfg supplies the training settings. */
SC_API sc_status sc_model_fit(const sc_config* cfg, const char* const* names, const double* const* columns,
                              size_t n_features, size_t n_rows, const double* target, sc_model** out);
SC_API sc_status sc_model_load(const char* path, sc_model** out);
SC_API sc_status sc_model_save(const sc_model* model, const char* path);
SC_API sc_status sc_model_predict(const sc_model* model, const char* const* names, const double* const* columns,
                                  size_t n_features, size_t n_rows, double* out);
SC_API sc_status sc_model_feature_count(const sc_model* model, size_t* out);
SC_API void sc_model_destroy(sc_model* model);

#ifdef __cplusplus
}
#endif

#endif /* SHELFCAST_SHELFCAST_H */
