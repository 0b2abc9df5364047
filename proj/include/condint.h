#ifndef CONDINT_H
#define CONDINT_H

#include <stddef.h>
#include <stdint.h>

#if defined(CONDINT_BUILDING_LIBRARY)
#define CONDINT_API __attribute__((visibility("default")))
#else
#define CONDINT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum condint_status {
  CONDINT_OK = 0,
  CONDINT_E_INVALID_PARAMETER = 1,
  CONDINT_E_CONFIGURATION = 2,
  CONDINT_E_PRECONDITION = 3,
  CONDINT_E_DEGENERATE = 4,
  CONDINT_E_ESTIMATION_FAILED = 5,
  CONDINT_E_SINGULAR_INFORMATION = 6,
  CONDINT_E_CONTRACT = 7,
  CONDINT_E_FAILURE_CAP = 8,
  CONDINT_E_IO = 9,
  CONDINT_E_NULL_ARGUMENT = 10,
  CONDINT_E_INTERNAL = 11
} condint_status;

typedef enum condint_model { CONDINT_AR1 = 0, CONDINT_GARCH11 = 1 } condint_model;

typedef enum condint_variant { CONDINT_2IP = 0, CONDINT_SPL = 1, CONDINT_STA = 2 } condint_variant;

typedef enum condint_metric {
  CONDINT_KOLMOGOROV = 0,
  CONDINT_LEVY = 1,
  CONDINT_BOUNDED_LIPSCHITZ = 2
} condint_metric;

typedef struct condint_series condint_series;
typedef struct condint_cdf condint_cdf;
typedef struct condint_config condint_config;
typedef struct condint_report condint_report;

/* Model description. theta has dim entries: beta (AR1) or omega, alpha, beta
 * (GARCH11). student_df = 0 selects Gaussian innovations. */
typedef struct condint_model_spec {
  condint_model model;
  double theta[3];
  size_t dim;
  double noise_sd;
  double student_df;
} condint_model_spec;

typedef struct condint_estimate {
  double theta[3];
  size_t dim;
  double cov[9]; /* row-major dim x dim */
  double rate;
  size_t n_used;
  size_t iterations;
  double objective;
  int beta_unidentified;
} condint_estimate;

typedef struct condint_interval {
  double lower;
  double upper;
  double center;
  double gamma1;
  double gamma2;
  double variance;
  double quantile_low;
  double quantile_high;
  double rate;
  condint_variant variant;
} condint_interval;

CONDINT_API const char* condint_version(void);
CONDINT_API const char* condint_status_string(condint_status status);
/* Message of the last failed call on this thread; empty if none. */
CONDINT_API const char* condint_last_error(void);
CONDINT_API void condint_string_free(char* s);

/* Series */
CONDINT_API condint_status condint_series_create(const double* values, size_t n, condint_series** out);
CONDINT_API condint_status condint_series_read_csv(const char* path, condint_series** out);
CONDINT_API condint_status condint_series_to_csv(const condint_series* series, char** out);
CONDINT_API size_t condint_series_length(const condint_series* series);
/* Copies min(n, length) values. */
CONDINT_API condint_status condint_series_values(const condint_series* series, double* out, size_t n);
CONDINT_API void condint_series_free(condint_series* series);

CONDINT_API condint_status condint_simulate(const condint_model_spec* spec, size_t length, uint64_t seed,
                                            condint_series** out);

/* Estimation and intervals. y is used by CONDINT_2IP only; CONDINT_SPL uses
 * the default split plan. */
CONDINT_API condint_status condint_estimate_model(const condint_model_spec* spec, const condint_series* series,
                                                  condint_estimate* out);
CONDINT_API condint_status condint_build_interval(const condint_model_spec* spec, condint_variant variant,
                                                  const condint_series* x, const condint_series* y,
                                                  double gamma1, double gamma2, condint_interval* out);

/* Step CDFs and distances */
CONDINT_API condint_status condint_cdf_from_samples(const double* samples, size_t n, condint_cdf** out);
CONDINT_API double condint_cdf_eval(const condint_cdf* cdf, double tau);
CONDINT_API condint_status condint_cdf_inverse(const condint_cdf* cdf, double u, double* out);
CONDINT_API void condint_cdf_free(condint_cdf* cdf);
CONDINT_API condint_status condint_distance(const condint_cdf* f, const condint_cdf* g, condint_metric metric,
                                            double* out);

/* Experiment configuration */
CONDINT_API condint_status condint_config_parse_file(const char* path, condint_config** out);
CONDINT_API condint_status condint_config_parse_text(const char* text, condint_config** out);
CONDINT_API size_t condint_config_count(const condint_config* config);
CONDINT_API condint_status condint_config_name(const condint_config* config, size_t index, char** out);
CONDINT_API condint_status condint_config_seed(const condint_config* config, size_t index, uint64_t* out);
CONDINT_API condint_status condint_config_set_seed(condint_config* config, uint64_t seed);
CONDINT_API condint_status condint_config_echo(const condint_config* config, char** out);
CONDINT_API condint_status condint_config_reference(char** out);
CONDINT_API void condint_config_free(condint_config* config);

/* Reports. kind: "coverage", "merging", "equivalence" or "negligibility".
 * threads = 0 uses CONDINT_THREADS or all cores. */
CONDINT_API condint_status condint_run(const condint_config* config, size_t index, const char* kind,
                                       unsigned threads, condint_report** out);
CONDINT_API condint_status condint_report_simulation(const condint_model_spec* spec, const condint_series* series,
                                                     uint64_t seed, condint_report** out);
CONDINT_API condint_status condint_report_estimate(const condint_model_spec* spec, const condint_series* series,
                                                   condint_report** out);
CONDINT_API condint_status condint_report_interval(const condint_model_spec* spec, condint_variant variant,
                                                   const condint_series* x, const condint_series* y,
                                                   double gamma1, double gamma2, condint_report** out);
CONDINT_API condint_status condint_report_metrics(const condint_cdf* a, const condint_cdf* b,
                                                  condint_report** out);
CONDINT_API condint_status condint_report_json(const condint_report* report, char** out);
CONDINT_API condint_status condint_report_csv(const condint_report* report, char** out);
CONDINT_API size_t condint_report_sample_count(const condint_report* report);
CONDINT_API condint_status condint_report_sample(const condint_report* report, size_t index, char** name,
                                                 char** csv);
CONDINT_API void condint_report_free(condint_report* report);

#ifdef __cplusplus
}
#endif

#endif
