/* C interface to the ffdd library. All handles are opaque; every function
 * returning ffdd_status leaves a message in ffdd_last_error() on failure. */
#ifndef FFDD_H
#define FFDD_H

#include <stddef.h>
#include <stdint.h>

#if defined(FFDD_BUILDING_LIBRARY)
#define FFDD_API __attribute__((visibility("default")))
#else
#define FFDD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ffdd_status {
  FFDD_OK = 0,
  FFDD_ERR_INVALID_ARGUMENT = 1,
  FFDD_ERR_PARSE = 2,
  FFDD_ERR_VERSION_MISMATCH = 3,
  FFDD_ERR_COUNT_MISMATCH = 4,
  FFDD_ERR_VALIDATION = 5,
  FFDD_ERR_IO = 6,
  FFDD_ERR_UNKNOWN_CHANNEL = 7,
  FFDD_ERR_CHANNEL_MISMATCH = 8,
  FFDD_ERR_LENGTH_MISMATCH = 9,
  FFDD_ERR_OUT_OF_RANGE = 10,
  FFDD_ERR_DEGENERATE_FIBER = 11,
  FFDD_ERR_RANK_DEFICIENT = 12,
  FFDD_ERR_EMPTY_CROSS_SECTION = 13,
  FFDD_ERR_STALLED_DESCENT = 14,
  FFDD_ERR_INTERNAL = 99
} ffdd_status;

typedef enum ffdd_format { FFDD_FORMAT_CSV = 0, FFDD_FORMAT_JSON = 1 } ffdd_format;

typedef enum ffdd_radius_policy {
  FFDD_RADIUS_AUTO = 0,
  FFDD_RADIUS_UNBOUNDED = 1,
  FFDD_RADIUS_FIXED = 2
} ffdd_radius_policy;

typedef enum ffdd_empty_policy {
  FFDD_EMPTY_INTERPOLATE = 0,
  FFDD_EMPTY_FAIL = 1
} ffdd_empty_policy;

typedef enum ffdd_ttest { FFDD_TTEST_POOLED = 0, FFDD_TTEST_WELCH = 1 } ffdd_ttest;

typedef struct ffdd_config {
  int degree;                       /* cosine series degree K */
  int samples;                      /* profile samples M */
  ffdd_radius_policy radius_policy;
  double radius;                    /* mm, FFDD_RADIUS_FIXED only */
  double tol;                       /* plane search tolerance, rad */
  int max_iter;
  ffdd_empty_policy empty_policy;
  double lambda;                    /* <= 0 selects lambda_fraction */
  double lambda_fraction;
  double epsilon;                   /* backtracking step, grid units */
  double fdr_q;
  ffdd_ttest ttest;
} ffdd_config;

typedef struct ffdd_bundle ffdd_bundle;
typedef struct ffdd_profile ffdd_profile;
typedef struct ffdd_comparison ffdd_comparison;
typedef struct ffdd_atlas ffdd_atlas;
typedef struct ffdd_stats ffdd_stats;
typedef struct ffdd_anomaly ffdd_anomaly;

FFDD_API const char* ffdd_version(void);
FFDD_API const char* ffdd_status_name(ffdd_status status);
/* Nonzero for failures of the numerics rather than of the input. */
FFDD_API int ffdd_status_is_numerical(ffdd_status status);
/* Message of the last failure on the calling thread. */
FFDD_API const char* ffdd_last_error(void);
FFDD_API void ffdd_string_free(char* text);

/* Every function taking a config accepts NULL for the defaults. Output
 * handles are set to NULL when a call fails. */
FFDD_API void ffdd_config_default(ffdd_config* config);
/* JSON echo of the config; release with ffdd_string_free. */
FFDD_API ffdd_status ffdd_config_to_json(const ffdd_config* config, char** out);

/* Bundles */
FFDD_API ffdd_status ffdd_bundle_load(const char* path, ffdd_bundle** out);
FFDD_API ffdd_status ffdd_bundle_save(const ffdd_bundle* bundle, const char* path);
/* Generates from a JSON spec. seed < 0 keeps the spec's seed. oracle_json
 * may be NULL; otherwise receives the ground truth at `oracle_samples`. */
FFDD_API ffdd_status ffdd_bundle_generate(const char* spec_json, int64_t seed,
                                          size_t oracle_samples, ffdd_bundle** out,
                                          char** oracle_json);
FFDD_API const char* ffdd_bundle_name(const ffdd_bundle* bundle);
FFDD_API size_t ffdd_bundle_fiber_count(const ffdd_bundle* bundle);
FFDD_API void ffdd_bundle_free(ffdd_bundle* bundle);

/* Tract profiles */
FFDD_API ffdd_status ffdd_profile_compute(const ffdd_bundle* bundle, const char* channel,
                                          const ffdd_config* config, ffdd_profile** out);
FFDD_API size_t ffdd_profile_size(const ffdd_profile* profile);
FFDD_API size_t ffdd_profile_filled_count(const ffdd_profile* profile);
FFDD_API size_t ffdd_profile_unconverged_count(const ffdd_profile* profile);
FFDD_API double ffdd_profile_arc_length(const ffdd_profile* profile);
/* Any output pointer may be NULL; each non-NULL one holds n values. */
FFDD_API ffdd_status ffdd_profile_arrays(const ffdd_profile* profile, double* arc_fraction,
                                         double* magnitude, double* direction_xyz, size_t n);
FFDD_API ffdd_status ffdd_profile_export(const ffdd_profile* profile, const char* path,
                                         ffdd_format format, const char* metadata_json);
FFDD_API void ffdd_profile_free(ffdd_profile* profile);

/* Pairwise comparison */
FFDD_API ffdd_status ffdd_compare(const ffdd_profile* a, const ffdd_profile* b,
                                  const ffdd_config* config, ffdd_comparison** out);
FFDD_API size_t ffdd_comparison_size(const ffdd_comparison* comparison);
FFDD_API double ffdd_comparison_global(const ffdd_comparison* comparison);
FFDD_API double ffdd_comparison_lambda(const ffdd_comparison* comparison);
FFDD_API ffdd_status ffdd_comparison_arrays(const ffdd_comparison* comparison, double* s1,
                                            double* s2, double* magnitude_a,
                                            double* magnitude_b, double* d, size_t n);
FFDD_API ffdd_status ffdd_comparison_export(const ffdd_comparison* comparison,
                                            const char* path, ffdd_format format,
                                            const char* metadata_json);
FFDD_API void ffdd_comparison_free(ffdd_comparison* comparison);

/* Atlases */
FFDD_API ffdd_status ffdd_atlas_build(const ffdd_profile* const* cohort, size_t count,
                                      const ffdd_config* config, ffdd_atlas** out);
FFDD_API ffdd_status ffdd_atlas_import(const char* path, ffdd_format format,
                                       ffdd_atlas** out);
FFDD_API size_t ffdd_atlas_size(const ffdd_atlas* atlas);
FFDD_API size_t ffdd_atlas_cohort_size(const ffdd_atlas* atlas);
FFDD_API const char* ffdd_atlas_channel(const ffdd_atlas* atlas);
FFDD_API ffdd_status ffdd_atlas_arrays(const ffdd_atlas* atlas, double* arc_fraction,
                                       double* mean, double* std_dev, size_t n);
FFDD_API ffdd_status ffdd_atlas_export(const ffdd_atlas* atlas, const char* path,
                                       ffdd_format format, const char* metadata_json);
FFDD_API void ffdd_atlas_free(ffdd_atlas* atlas);

/* Group statistics: both groups are aligned to the pooled reference. */
FFDD_API ffdd_status ffdd_groupstats(const ffdd_profile* const* group_a, size_t count_a,
                                     const ffdd_profile* const* group_b, size_t count_b,
                                     const ffdd_config* config, ffdd_stats** out);
FFDD_API size_t ffdd_stats_size(const ffdd_stats* stats);
FFDD_API ffdd_status ffdd_stats_arrays(const ffdd_stats* stats, double* arc_fraction,
                                       double* t, double* p, double* q, int* significant,
                                       size_t n);
FFDD_API ffdd_status ffdd_stats_export(const ffdd_stats* stats, const char* path,
                                       ffdd_format format, const char* metadata_json);
FFDD_API void ffdd_stats_free(ffdd_stats* stats);

/* Anomaly maps: the subject is aligned to the atlas reference first. */
FFDD_API ffdd_status ffdd_zscore(const ffdd_profile* subject, const ffdd_atlas* atlas,
                                 const ffdd_config* config, ffdd_anomaly** out);
FFDD_API size_t ffdd_anomaly_size(const ffdd_anomaly* anomaly);
FFDD_API ffdd_status ffdd_anomaly_arrays(const ffdd_anomaly* anomaly, double* arc_fraction,
                                         double* z, int* defined, size_t n);
FFDD_API ffdd_status ffdd_anomaly_export(const ffdd_anomaly* anomaly, const char* path,
                                         ffdd_format format, const char* metadata_json);
FFDD_API void ffdd_anomaly_free(ffdd_anomaly* anomaly);

#ifdef __cplusplus
}
#endif

#endif /* FFDD_H */
