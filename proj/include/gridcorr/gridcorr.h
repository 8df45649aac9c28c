#ifndef GRIDCORR_GRIDCORR_H
#define GRIDCORR_GRIDCORR_H

/* C interface to the gridcorr library.
 *
 * Every fallible call returns a gc_status; on failure gc_last_error() holds a
 * message for the calling thread. Objects are opaque handles released with
 * the matching *_free function (NULL is accepted). Strings returned through
 * char** out-parameters are released with gc_string_free. Matrices and panels
 * exchanged as flat buffers are row-major. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GC_API
#elif defined(GRIDCORR_BUILD)
#define GC_API __attribute__((visibility("default")))
#else
#define GC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gc_status {
  GC_OK = 0,
  GC_ERR_INVALID_ARGUMENT = 1,
  GC_ERR_IO = 2,
  GC_ERR_PARSE = 3,
  GC_ERR_DATA = 4,
  GC_ERR_UNDEFINED = 5,
  GC_ERR_CAPACITY = 6,
  GC_ERR_INTERNAL = 7
} gc_status;

typedef struct gc_panel gc_panel;
typedef struct gc_matrix gc_matrix;
typedef struct gc_rmt_split gc_rmt_split;
typedef struct gc_graph gc_graph;
typedef struct gc_partition gc_partition;
typedef struct gc_tuning gc_tuning;
typedef struct gc_dynamics gc_dynamics;

GC_API const char* gc_version(void);
GC_API const char* gc_last_error(void);
GC_API const char* gc_status_name(gc_status status);
GC_API void gc_string_free(char* s);

/* ---- defaults ---------------------------------------------------------- */

GC_API double gc_default_smoothing_theta(void);
GC_API int gc_default_event_sync_tau(void);
GC_API int gc_default_clusters(void);
GC_API int gc_default_moving_std_window(void);
GC_API int gc_default_window_hours(void);
GC_API int gc_default_string_gram(void);
GC_API double gc_default_sparse_rho(void);
GC_API int gc_default_pmfg_cap(void);
GC_API double gc_default_threshold_quantile(void);

/* max(n, n_codes). */
GC_API gc_status gc_ns_mapping(int n, int n_codes, int* out);

/* Worker count from GRIDCORR_THREADS (1 when unset). */
GC_API gc_status gc_threads_from_env(int* out);

/* ---- panels ------------------------------------------------------------ */

typedef enum gc_layout { GC_LAYOUT_WIDE = 0, GC_LAYOUT_LONG = 1 } gc_layout;

typedef enum gc_component {
  GC_COMPONENT_LMP = 0,
  GC_COMPONENT_MEC = 1,
  GC_COMPONENT_MCC = 2,
  GC_COMPONENT_MLC = 3,
  GC_COMPONENT_DELTA = 4
} gc_component;

typedef struct gc_ingest_options {
  gc_layout layout;
  gc_component component;
  const char* timestamp_column; /* NULL: "timestamp" */
  const char* node_column;      /* long layout, NULL: "node" */
  const char* value_column;     /* long layout, NULL: "value" */
  const char* component_column; /* long layout, NULL: "component" */
  int forward_fill;             /* fill gaps of at most max_fill_hours */
  int max_fill_hours;
  int drop_zero_variance;
  int drop_incomplete;
} gc_ingest_options;

GC_API void gc_ingest_options_init(gc_ingest_options* opts);
GC_API gc_status gc_component_from_name(const char* name, gc_component* out);

/* report_json (optional) receives {dropped_zero_variance, dropped_missing, imputed_count}. */
GC_API gc_status gc_panel_load(const char* path, const gc_ingest_options* opts, gc_panel** out, char** report_json);
GC_API gc_status gc_panel_write(const gc_panel* panel, const char* path);
GC_API gc_status gc_panel_delta(const gc_panel* da, const gc_panel* rt, gc_panel** out);
GC_API gc_status gc_panel_slice(const gc_panel* panel, size_t start, size_t width, gc_panel** out);
GC_API size_t gc_panel_n_nodes(const gc_panel* panel);
GC_API size_t gc_panel_n_times(const gc_panel* panel);
GC_API const char* gc_panel_node_name(const gc_panel* panel, size_t i);
GC_API gc_status gc_panel_values(const gc_panel* panel, double* buffer, size_t length);
/* New panel with the nodes and timestamps of `like` and the given n*T row-major values. */
GC_API gc_status gc_panel_with_values(const gc_panel* like, const double* values, size_t length, gc_component component,
                                      gc_panel** out);
GC_API int gc_panel_equal(const gc_panel* a, const gc_panel* b);
GC_API void gc_panel_free(gc_panel* panel);

/* ---- synthetic data ---------------------------------------------------- */

typedef struct gc_synth_spec {
  int n_blocks;
  int nodes_per_block;
  int64_t T;
  double intra_corr;
  double market_beta;
  double spike_rate;
  double spike_scale;
  int regime_switch_window; /* -1: none */
  int window_hours;
  uint64_t seed;
} gc_synth_spec;

GC_API void gc_synth_spec_init(gc_synth_spec* spec);
/* truth_after (optional) is set only when a regime switch is configured, else NULL. */
GC_API gc_status gc_synth_generate(const gc_synth_spec* spec, gc_panel** panel, gc_partition** truth,
                                   gc_partition** truth_after);
GC_API gc_status gc_synth_spec_write_json(const gc_synth_spec* spec, const char* path);
GC_API gc_status gc_synth_spec_read_json(const char* path, gc_synth_spec* spec);
GC_API gc_status gc_random_panel(size_t n, size_t t, uint64_t seed, gc_panel** out);

/* ---- correlation matrices ---------------------------------------------- */

typedef enum gc_measure {
  GC_MEASURE_PEARSON = 0,
  GC_MEASURE_SMOOTHED_PEARSON = 1,
  GC_MEASURE_EVENT_SYNC = 2,
  GC_MEASURE_EVENT_SYNC_ORIGINAL = 3,
  GC_MEASURE_RMT_FILTERED = 4,
  GC_MEASURE_SPARSE = 5,
  GC_MEASURE_STRING = 6
} gc_measure;

typedef enum gc_event_sync_normalization { GC_ES_DIAGONAL = 0, GC_ES_ROW_SUM = 1 } gc_event_sync_normalization;

typedef struct gc_measure_options {
  double theta;
  int tau;
  gc_event_sync_normalization normalization;
  int isolate_eventless; /* 0: nodes without events are an error */
  double rho;
  double sparse_tol;
  int sparse_max_iter;
  double eps_pd;
  double zero_eps;
  int gram;
} gc_measure_options;

typedef struct gc_sparse_report {
  int iterations;
  int converged;
  double objective;
  long long nnz_offdiag;
} gc_sparse_report;

GC_API void gc_measure_options_init(gc_measure_options* opts);
GC_API gc_status gc_measure_from_name(const char* name, gc_measure* out);
GC_API const char* gc_measure_name(gc_measure m);

GC_API gc_status gc_matrix_compute(const gc_panel* panel, gc_measure measure, const gc_measure_options* opts,
                                   gc_matrix** out);
GC_API gc_status gc_sparse_estimate(const gc_matrix* empirical, const gc_measure_options* opts, gc_matrix** out,
                                    gc_sparse_report* report);
/* names: n strings; values: n*n row-major. */
GC_API gc_status gc_matrix_from_values(size_t n, const double* values, const char* const* names, gc_measure measure,
                                       gc_matrix** out);
GC_API gc_status gc_matrix_read(const char* path, gc_matrix** out);
GC_API gc_status gc_matrix_write_csv(const gc_matrix* m, const char* path);
GC_API gc_status gc_matrix_write_json(const gc_matrix* m, const char* path);
GC_API gc_status gc_matrix_render_pgm(const gc_matrix* m, const char* path);
GC_API size_t gc_matrix_size(const gc_matrix* m);
GC_API gc_measure gc_matrix_measure(const gc_matrix* m);
GC_API const char* gc_matrix_node_name(const gc_matrix* m, size_t i);
GC_API gc_status gc_matrix_values(const gc_matrix* m, double* buffer, size_t length);
/* Numeric parameter recorded with the matrix (e.g. "theta", "tau"). */
GC_API gc_status gc_matrix_param(const gc_matrix* m, const char* key, double* out);
GC_API gc_status gc_window_stats(const gc_matrix* m, double* mean, double* largest_eigenvalue);
GC_API void gc_matrix_free(gc_matrix* m);

/* ---- random-matrix filtering ------------------------------------------- */

typedef struct gc_rmt_info {
  double q;
  double lambda_minus;
  double lambda_plus;
  int has_market;
  double market_eigenvalue;
  int n_group_modes;
} gc_rmt_info;

typedef enum gc_rmt_part { GC_RMT_RANDOM = 0, GC_RMT_GROUP = 1, GC_RMT_MARKET = 2 } gc_rmt_part;

GC_API gc_status gc_mp_bounds(size_t n, size_t t, double* lambda_minus, double* lambda_plus, double* q);
GC_API gc_status gc_mp_density(double lambda, double q, double* out);
GC_API gc_status gc_rmt_split_compute(const gc_matrix* c, size_t t, gc_rmt_split** out);
GC_API gc_status gc_rmt_split_info(const gc_rmt_split* s, gc_rmt_info* info);
GC_API gc_status gc_rmt_split_part(const gc_rmt_split* s, gc_rmt_part part, gc_matrix** out);
GC_API gc_status gc_rmt_split_write_json(const gc_rmt_split* s, const char* path);
GC_API gc_status gc_rmt_split_write_histogram(const gc_rmt_split* s, int bins, const char* path);
GC_API void gc_rmt_split_free(gc_rmt_split* s);

/* ---- filtered graphs --------------------------------------------------- */

typedef enum gc_graph_kind { GC_GRAPH_THRESHOLD = 0, GC_GRAPH_MST = 1, GC_GRAPH_PMFG = 2 } gc_graph_kind;

GC_API gc_status gc_graph_kind_from_name(const char* name, gc_graph_kind* out);
/* quantile is used by THRESHOLD, cap by PMFG (<= 0: default). */
GC_API gc_status gc_graph_build(const gc_matrix* c, gc_graph_kind kind, double quantile, int cap, gc_graph** out);
/* Same edges with weights max(C_ij, 0), as used by Louvain. */
GC_API gc_status gc_graph_correlation_weights(const gc_graph* g, const gc_matrix* c, gc_graph** out);
GC_API size_t gc_graph_n_vertices(const gc_graph* g);
GC_API size_t gc_graph_n_edges(const gc_graph* g);
GC_API gc_status gc_graph_edge(const gc_graph* g, size_t index, int* i, int* j, double* weight);
GC_API gc_status gc_graph_write_csv(const gc_graph* g, const char* path);
GC_API gc_status gc_graph_write_header_json(const gc_graph* g, const char* path);
GC_API void gc_graph_free(gc_graph* g);

/* ---- partitions -------------------------------------------------------- */

typedef enum gc_cluster_method { GC_CLUSTER_SPECTRAL = 0, GC_CLUSTER_MST_LOUVAIN = 1 } gc_cluster_method;
typedef enum gc_modularity_convention { GC_MODULARITY_STANDARD = 0, GC_MODULARITY_PAPER_1_OVER_M = 1 } gc_modularity_convention;

GC_API gc_status gc_cluster_method_from_name(const char* name, gc_cluster_method* out);
GC_API const char* gc_cluster_method_name(gc_cluster_method m);

/* k is used by the spectral method only. */
GC_API gc_status gc_cluster(const gc_matrix* c, gc_cluster_method method, int k, uint64_t seed, gc_partition** out);
/* Louvain on an explicit graph; MST graphs should carry correlation weights (see gc_graph_build). */
GC_API gc_status gc_louvain(const gc_graph* g, uint64_t seed, gc_partition** out);
/* Location proxy from node names, built the same way as `method`. */
GC_API gc_status gc_location_proxy(const char* const* names, size_t n, gc_cluster_method method, int k, int gram,
                                   uint64_t seed, gc_partition** out);
GC_API gc_status gc_partition_from_labels(const int* labels, size_t n, const char* const* names, gc_partition** out);
GC_API gc_status gc_partition_read(const char* path, gc_partition** out);
/* reference (optional) adds a misclassified column computed against it. */
GC_API gc_status gc_partition_write_csv(const gc_partition* p, const gc_partition* reference, const char* path);
GC_API gc_status gc_partition_write_json(const gc_partition* p, const char* path);
GC_API size_t gc_partition_size(const gc_partition* p);
GC_API int gc_partition_k(const gc_partition* p);
GC_API gc_status gc_partition_labels(const gc_partition* p, int* buffer, size_t length);
GC_API gc_status gc_modularity(const gc_graph* g, const gc_partition* p, gc_modularity_convention conv, double* out);
GC_API gc_status gc_adjusted_rand_index(const gc_partition* a, const gc_partition* b, double* out);
GC_API gc_status gc_rand_index(const gc_partition* a, const gc_partition* b, double* out);
GC_API gc_status gc_disparity(const gc_partition* p, double* out);
GC_API void gc_partition_free(gc_partition* p);

/* ---- cluster-count tuning ---------------------------------------------- */

GC_API gc_status gc_tune(const gc_panel* panel, const gc_measure* measures, size_t n_measures, int n_min, int n_max,
                         uint64_t seed, const gc_measure_options* opts, gc_tuning** out);
GC_API size_t gc_tuning_size(const gc_tuning* t);
GC_API gc_status gc_tuning_point(const gc_tuning* t, size_t index, int* n, gc_measure* measure, double* ari,
                                 double* disparity);
GC_API gc_status gc_tuning_write_csv(const gc_tuning* t, const char* path);
GC_API void gc_tuning_free(gc_tuning* t);

/* ---- weekly dynamics --------------------------------------------------- */

typedef struct gc_dynamics_options {
  const gc_measure* measures; /* NULL: pearson */
  size_t n_measures;
  const gc_cluster_method* methods; /* NULL: mst+louvain */
  size_t n_methods;
  int k;
  int window_hours;
  int benchmark; /* -1: last complete window */
  int moving_std_window;
  gc_measure_options measure;
  uint64_t seed;
  int threads; /* <= 0: GRIDCORR_THREADS */
} gc_dynamics_options;

typedef enum gc_track_field {
  GC_TRACK_MEAN_CORR = 0,
  GC_TRACK_LARGEST_EIG = 1,
  GC_TRACK_DISPARITY = 2,
  GC_TRACK_ARI_BENCHMARK = 3,
  GC_TRACK_ARI_LOCATION = 4
} gc_track_field;

GC_API void gc_dynamics_options_init(gc_dynamics_options* opts);
GC_API gc_status gc_dynamics_run(const gc_panel* panel, const gc_dynamics_options* opts, gc_dynamics** out);
GC_API size_t gc_dynamics_n_tracks(const gc_dynamics* d);
GC_API size_t gc_dynamics_n_windows(const gc_dynamics* d);
GC_API int gc_dynamics_benchmark(const gc_dynamics* d);
GC_API gc_status gc_dynamics_track_info(const gc_dynamics* d, size_t track, gc_measure* measure,
                                        gc_cluster_method* method);
GC_API gc_status gc_dynamics_track_values(const gc_dynamics* d, size_t track, gc_track_field field, double* buffer,
                                          size_t length);
GC_API gc_status gc_dynamics_write_track_csv(const gc_dynamics* d, size_t track, const char* path);
/* GC_ERR_UNDEFINED when the track is shorter than the moving-std window. */
GC_API gc_status gc_dynamics_write_moving_std_csv(const gc_dynamics* d, size_t track, const char* path);
GC_API gc_status gc_dynamics_write_summary_json(const gc_dynamics* d, const char* path);
GC_API void gc_dynamics_free(gc_dynamics* d);

/* out receives length - w + 1 values. */
GC_API gc_status gc_moving_std(const double* values, size_t length, int w, double* out);

#ifdef __cplusplus
}
#endif

#endif
