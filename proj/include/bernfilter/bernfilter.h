/*
 * bernfilter C API.
 *
 * Opaque handles own their data; every create/load function that returns a
 * handle through an out-pointer must be matched by the corresponding free function.
 * Functions return a bf_status; on failure bf_last_error() describes the
 * problem for the calling thread until the next failing call.
 *
 * Dense matrices cross the boundary as row-major double buffers (n rows,
 * d columns). Masks are one byte per node, nonzero meaning selected.
 */
#ifndef BERNFILTER_H
#define BERNFILTER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BERNFILTER_BUILDING_LIBRARY)
#    define BF_API __declspec(dllexport)
#  else
#    define BF_API __declspec(dllimport)
#  endif
#else
#  define BF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bf_status {
  BF_OK = 0,
  BF_ERR_INVALID_ARGUMENT = 1,
  BF_ERR_DIMENSION_MISMATCH = 2,
  BF_ERR_OUT_OF_RANGE = 3,
  BF_ERR_NON_FINITE = 4,
  BF_ERR_IO = 5,
  BF_ERR_PARSE = 6,
  BF_ERR_DIVERGED = 7,
  BF_ERR_ORACLE_CAP = 8,
  BF_ERR_UNKNOWN_NAME = 9,
  BF_ERR_ENERGY_NOT_PSD = 10,
  BF_ERR_NULL_POINTER = 11,
  BF_ERR_INTERNAL = 12
} bf_status;

typedef struct bf_graph bf_graph;
typedef struct bf_coeffs bf_coeffs;
typedef struct bf_spectrum bf_spectrum;
typedef struct bf_fit bf_fit;
typedef struct bf_dataset bf_dataset;
typedef struct bf_split bf_split;
typedef struct bf_training bf_training;

BF_API const char* bf_version(void);
/* Message of the last failure on this thread, "" if none. */
BF_API const char* bf_last_error(void);
/* Stable lowercase name such as "dimension_mismatch". */
BF_API const char* bf_status_name(bf_status status);

/* Graphs ------------------------------------------------------------------ */

/* Edges are given as parallel arrays of node ids; either orientation,
 * duplicates and self-loops are accepted and normalized away. */
BF_API bf_status bf_graph_from_edges(const int64_t* src, const int64_t* dst, size_t num_edges,
                                     size_t num_nodes, bf_graph** out);
BF_API bf_status bf_graph_grid(size_t height, size_t width, bf_graph** out);
/* num_nodes == 0 infers max id + 1. */
BF_API bf_status bf_graph_load(const char* path, size_t num_nodes, bf_graph** out);
BF_API bf_status bf_graph_save(const bf_graph* graph, const char* path);
BF_API void bf_graph_free(bf_graph* graph);
BF_API size_t bf_graph_num_nodes(const bf_graph* graph);
BF_API size_t bf_graph_num_edges(const bf_graph* graph);
BF_API bf_status bf_graph_degrees(const bf_graph* graph, size_t* out, size_t len);
/* y = L x with L the symmetric normalized Laplacian. */
BF_API bf_status bf_laplacian_matvec(const bf_graph* graph, const double* x, double* y, size_t n);

/* Bernstein coefficients -------------------------------------------------- */

BF_API bf_status bf_coeffs_create(const double* theta, size_t len, bf_coeffs** out);
/* theta_k = h(2k/K) for a catalog filter name. */
BF_API bf_status bf_coeffs_design(const char* filter_name, int order, bf_coeffs** out);
/* Monomial coefficients w_j of p(t) = sum_j w_j t^j on [0, 1]. */
BF_API bf_status bf_coeffs_from_monomial(const double* w, size_t len, bf_coeffs** out);
BF_API bf_status bf_coeffs_load(const char* path, bf_coeffs** out);
BF_API bf_status bf_coeffs_save(const bf_coeffs* coeffs, const char* path);
BF_API bf_status bf_coeffs_save_csv(const bf_coeffs* coeffs, const char* path);
BF_API void bf_coeffs_free(bf_coeffs* coeffs);
BF_API int bf_coeffs_order(const bf_coeffs* coeffs);
BF_API bf_status bf_coeffs_theta(const bf_coeffs* coeffs, double* out, size_t len);

BF_API bf_status bf_bernstein_basis(int k, int order, double t, double* out);
BF_API bf_status bf_eval_filter(const bf_coeffs* coeffs, double lambda, double* out);
BF_API bf_status bf_named_filter_eval(const char* filter_name, double lambda, double* out);
/* Number of catalog filters, and the i-th name (NULL when out of range). */
BF_API size_t bf_filter_catalog_size(void);
BF_API const char* bf_filter_catalog_name(size_t index);
/* Writes "lambda,value" rows for points uniform lambdas over [0, 2]. */
BF_API bf_status bf_export_curve(const bf_coeffs* coeffs, size_t points, const char* path);
BF_API bf_status bf_export_named_curve(const char* filter_name, size_t points, const char* path);

typedef struct bf_validity_report {
  double min_value;
  double max_value;
  double argmin_lambda;
  double argmax_lambda;
  int nonneg_ok;
  int bounded_ok;
  int theta_nonneg;
  int theta_bounded;
  size_t violation_count;
} bf_validity_report;

BF_API bf_status bf_validate(const bf_coeffs* coeffs, size_t grid_points, bf_validity_report* out);

/* Propagation -------------------------------------------------------------- */

/* out = sum_k theta_k 2^-K C(K,k) (2I - L)^{K-k} L^k X for an n x d block. */
BF_API bf_status bf_apply(const bf_graph* graph, const bf_coeffs* coeffs, const double* x, size_t n, size_t d,
                          double* out);

/* Dense spectral oracle --------------------------------------------------- */

BF_API bf_status bf_spectrum_compute(const bf_graph* graph, bf_spectrum** out);
BF_API void bf_spectrum_free(bf_spectrum* spectrum);
BF_API size_t bf_spectrum_size(const bf_spectrum* spectrum);
BF_API bf_status bf_spectrum_eigenvalues(const bf_spectrum* spectrum, double* out, size_t len);
/* U diag(h(lambda)) U^T x for a catalog filter. */
BF_API bf_status bf_spectrum_filter(const bf_spectrum* spectrum, const char* filter_name, const double* x,
                                    size_t n, double* out);

/* Files and synthetic signals --------------------------------------------- */

/* Reads an n x d CSV; *data must be released with bf_buffer_free. */
BF_API bf_status bf_matrix_load(const char* path, double** data, size_t* rows, size_t* cols);
BF_API bf_status bf_matrix_save(const char* path, const double* data, size_t rows, size_t cols);
BF_API void bf_buffer_free(double* data);
/* Reads a 0/1 mask file; *data must be released with bf_mask_free. */
BF_API bf_status bf_mask_load(const char* path, unsigned char** data, size_t* len);
BF_API void bf_mask_free(unsigned char* data);
BF_API bf_status bf_grid_interior_mask(size_t height, size_t width, unsigned char* out, size_t len);
/* kind: "random", "gradient" or "checker". */
BF_API bf_status bf_synth_grid_signal(size_t height, size_t width, uint64_t seed, const char* kind, double* out,
                                      size_t len);

/* Filter learning ---------------------------------------------------------- */

typedef struct bf_learn_config {
  int order;
  double learning_rate;
  int max_epochs;
  int patience;
  int layers;
} bf_learn_config;

BF_API void bf_learn_config_default(bf_learn_config* cfg);
/* mask may be NULL to count every node. */
BF_API bf_status bf_learn_filter(const bf_graph* graph, const double* x, const double* target,
                                 const unsigned char* mask, size_t n, const bf_learn_config* cfg, bf_fit** out);
BF_API void bf_fit_free(bf_fit* fit);
BF_API bf_status bf_fit_coeffs(const bf_fit* fit, bf_coeffs** out);
BF_API double bf_fit_sse(const bf_fit* fit);
/* NaN when the masked target has zero variance. */
BF_API double bf_fit_r2(const bf_fit* fit);
BF_API int bf_fit_epochs(const bf_fit* fit);
BF_API int bf_fit_best_epoch(const bf_fit* fit);
BF_API bf_status bf_fit_prediction(const bf_fit* fit, double* out, size_t len);
BF_API size_t bf_fit_loss_count(const bf_fit* fit);
BF_API bf_status bf_fit_losses(const bf_fit* fit, double* out, size_t len);
BF_API bf_status bf_score(const double* prediction, const double* target, const unsigned char* mask, size_t n,
                          double* sse, double* r2);

/* Node classification ------------------------------------------------------ */

/* num_classes == 0 infers max label + 1. */
BF_API bf_status bf_dataset_load(const char* dir, int num_classes, bf_dataset** out);
BF_API bf_status bf_dataset_two_cluster(size_t cluster_size, double noise, uint64_t seed, bf_dataset** out);
BF_API bf_status bf_dataset_save(const bf_dataset* data, const char* dir);
BF_API void bf_dataset_free(bf_dataset* data);
BF_API size_t bf_dataset_num_nodes(const bf_dataset* data);
BF_API size_t bf_dataset_num_features(const bf_dataset* data);
BF_API int bf_dataset_num_classes(const bf_dataset* data);

BF_API bf_status bf_split_random(size_t n, uint64_t seed, bf_split** out);
BF_API bf_status bf_split_load(const char* path, bf_split** out);
BF_API bf_status bf_split_save(const bf_split* split, const char* path);
BF_API void bf_split_free(bf_split* split);
/* Node counts in train, val and test. */
BF_API bf_status bf_split_sizes(const bf_split* split, size_t* train, size_t* val, size_t* test);

typedef struct bf_train_config {
  double lr_linear;
  double lr_prop;
  double dropout_linear;
  double dropout_prop;
  double weight_decay;
  int order;
  int hidden;
  int max_epochs;
  int patience;
  uint64_t seed;
} bf_train_config;

BF_API void bf_train_config_default(bf_train_config* cfg);
BF_API bf_status bf_train(const bf_dataset* data, const bf_split* split, const bf_train_config* cfg,
                          bf_training** out);
BF_API void bf_training_free(bf_training* training);
BF_API double bf_training_test_accuracy(const bf_training* training);
BF_API double bf_training_val_accuracy(const bf_training* training);
BF_API int bf_training_best_epoch(const bf_training* training);
BF_API int bf_training_epochs(const bf_training* training);
/* Classes absent from the training split. */
BF_API size_t bf_training_missing_classes(const bf_training* training);
BF_API bf_status bf_training_coeffs(const bf_training* training, bf_coeffs** out);

#ifdef __cplusplus
}
#endif

#endif
