#include "bernfilter/bernfilter.h"

#include "bernfilter/bernstein.hpp"
#include "bernfilter/classify.hpp"
#include "bernfilter/dataset_io.hpp"
#include "bernfilter/error.hpp"
#include "bernfilter/filter_learn.hpp"
#include "bernfilter/graph.hpp"
#include "bernfilter/propagation.hpp"
#include "bernfilter/spectral.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

using namespace bernfilter;

struct bf_graph {
  Graph graph;
};
struct bf_coeffs {
  BernCoeffs coeffs;
};
struct bf_spectrum {
  SpectralDecomposition dec;
};
struct bf_fit {
  FitReport report;
};
struct bf_dataset {
  NodeDataset data;
};
struct bf_split {
  SplitMasks masks;
};
struct bf_training {
  TrainResult result;
};

namespace {

thread_local std::string g_last_error;

bf_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return BF_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return BF_ERR_DIMENSION_MISMATCH;
    case ErrorCode::OutOfRange: return BF_ERR_OUT_OF_RANGE;
    case ErrorCode::NonFinite: return BF_ERR_NON_FINITE;
    case ErrorCode::Io: return BF_ERR_IO;
    case ErrorCode::Parse: return BF_ERR_PARSE;
    case ErrorCode::Diverged: return BF_ERR_DIVERGED;
    case ErrorCode::OracleCap: return BF_ERR_ORACLE_CAP;
    case ErrorCode::UnknownName: return BF_ERR_UNKNOWN_NAME;
    case ErrorCode::EnergyNotPsd: return BF_ERR_ENERGY_NOT_PSD;
  }
  return BF_ERR_INTERNAL;
}

struct NullArgument {};

template <typename... Ptrs>
void require(const Ptrs*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw NullArgument{};
}

template <typename Fn>
bf_status guard(Fn&& fn) noexcept {
  try {
    fn();
    return BF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const NullArgument&) {
    g_last_error = "required pointer argument is null";
    return BF_ERR_NULL_POINTER;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return BF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return BF_ERR_INTERNAL;
  }
}

void check_len(size_t got, size_t want, const char* what) {
  if (got != want) {
    fail(ErrorCode::DimensionMismatch,
         std::string(what) + ": buffer holds " + std::to_string(got) + ", need " + std::to_string(want));
  }
}

Mask to_mask(const unsigned char* mask, size_t n) {
  if (mask == nullptr) return Mask(n, 1);
  return Mask(mask, mask + n);
}

std::vector<double> to_vector(const double* x, size_t n) { return std::vector<double>(x, x + n); }

template <typename T>
T* heap_copy(const T* src, size_t len) {
  auto* out = static_cast<T*>(std::malloc(len == 0 ? 1 : len * sizeof(T)));
  if (out == nullptr) throw std::bad_alloc();
  if (len > 0) std::memcpy(out, src, len * sizeof(T));
  return out;
}

}  // namespace

extern "C" {

BF_API const char* bf_version(void) { return "0.1.0"; }

BF_API const char* bf_last_error(void) { return g_last_error.c_str(); }

BF_API const char* bf_status_name(bf_status status) {
  switch (status) {
    case BF_OK: return "ok";
    case BF_ERR_INVALID_ARGUMENT: return to_string(ErrorCode::InvalidArgument);
    case BF_ERR_DIMENSION_MISMATCH: return to_string(ErrorCode::DimensionMismatch);
    case BF_ERR_OUT_OF_RANGE: return to_string(ErrorCode::OutOfRange);
    case BF_ERR_NON_FINITE: return to_string(ErrorCode::NonFinite);
    case BF_ERR_IO: return to_string(ErrorCode::Io);
    case BF_ERR_PARSE: return to_string(ErrorCode::Parse);
    case BF_ERR_DIVERGED: return to_string(ErrorCode::Diverged);
    case BF_ERR_ORACLE_CAP: return to_string(ErrorCode::OracleCap);
    case BF_ERR_UNKNOWN_NAME: return to_string(ErrorCode::UnknownName);
    case BF_ERR_ENERGY_NOT_PSD: return to_string(ErrorCode::EnergyNotPsd);
    case BF_ERR_NULL_POINTER: return "null_pointer";
    case BF_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

/* Graphs */

BF_API bf_status bf_graph_from_edges(const int64_t* src, const int64_t* dst, size_t num_edges, size_t num_nodes,
                                     bf_graph** out) {
  return guard([&] {
    require(out);
    if (num_edges > 0) require(src, dst);
    std::vector<Edge> edges(num_edges);
    for (size_t i = 0; i < num_edges; ++i) edges[i] = {src[i], dst[i]};
    *out = new bf_graph{build_graph(edges, num_nodes)};
  });
}

BF_API bf_status bf_graph_grid(size_t height, size_t width, bf_graph** out) {
  return guard([&] {
    require(out);
    *out = new bf_graph{grid_graph(height, width)};
  });
}

BF_API bf_status bf_graph_load(const char* path, size_t num_nodes, bf_graph** out) {
  return guard([&] {
    require(path, out);
    std::optional<std::size_t> n;
    if (num_nodes > 0) n = num_nodes;
    *out = new bf_graph{load_graph(path, n)};
  });
}

BF_API bf_status bf_graph_save(const bf_graph* graph, const char* path) {
  return guard([&] {
    require(graph, path);
    write_edge_list(path, graph->graph);
  });
}

BF_API void bf_graph_free(bf_graph* graph) { delete graph; }

BF_API size_t bf_graph_num_nodes(const bf_graph* graph) { return graph ? graph->graph.num_nodes() : 0; }

BF_API size_t bf_graph_num_edges(const bf_graph* graph) { return graph ? graph->graph.num_edges() : 0; }

BF_API bf_status bf_graph_degrees(const bf_graph* graph, size_t* out, size_t len) {
  return guard([&] {
    require(graph, out);
    const auto deg = graph->graph.degrees();
    check_len(len, deg.size(), "degrees");
    std::copy(deg.begin(), deg.end(), out);
  });
}

BF_API bf_status bf_laplacian_matvec(const bf_graph* graph, const double* x, double* y, size_t n) {
  return guard([&] {
    require(graph, x, y);
    const NormalizedOperator op(graph->graph);
    check_len(n, op.size(), "signal");
    const auto out = laplacian_matvec(op, std::span<const double>(x, n));
    std::copy(out.begin(), out.end(), y);
  });
}

/* Coefficients */

BF_API bf_status bf_coeffs_create(const double* theta, size_t len, bf_coeffs** out) {
  return guard([&] {
    require(theta, out);
    *out = new bf_coeffs{BernCoeffs(to_vector(theta, len))};
  });
}

BF_API bf_status bf_coeffs_design(const char* filter_name, int order, bf_coeffs** out) {
  return guard([&] {
    require(filter_name, out);
    *out = new bf_coeffs{design_coeffs(named_filter(filter_name), order)};
  });
}

BF_API bf_status bf_coeffs_from_monomial(const double* w, size_t len, bf_coeffs** out) {
  return guard([&] {
    require(w, out);
    *out = new bf_coeffs{monomial_to_bernstein(std::span<const double>(w, len))};
  });
}

BF_API bf_status bf_coeffs_load(const char* path, bf_coeffs** out) {
  return guard([&] {
    require(path, out);
    *out = new bf_coeffs{read_coeffs(path)};
  });
}

BF_API bf_status bf_coeffs_save(const bf_coeffs* coeffs, const char* path) {
  return guard([&] {
    require(coeffs, path);
    write_coeffs(path, coeffs->coeffs);
  });
}

BF_API bf_status bf_coeffs_save_csv(const bf_coeffs* coeffs, const char* path) {
  return guard([&] {
    require(coeffs, path);
    write_coeffs_csv(path, coeffs->coeffs);
  });
}

BF_API void bf_coeffs_free(bf_coeffs* coeffs) { delete coeffs; }

BF_API int bf_coeffs_order(const bf_coeffs* coeffs) { return coeffs ? coeffs->coeffs.order() : -1; }

BF_API bf_status bf_coeffs_theta(const bf_coeffs* coeffs, double* out, size_t len) {
  return guard([&] {
    require(coeffs, out);
    const auto theta = coeffs->coeffs.theta();
    check_len(len, theta.size(), "theta");
    std::copy(theta.begin(), theta.end(), out);
  });
}

BF_API bf_status bf_bernstein_basis(int k, int order, double t, double* out) {
  return guard([&] {
    require(out);
    *out = bernstein_basis(k, order, t);
  });
}

BF_API bf_status bf_eval_filter(const bf_coeffs* coeffs, double lambda, double* out) {
  return guard([&] {
    require(coeffs, out);
    *out = eval_filter(coeffs->coeffs, lambda);
  });
}

BF_API bf_status bf_named_filter_eval(const char* filter_name, double lambda, double* out) {
  return guard([&] {
    require(filter_name, out);
    *out = named_filter(filter_name)(lambda);
  });
}

BF_API size_t bf_filter_catalog_size(void) { return filter_catalog().size(); }

BF_API const char* bf_filter_catalog_name(size_t index) {
  const auto catalog = filter_catalog();
  // Catalog entries are string literals, so data() is NUL-terminated.
  return index < catalog.size() ? catalog[index].data() : nullptr;
}

BF_API bf_status bf_export_curve(const bf_coeffs* coeffs, size_t points, const char* path) {
  return guard([&] {
    require(coeffs, path);
    write_curve_csv(path, export_curve(coeffs->coeffs, points));
  });
}

BF_API bf_status bf_export_named_curve(const char* filter_name, size_t points, const char* path) {
  return guard([&] {
    require(filter_name, path);
    write_curve_csv(path, sample_curve(named_filter(filter_name), points));
  });
}

BF_API bf_status bf_validate(const bf_coeffs* coeffs, size_t grid_points, bf_validity_report* out) {
  return guard([&] {
    require(coeffs, out);
    const ValidityReport r = validate_filter(coeffs->coeffs, grid_points);
    out->min_value = r.min_value;
    out->max_value = r.max_value;
    out->argmin_lambda = r.argmin_lambda;
    out->argmax_lambda = r.argmax_lambda;
    out->nonneg_ok = r.nonneg_ok;
    out->bounded_ok = r.bounded_ok;
    out->theta_nonneg = r.theta_nonneg;
    out->theta_bounded = r.theta_bounded;
    out->violation_count = r.violations.size();
  });
}

/* Propagation */

BF_API bf_status bf_apply(const bf_graph* graph, const bf_coeffs* coeffs, const double* x, size_t n, size_t d,
                          double* out) {
  return guard([&] {
    require(graph, coeffs, x, out);
    const NormalizedOperator op(graph->graph);
    check_len(n, op.size(), "signal rows");
    if (d == 0) fail(ErrorCode::InvalidArgument, "signal must have at least one column");
    const Matrix in = Eigen::Map<const Matrix>(x, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    Eigen::Map<Matrix>(out, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d)) =
        bernnet_apply_matrix(op, coeffs->coeffs, in);
  });
}

/* Spectral oracle */

BF_API bf_status bf_spectrum_compute(const bf_graph* graph, bf_spectrum** out) {
  return guard([&] {
    require(graph, out);
    const NormalizedOperator op(graph->graph);
    *out = new bf_spectrum{eigendecompose(op)};
  });
}

BF_API void bf_spectrum_free(bf_spectrum* spectrum) { delete spectrum; }

BF_API size_t bf_spectrum_size(const bf_spectrum* spectrum) { return spectrum ? spectrum->dec.size() : 0; }

BF_API bf_status bf_spectrum_eigenvalues(const bf_spectrum* spectrum, double* out, size_t len) {
  return guard([&] {
    require(spectrum, out);
    check_len(len, spectrum->dec.size(), "eigenvalues");
    std::copy(spectrum->dec.eigenvalues.begin(), spectrum->dec.eigenvalues.end(), out);
  });
}

BF_API bf_status bf_spectrum_filter(const bf_spectrum* spectrum, const char* filter_name, const double* x, size_t n,
                                    double* out) {
  return guard([&] {
    require(spectrum, filter_name, x, out);
    const auto y = exact_filter_apply(spectrum->dec, named_filter(filter_name), std::span<const double>(x, n));
    std::copy(y.begin(), y.end(), out);
  });
}

/* Files and synthetic signals */

BF_API bf_status bf_matrix_load(const char* path, double** data, size_t* rows, size_t* cols) {
  return guard([&] {
    require(path, data, rows, cols);
    const Matrix m = read_matrix_csv(path);
    *data = heap_copy(m.data(), static_cast<size_t>(m.size()));
    *rows = static_cast<size_t>(m.rows());
    *cols = static_cast<size_t>(m.cols());
  });
}

BF_API bf_status bf_matrix_save(const char* path, const double* data, size_t rows, size_t cols) {
  return guard([&] {
    require(path, data);
    write_matrix_csv(path, Eigen::Map<const Matrix>(data, static_cast<Eigen::Index>(rows),
                                                    static_cast<Eigen::Index>(cols)));
  });
}

BF_API void bf_buffer_free(double* data) { std::free(data); }

BF_API bf_status bf_mask_load(const char* path, unsigned char** data, size_t* len) {
  return guard([&] {
    require(path, data, len);
    const Mask m = read_mask(path);
    *data = heap_copy(m.data(), m.size());
    *len = m.size();
  });
}

BF_API void bf_mask_free(unsigned char* data) { std::free(data); }

BF_API bf_status bf_grid_interior_mask(size_t height, size_t width, unsigned char* out, size_t len) {
  return guard([&] {
    require(out);
    const Mask m = grid_interior_mask(height, width);
    check_len(len, m.size(), "mask");
    std::copy(m.begin(), m.end(), out);
  });
}

BF_API bf_status bf_synth_grid_signal(size_t height, size_t width, uint64_t seed, const char* kind, double* out,
                                      size_t len) {
  return guard([&] {
    require(kind, out);
    const auto v = synth_grid_signal(height, width, seed, parse_grid_signal_kind(kind));
    check_len(len, v.size(), "signal");
    std::copy(v.begin(), v.end(), out);
  });
}

/* Filter learning */

BF_API void bf_learn_config_default(bf_learn_config* cfg) {
  if (cfg == nullptr) return;
  const LearnConfig d;
  cfg->order = d.order;
  cfg->learning_rate = d.learning_rate;
  cfg->max_epochs = d.max_epochs;
  cfg->patience = d.patience;
  cfg->layers = d.layers;
}

BF_API bf_status bf_learn_filter(const bf_graph* graph, const double* x, const double* target,
                                 const unsigned char* mask, size_t n, const bf_learn_config* cfg, bf_fit** out) {
  return guard([&] {
    require(graph, x, target, cfg, out);
    check_len(n, graph->graph.num_nodes(), "signal");
    const RegressionTask task{graph->graph, to_vector(x, n), to_vector(target, n), to_mask(mask, n)};
    LearnConfig lc;
    lc.order = cfg->order;
    lc.learning_rate = cfg->learning_rate;
    lc.max_epochs = cfg->max_epochs;
    lc.patience = cfg->patience;
    lc.layers = cfg->layers;
    *out = new bf_fit{learn_filter(task, lc)};
  });
}

BF_API void bf_fit_free(bf_fit* fit) { delete fit; }

BF_API bf_status bf_fit_coeffs(const bf_fit* fit, bf_coeffs** out) {
  return guard([&] {
    require(fit, out);
    *out = new bf_coeffs{fit->report.coeffs};
  });
}

BF_API double bf_fit_sse(const bf_fit* fit) {
  return fit ? fit->report.score.sse : std::numeric_limits<double>::quiet_NaN();
}

BF_API double bf_fit_r2(const bf_fit* fit) {
  return fit ? fit->report.score.r2 : std::numeric_limits<double>::quiet_NaN();
}

BF_API int bf_fit_epochs(const bf_fit* fit) { return fit ? fit->report.epochs_run : 0; }

BF_API int bf_fit_best_epoch(const bf_fit* fit) { return fit ? fit->report.best_epoch : 0; }

BF_API bf_status bf_fit_prediction(const bf_fit* fit, double* out, size_t len) {
  return guard([&] {
    require(fit, out);
    check_len(len, fit->report.prediction.size(), "prediction");
    std::copy(fit->report.prediction.begin(), fit->report.prediction.end(), out);
  });
}

BF_API size_t bf_fit_loss_count(const bf_fit* fit) { return fit ? fit->report.loss_history.size() : 0; }

BF_API bf_status bf_fit_losses(const bf_fit* fit, double* out, size_t len) {
  return guard([&] {
    require(fit, out);
    check_len(len, fit->report.loss_history.size(), "losses");
    std::copy(fit->report.loss_history.begin(), fit->report.loss_history.end(), out);
  });
}

BF_API bf_status bf_score(const double* prediction, const double* target, const unsigned char* mask, size_t n,
                          double* sse, double* r2) {
  return guard([&] {
    require(prediction, target, sse, r2);
    const FitScore s =
        sse_and_r2(std::span<const double>(prediction, n), std::span<const double>(target, n), to_mask(mask, n));
    *sse = s.sse;
    *r2 = s.r2;
  });
}

/* Node classification */

BF_API bf_status bf_dataset_load(const char* dir, int num_classes, bf_dataset** out) {
  return guard([&] {
    require(dir, out);
    std::optional<int> c;
    if (num_classes > 0) c = num_classes;
    *out = new bf_dataset{load_dataset(dir, c)};
  });
}

BF_API bf_status bf_dataset_two_cluster(size_t cluster_size, double noise, uint64_t seed, bf_dataset** out) {
  return guard([&] {
    require(out);
    *out = new bf_dataset{two_cluster_dataset(cluster_size, noise, seed)};
  });
}

BF_API bf_status bf_dataset_save(const bf_dataset* data, const char* dir) {
  return guard([&] {
    require(data, dir);
    save_dataset(dir, data->data);
  });
}

BF_API void bf_dataset_free(bf_dataset* data) { delete data; }

BF_API size_t bf_dataset_num_nodes(const bf_dataset* data) { return data ? data->data.graph.num_nodes() : 0; }

BF_API size_t bf_dataset_num_features(const bf_dataset* data) {
  return data ? static_cast<size_t>(data->data.features.cols()) : 0;
}

BF_API int bf_dataset_num_classes(const bf_dataset* data) { return data ? data->data.num_classes : 0; }

BF_API bf_status bf_split_random(size_t n, uint64_t seed, bf_split** out) {
  return guard([&] {
    require(out);
    *out = new bf_split{make_splits(n, seed)};
  });
}

BF_API bf_status bf_split_load(const char* path, bf_split** out) {
  return guard([&] {
    require(path, out);
    *out = new bf_split{read_split(path)};
  });
}

BF_API bf_status bf_split_save(const bf_split* split, const char* path) {
  return guard([&] {
    require(split, path);
    write_split(path, split->masks);
  });
}

BF_API void bf_split_free(bf_split* split) { delete split; }

BF_API bf_status bf_split_sizes(const bf_split* split, size_t* train, size_t* val, size_t* test) {
  return guard([&] {
    require(split, train, val, test);
    auto count = [](const Mask& m) { return static_cast<size_t>(std::count(m.begin(), m.end(), std::uint8_t{1})); };
    *train = count(split->masks.train);
    *val = count(split->masks.val);
    *test = count(split->masks.test);
  });
}

BF_API void bf_train_config_default(bf_train_config* cfg) {
  if (cfg == nullptr) return;
  const TrainConfig d;
  cfg->lr_linear = d.lr_linear;
  cfg->lr_prop = d.lr_prop;
  cfg->dropout_linear = d.dropout_linear;
  cfg->dropout_prop = d.dropout_prop;
  cfg->weight_decay = d.weight_decay;
  cfg->order = d.order;
  cfg->hidden = d.hidden;
  cfg->max_epochs = d.max_epochs;
  cfg->patience = d.patience;
  cfg->seed = d.seed;
}

BF_API bf_status bf_train(const bf_dataset* data, const bf_split* split, const bf_train_config* cfg,
                          bf_training** out) {
  return guard([&] {
    require(data, split, cfg, out);
    TrainConfig tc;
    tc.lr_linear = cfg->lr_linear;
    tc.lr_prop = cfg->lr_prop;
    tc.dropout_linear = cfg->dropout_linear;
    tc.dropout_prop = cfg->dropout_prop;
    tc.weight_decay = cfg->weight_decay;
    tc.order = cfg->order;
    tc.hidden = cfg->hidden;
    tc.max_epochs = cfg->max_epochs;
    tc.patience = cfg->patience;
    tc.seed = cfg->seed;
    *out = new bf_training{train(data->data, split->masks, tc)};
  });
}

BF_API void bf_training_free(bf_training* training) { delete training; }

BF_API double bf_training_test_accuracy(const bf_training* training) {
  return training ? training->result.test_accuracy : std::numeric_limits<double>::quiet_NaN();
}

BF_API double bf_training_val_accuracy(const bf_training* training) {
  return training ? training->result.val_accuracy : std::numeric_limits<double>::quiet_NaN();
}

BF_API int bf_training_best_epoch(const bf_training* training) { return training ? training->result.best_epoch : 0; }

BF_API int bf_training_epochs(const bf_training* training) { return training ? training->result.epochs_run : 0; }

BF_API size_t bf_training_missing_classes(const bf_training* training) {
  return training ? training->result.missing_train_classes.size() : 0;
}

BF_API bf_status bf_training_coeffs(const bf_training* training, bf_coeffs** out) {
  return guard([&] {
    require(training, out);
    *out = new bf_coeffs{BernCoeffs(training->result.params.theta)};
  });
}

}  // extern "C"
