// bernfilter command-line tool. Everything goes through the C API in
// bernfilter.h; this file only parses flags, moves buffers and prints.
//
// Exit codes: 0 success, 1 validate found an invalid filter, 2 usage error,
// 3 library or I/O failure. Failures print one line to stderr:
//   error: <status_name>: <message>

#include "bernfilter/bernfilter.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

struct LibraryFailure {
  bf_status status;
  std::string message;
};

struct UsageFailure {
  std::string message;
};

void check(bf_status s) {
  if (s != BF_OK) throw LibraryFailure{s, bf_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using GraphPtr = std::unique_ptr<bf_graph, Deleter<bf_graph, bf_graph_free>>;
using CoeffsPtr = std::unique_ptr<bf_coeffs, Deleter<bf_coeffs, bf_coeffs_free>>;
using SpectrumPtr = std::unique_ptr<bf_spectrum, Deleter<bf_spectrum, bf_spectrum_free>>;
using FitPtr = std::unique_ptr<bf_fit, Deleter<bf_fit, bf_fit_free>>;
using DatasetPtr = std::unique_ptr<bf_dataset, Deleter<bf_dataset, bf_dataset_free>>;
using SplitPtr = std::unique_ptr<bf_split, Deleter<bf_split, bf_split_free>>;
using TrainingPtr = std::unique_ptr<bf_training, Deleter<bf_training, bf_training_free>>;

struct DenseBlock {
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

DenseBlock load_matrix(const std::string& path) {
  double* raw = nullptr;
  DenseBlock b;
  check(bf_matrix_load(path.c_str(), &raw, &b.rows, &b.cols));
  b.data.assign(raw, raw + b.rows * b.cols);
  bf_buffer_free(raw);
  return b;
}

std::vector<double> load_vector(const std::string& path, std::size_t n, const char* what) {
  DenseBlock b = load_matrix(path);
  if (b.cols != 1 || b.rows != n) {
    throw LibraryFailure{BF_ERR_DIMENSION_MISMATCH, std::string(what) + " '" + path + "' is " +
                                                        std::to_string(b.rows) + "x" + std::to_string(b.cols) +
                                                        ", expected " + std::to_string(n) + "x1"};
  }
  return std::move(b.data);
}

std::vector<unsigned char> load_mask(const std::string& path, std::size_t n) {
  unsigned char* raw = nullptr;
  std::size_t len = 0;
  check(bf_mask_load(path.c_str(), &raw, &len));
  std::vector<unsigned char> mask(raw, raw + len);
  bf_mask_free(raw);
  if (len != n) {
    throw LibraryFailure{BF_ERR_DIMENSION_MISMATCH, "mask '" + path + "' has " + std::to_string(len) +
                                                        " entries, graph has " + std::to_string(n) + " nodes"};
  }
  return mask;
}

GraphPtr load_graph(const std::string& path, std::size_t nodes) {
  bf_graph* g = nullptr;
  check(bf_graph_load(path.c_str(), nodes, &g));
  return GraphPtr(g);
}

CoeffsPtr load_coeffs(const std::string& path) {
  bf_coeffs* c = nullptr;
  check(bf_coeffs_load(path.c_str(), &c));
  return CoeffsPtr(c);
}

std::vector<double> theta_of(const bf_coeffs* c) {
  std::vector<double> theta(static_cast<std::size_t>(bf_coeffs_order(c)) + 1);
  check(bf_coeffs_theta(c, theta.data(), theta.size()));
  return theta;
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& spec) {
  const auto x = spec.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument("");
    std::size_t used = 0;
    const auto h = std::stoul(spec.substr(0, x), &used);
    if (used != x) throw std::invalid_argument("");
    const std::string rest = spec.substr(x + 1);
    const auto w = std::stoul(rest, &used);
    if (used != rest.size() || h == 0 || w == 0) throw std::invalid_argument("");
    return {h, w};
  } catch (const std::exception&) {
    throw UsageFailure{"--grid expects HxW with positive integers, got '" + spec + "'"};
  }
}

void emit(bool as_json, const json& record, const std::string& human) {
  if (as_json) {
    std::cout << record.dump() << '\n';
  } else {
    std::cout << human;
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const char* kFormats =
    "File formats:\n"
    "  graph    edge list, one 'u v' pair of 0-based node ids per line, '#' comments\n"
    "  coeffs   line 1: order K; line 2: K+1 space-separated coefficients\n"
    "  signal   CSV, one row per node (one column, or d columns for a feature block)\n"
    "  mask     one 0/1 per line, 1 = node counts toward the loss\n"
    "  curve    CSV with header 'lambda,value'\n"
    "  dataset  directory with edges.txt, features.csv (n x d), labels.txt (one class id per line),\n"
    "           optional splits/<seed>.txt with one train/val/test/none token per node\n";

// ---------------------------------------------------------------------------

struct DesignArgs {
  std::string filter;
  int order = 10;
  std::string out;
  std::string curve_out;
  std::size_t points = 1000;
};

int run_design(const DesignArgs& a, bool as_json) {
  bf_coeffs* raw = nullptr;
  check(bf_coeffs_design(a.filter.c_str(), a.order, &raw));
  const CoeffsPtr c(raw);
  check(bf_coeffs_save(c.get(), a.out.c_str()));
  if (!a.curve_out.empty()) check(bf_export_curve(c.get(), a.points, a.curve_out.c_str()));
  const auto theta = theta_of(c.get());
  std::string human = "designed " + a.filter + " with K=" + std::to_string(a.order) + " -> " + a.out + "\n";
  emit(as_json, {{"command", "design"}, {"filter", a.filter}, {"order", a.order}, {"theta", theta}, {"out", a.out}},
       human);
  return 0;
}

struct ApplyArgs {
  std::string graph;
  std::size_t nodes = 0;
  std::string coeffs;
  std::string signal;
  std::string out;
};

int run_apply(const ApplyArgs& a, bool as_json) {
  const GraphPtr g = load_graph(a.graph, a.nodes);
  const CoeffsPtr c = load_coeffs(a.coeffs);
  const DenseBlock x = load_matrix(a.signal);
  std::vector<double> y(x.data.size());
  check(bf_apply(g.get(), c.get(), x.data.data(), x.rows, x.cols, y.data()));
  check(bf_matrix_save(a.out.c_str(), y.data(), x.rows, x.cols));
  const std::string human = "filtered " + std::to_string(x.rows) + "x" + std::to_string(x.cols) + " signal with K=" +
                            std::to_string(bf_coeffs_order(c.get())) + " -> " + a.out + "\n";
  emit(as_json,
       {{"command", "apply"}, {"rows", x.rows}, {"cols", x.cols}, {"order", bf_coeffs_order(c.get())}, {"out", a.out}},
       human);
  return 0;
}

struct ValidateArgs {
  std::string coeffs;
  std::size_t grid = 1000;
};

int run_validate(const ValidateArgs& a, bool as_json) {
  const CoeffsPtr c = load_coeffs(a.coeffs);
  bf_validity_report r{};
  check(bf_validate(c.get(), a.grid, &r));
  const bool valid = r.nonneg_ok && r.bounded_ok;
  auto yes = [](int b) { return b ? "true" : "false"; };
  std::string human;
  human += "min_value=" + fmt(r.min_value) + " at lambda=" + fmt(r.argmin_lambda) + "\n";
  human += "max_value=" + fmt(r.max_value) + " at lambda=" + fmt(r.argmax_lambda) + "\n";
  human += std::string("nonneg_ok=") + yes(r.nonneg_ok) + " bounded_ok=" + yes(r.bounded_ok) + "\n";
  human += std::string("theta_nonneg=") + yes(r.theta_nonneg) + " theta_bounded=" + yes(r.theta_bounded) + "\n";
  human += "violations=" + std::to_string(r.violation_count) + "\n";
  human += valid ? "valid\n" : "invalid\n";
  emit(as_json,
       {{"command", "validate"},
        {"min_value", r.min_value},
        {"max_value", r.max_value},
        {"argmin_lambda", r.argmin_lambda},
        {"argmax_lambda", r.argmax_lambda},
        {"nonneg_ok", r.nonneg_ok != 0},
        {"bounded_ok", r.bounded_ok != 0},
        {"theta_nonneg", r.theta_nonneg != 0},
        {"theta_bounded", r.theta_bounded != 0},
        {"violations", r.violation_count},
        {"valid", valid}},
       human);
  return valid ? 0 : 1;
}

struct SpectrumArgs {
  std::string graph;
  std::size_t nodes = 0;
  std::string out;
};

int run_spectrum(const SpectrumArgs& a, bool as_json) {
  const GraphPtr g = load_graph(a.graph, a.nodes);
  bf_spectrum* raw = nullptr;
  check(bf_spectrum_compute(g.get(), &raw));
  const SpectrumPtr s(raw);
  std::vector<double> values(bf_spectrum_size(s.get()));
  check(bf_spectrum_eigenvalues(s.get(), values.data(), values.size()));
  if (!a.out.empty()) {
    check(bf_matrix_save(a.out.c_str(), values.data(), values.size(), 1));
    emit(as_json, {{"command", "spectrum"}, {"nodes", values.size()}, {"out", a.out}},
         std::to_string(values.size()) + " eigenvalues -> " + a.out + "\n");
  } else if (as_json) {
    emit(true, {{"command", "spectrum"}, {"nodes", values.size()}, {"eigenvalues", values}}, "");
  } else {
    for (double v : values) std::cout << fmt(v) << '\n';
  }
  return 0;
}

struct LearnArgs {
  std::string graph;
  std::size_t nodes = 0;
  std::string grid;
  std::string signal;
  std::string signal_kind = "random";
  std::uint64_t seed = kDefaultSeed;
  std::string target;
  std::string named_filter;
  std::string mask;
  bool interior = false;
  int order = 10;
  int epochs = 2000;
  int patience = 100;
  double lr = 0.01;
  int layers = 1;
  std::string out;
  std::string curve_out;
  std::string prediction_out;
};

int run_learn(const LearnArgs& a, bool as_json) {
  GraphPtr g;
  std::size_t height = 0;
  std::size_t width = 0;
  if (!a.grid.empty()) {
    std::tie(height, width) = parse_grid(a.grid);
    bf_graph* raw = nullptr;
    check(bf_graph_grid(height, width, &raw));
    g.reset(raw);
  } else {
    g = load_graph(a.graph, a.nodes);
  }
  const std::size_t n = bf_graph_num_nodes(g.get());

  std::vector<double> x;
  if (!a.signal.empty()) {
    x = load_vector(a.signal, n, "signal");
  } else if (height > 0) {
    x.resize(n);
    check(bf_synth_grid_signal(height, width, a.seed, a.signal_kind.c_str(), x.data(), n));
  } else {
    throw UsageFailure{"learn-filter needs --signal unless --grid synthesizes one"};
  }

  std::vector<double> z(n);
  if (!a.target.empty()) {
    z = load_vector(a.target, n, "target");
  } else {
    bf_spectrum* raw = nullptr;
    check(bf_spectrum_compute(g.get(), &raw));
    const SpectrumPtr s(raw);
    check(bf_spectrum_filter(s.get(), a.named_filter.c_str(), x.data(), n, z.data()));
  }

  std::vector<unsigned char> mask(n, 1);
  if (!a.mask.empty()) {
    mask = load_mask(a.mask, n);
  } else if (a.interior) {
    if (height == 0) throw UsageFailure{"--interior needs --grid"};
    check(bf_grid_interior_mask(height, width, mask.data(), n));
  }

  bf_learn_config cfg;
  bf_learn_config_default(&cfg);
  cfg.order = a.order;
  cfg.learning_rate = a.lr;
  cfg.max_epochs = a.epochs;
  cfg.patience = a.patience;
  cfg.layers = a.layers;
  bf_fit* raw_fit = nullptr;
  check(bf_learn_filter(g.get(), x.data(), z.data(), mask.data(), n, &cfg, &raw_fit));
  const FitPtr fit(raw_fit);

  bf_coeffs* raw_c = nullptr;
  check(bf_fit_coeffs(fit.get(), &raw_c));
  const CoeffsPtr c(raw_c);
  if (!a.out.empty()) check(bf_coeffs_save(c.get(), a.out.c_str()));
  if (!a.curve_out.empty()) check(bf_export_curve(c.get(), 1000, a.curve_out.c_str()));
  if (!a.prediction_out.empty()) {
    std::vector<double> pred(n);
    check(bf_fit_prediction(fit.get(), pred.data(), n));
    check(bf_matrix_save(a.prediction_out.c_str(), pred.data(), n, 1));
  }

  const double sse = bf_fit_sse(fit.get());
  const double r2 = bf_fit_r2(fit.get());
  const auto theta = theta_of(c.get());
  std::string human = "sse=" + fmt(sse) + " r2=" + (std::isnan(r2) ? std::string("undefined") : fmt(r2)) +
                      " epochs=" + std::to_string(bf_fit_epochs(fit.get())) +
                      " best_epoch=" + std::to_string(bf_fit_best_epoch(fit.get())) + "\ntheta=";
  for (std::size_t k = 0; k < theta.size(); ++k) human += (k ? " " : "") + fmt(theta[k]);
  human += "\n";
  json record{{"command", "learn-filter"},
              {"nodes", n},
              {"order", a.order},
              {"layers", a.layers},
              {"sse", sse},
              {"r2", std::isnan(r2) ? json(nullptr) : json(r2)},
              {"epochs", bf_fit_epochs(fit.get())},
              {"best_epoch", bf_fit_best_epoch(fit.get())},
              {"theta", theta}};
  emit(as_json, record, human);
  return 0;
}

struct TrainArgs {
  std::string data;
  int classes = 0;
  std::size_t two_cluster = 0;
  double noise = 0.3;
  bf_train_config cfg{};
  int splits = 10;
  std::uint64_t seed = kDefaultSeed;
  std::string curve_out;
  std::string coeffs_out;
  std::string save_splits;
};

int run_train(TrainArgs a, bool as_json) {
  bf_dataset* raw = nullptr;
  if (!a.data.empty()) {
    check(bf_dataset_load(a.data.c_str(), a.classes, &raw));
  } else if (a.two_cluster > 0) {
    check(bf_dataset_two_cluster(a.two_cluster, a.noise, a.seed, &raw));
  } else {
    throw UsageFailure{"train needs --data DIR or --two-cluster SIZE"};
  }
  const DatasetPtr data(raw);
  const std::size_t n = bf_dataset_num_nodes(data.get());
  if (!a.save_splits.empty()) fs::create_directories(a.save_splits);

  std::vector<double> accs;
  json per_split = json::array();
  std::string human;
  CoeffsPtr first_coeffs;
  for (int s = 0; s < a.splits; ++s) {
    const std::uint64_t split_seed = a.seed + static_cast<std::uint64_t>(s);
    bf_split* raw_split = nullptr;
    const fs::path stored = fs::path(a.data.empty() ? "" : a.data) / "splits" / (std::to_string(split_seed) + ".txt");
    if (!a.data.empty() && fs::exists(stored)) {
      check(bf_split_load(stored.string().c_str(), &raw_split));
    } else {
      check(bf_split_random(n, split_seed, &raw_split));
    }
    const SplitPtr split(raw_split);
    if (!a.save_splits.empty()) {
      const std::string path = (fs::path(a.save_splits) / (std::to_string(split_seed) + ".txt")).string();
      check(bf_split_save(split.get(), path.c_str()));
    }
    bf_train_config cfg = a.cfg;
    cfg.seed = split_seed;
    bf_training* raw_t = nullptr;
    check(bf_train(data.get(), split.get(), &cfg, &raw_t));
    const TrainingPtr t(raw_t);
    const double acc = bf_training_test_accuracy(t.get());
    accs.push_back(acc);
    bf_coeffs* raw_c = nullptr;
    check(bf_training_coeffs(t.get(), &raw_c));
    CoeffsPtr c(raw_c);
    per_split.push_back({{"seed", split_seed},
                         {"test_accuracy", acc},
                         {"val_accuracy", bf_training_val_accuracy(t.get())},
                         {"best_epoch", bf_training_best_epoch(t.get())},
                         {"epochs", bf_training_epochs(t.get())},
                         {"missing_train_classes", bf_training_missing_classes(t.get())},
                         {"theta", theta_of(c.get())}});
    human += "split " + std::to_string(s) + " seed=" + std::to_string(split_seed) + " test_acc=" + fmt(acc) +
             " val_acc=" + fmt(bf_training_val_accuracy(t.get())) +
             " best_epoch=" + std::to_string(bf_training_best_epoch(t.get())) + "\n";
    if (bf_training_missing_classes(t.get()) > 0) {
      human += "  warning: " + std::to_string(bf_training_missing_classes(t.get())) +
               " class(es) absent from the training split\n";
    }
    if (!first_coeffs) first_coeffs = std::move(c);
  }

  const double mean = std::accumulate(accs.begin(), accs.end(), 0.0) / static_cast<double>(accs.size());
  double var = 0.0;
  for (double v : accs) var += (v - mean) * (v - mean);
  const double sd = accs.size() > 1 ? std::sqrt(var / static_cast<double>(accs.size() - 1)) : 0.0;
  human += "mean_test_acc=" + fmt(mean) + " +- " + fmt(sd) + " over " + std::to_string(accs.size()) + " splits\n";

  if (!a.curve_out.empty()) check(bf_export_curve(first_coeffs.get(), 1000, a.curve_out.c_str()));
  if (!a.coeffs_out.empty()) check(bf_coeffs_save_csv(first_coeffs.get(), a.coeffs_out.c_str()));

  emit(as_json,
       {{"command", "train"},
        {"nodes", n},
        {"features", bf_dataset_num_features(data.get())},
        {"classes", bf_dataset_num_classes(data.get())},
        {"splits", per_split},
        {"mean_test_accuracy", mean},
        {"std_test_accuracy", sd}},
       human);
  return 0;
}

struct SynthGridArgs {
  std::size_t height = 0;
  std::size_t width = 0;
  std::string kind = "random";
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string graph_out;
};

int run_synth_grid(const SynthGridArgs& a, bool as_json) {
  const std::size_t n = a.height * a.width;
  std::vector<double> x(n);
  check(bf_synth_grid_signal(a.height, a.width, a.seed, a.kind.c_str(), x.data(), n));
  check(bf_matrix_save(a.out.c_str(), x.data(), n, 1));
  if (!a.graph_out.empty()) {
    bf_graph* raw = nullptr;
    check(bf_graph_grid(a.height, a.width, &raw));
    const GraphPtr g(raw);
    check(bf_graph_save(g.get(), a.graph_out.c_str()));
  }
  emit(as_json, {{"command", "synth grid"}, {"height", a.height}, {"width", a.width}, {"kind", a.kind}, {"out", a.out}},
       "wrote " + std::to_string(a.height) + "x" + std::to_string(a.width) + " " + a.kind + " signal -> " + a.out + "\n");
  return 0;
}

struct SynthClusterArgs {
  std::size_t size = 10;
  double noise = 0.3;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

int run_synth_cluster(const SynthClusterArgs& a, bool as_json) {
  bf_dataset* raw = nullptr;
  check(bf_dataset_two_cluster(a.size, a.noise, a.seed, &raw));
  const DatasetPtr d(raw);
  check(bf_dataset_save(d.get(), a.out.c_str()));
  emit(as_json, {{"command", "synth two-cluster"}, {"nodes", bf_dataset_num_nodes(d.get())}, {"out", a.out}},
       "wrote two-cluster dataset with " + std::to_string(bf_dataset_num_nodes(d.get())) + " nodes -> " + a.out + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bernstein polynomial graph spectral filters"};
  app.set_version_flag("--version", std::string(bf_version()));
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(kFormats);
  bool as_json = false;
  app.add_flag("--json", as_json, "Print a single-line JSON record instead of the text summary");

  std::string catalog;
  for (std::size_t i = 0; i < bf_filter_catalog_size(); ++i) catalog += (i ? ", " : "") + std::string(bf_filter_catalog_name(i));

  DesignArgs design;
  auto* cmd_design = app.add_subcommand("design", "Coefficients theta_k = h(2k/K) for a named filter");
  cmd_design->add_option("--filter", design.filter, "Filter name: " + catalog)->required();
  cmd_design->add_option("--order", design.order, "Polynomial order K (1..64)")->capture_default_str();
  cmd_design->add_option("--out", design.out, "Output coefficient file")->required();
  cmd_design->add_option("--curve-out", design.curve_out, "Also write the response curve CSV");
  cmd_design->add_option("--points", design.points, "Curve grid points")->capture_default_str();
  cmd_design->footer(kFormats);

  ApplyArgs apply;
  auto* cmd_apply = app.add_subcommand("apply", "Filter a signal or feature block on a graph");
  cmd_apply->add_option("--graph", apply.graph, "Edge list file")->required();
  cmd_apply->add_option("--nodes", apply.nodes, "Node count (default: max id + 1)");
  cmd_apply->add_option("--coeffs", apply.coeffs, "Coefficient file")->required();
  cmd_apply->add_option("--signal", apply.signal, "Signal CSV, n rows by d columns")->required();
  cmd_apply->add_option("--out", apply.out, "Output CSV, same shape as the signal")->required();
  cmd_apply->footer(kFormats);

  ValidateArgs validate;
  auto* cmd_validate = app.add_subcommand("validate", "Check 0 <= g(lambda) <= 1 on [0, 2]; exit 1 if invalid");
  cmd_validate->add_option("--coeffs", validate.coeffs, "Coefficient file")->required();
  cmd_validate->add_option("--grid", validate.grid, "Grid points over [0, 2]")->capture_default_str();
  cmd_validate->footer(kFormats);

  SpectrumArgs spectrum;
  auto* cmd_spectrum = app.add_subcommand("spectrum", "Eigenvalues of the normalized Laplacian (n <= 2000)");
  cmd_spectrum->add_option("--graph", spectrum.graph, "Edge list file")->required();
  cmd_spectrum->add_option("--nodes", spectrum.nodes, "Node count (default: max id + 1)");
  cmd_spectrum->add_option("--out", spectrum.out, "Eigenvalue CSV, one per line (default: stdout)");
  cmd_spectrum->footer(kFormats);

  LearnArgs learn;
  auto* cmd_learn = app.add_subcommand("learn-filter", "Fit non-negative coefficients to an input/target pair");
  auto* g_graph = cmd_learn->add_option("--graph", learn.graph, "Edge list file");
  auto* g_grid = cmd_learn->add_option("--grid", learn.grid, "Use an HxW grid graph instead of --graph");
  g_graph->excludes(g_grid);
  cmd_learn->add_option("--nodes", learn.nodes, "Node count for --graph (default: max id + 1)");
  cmd_learn->add_option("--signal", learn.signal, "Input signal CSV (default with --grid: synthesized)");
  cmd_learn->add_option("--signal-kind", learn.signal_kind, "Synthesized signal: random, gradient or checker")
      ->capture_default_str();
  cmd_learn->add_option("--seed", learn.seed, "Seed for the synthesized signal")->capture_default_str();
  auto* o_target = cmd_learn->add_option("--target", learn.target, "Target signal CSV");
  auto* o_named = cmd_learn->add_option("--named-filter", learn.named_filter,
                                        "Synthesize the target by exact spectral filtering: " + catalog);
  o_target->excludes(o_named);
  auto* o_mask = cmd_learn->add_option("--mask", learn.mask, "Mask file (default: all nodes)");
  auto* o_interior = cmd_learn->add_flag("--interior", learn.interior, "Mask out the outer ring of a --grid");
  o_mask->excludes(o_interior);
  cmd_learn->add_option("--order", learn.order, "Polynomial order K")->capture_default_str();
  cmd_learn->add_option("--epochs", learn.epochs, "Maximum epochs")->capture_default_str();
  cmd_learn->add_option("--patience", learn.patience, "Stop after this many epochs without improvement")
      ->capture_default_str();
  cmd_learn->add_option("--lr", learn.lr, "Adam learning rate")->capture_default_str();
  cmd_learn->add_option("--layers", learn.layers, "1, or 2 stacked layers sharing theta")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  cmd_learn->add_option("--out", learn.out, "Output coefficient file");
  cmd_learn->add_option("--curve-out", learn.curve_out, "Learned response curve CSV");
  cmd_learn->add_option("--prediction-out", learn.prediction_out, "Filtered prediction CSV");
  cmd_learn->footer(kFormats);

  TrainArgs train;
  bf_train_config_default(&train.cfg);
  auto* cmd_train = app.add_subcommand("train", "Node classification over seeded 60/20/20 splits");
  auto* o_data = cmd_train->add_option("--data", train.data, "Dataset directory");
  auto* o_cluster = cmd_train->add_option("--two-cluster", train.two_cluster,
                                          "Use a synthetic two-clique graph with this many nodes per clique");
  o_data->excludes(o_cluster);
  cmd_train->add_option("--classes", train.classes, "Class count (default: max label + 1)");
  cmd_train->add_option("--noise", train.noise, "Feature noise for --two-cluster")->capture_default_str();
  cmd_train->add_option("--lr-linear", train.cfg.lr_linear, "Learning rate of the MLP")->capture_default_str();
  cmd_train->add_option("--lr-prop", train.cfg.lr_prop, "Learning rate of theta")->capture_default_str();
  cmd_train->add_option("--dropout-linear", train.cfg.dropout_linear, "Dropout on the MLP")->capture_default_str();
  cmd_train->add_option("--dropout-prop", train.cfg.dropout_prop, "Dropout before propagation")
      ->capture_default_str();
  cmd_train->add_option("--weight-decay", train.cfg.weight_decay, "L2 penalty on the linear weights")
      ->capture_default_str();
  cmd_train->add_option("--order", train.cfg.order, "Polynomial order K")->capture_default_str();
  cmd_train->add_option("--hidden", train.cfg.hidden, "Hidden units")->capture_default_str();
  cmd_train->add_option("--epochs", train.cfg.max_epochs, "Maximum epochs")->capture_default_str();
  cmd_train->add_option("--patience", train.cfg.patience, "Early-stopping patience on validation loss")
      ->capture_default_str();
  cmd_train->add_option("--splits", train.splits, "Number of random splits")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_train->add_option("--seed", train.seed, "Seed of the first split; split i uses seed + i")
      ->capture_default_str();
  cmd_train->add_option("--curve-out", train.curve_out, "Learned response curve CSV (first split)");
  cmd_train->add_option("--coeffs-out", train.coeffs_out, "Learned coefficients as k,theta CSV (first split)");
  cmd_train->add_option("--save-splits", train.save_splits, "Directory to write <seed>.txt split files into");
  cmd_train->footer(kFormats);

  auto* cmd_synth = app.add_subcommand("synth", "Generate synthetic inputs");
  cmd_synth->require_subcommand(1);
  SynthGridArgs grid;
  auto* cmd_grid = cmd_synth->add_subcommand("grid", "Image-like signal on an HxW grid");
  cmd_grid->add_option("--height", grid.height, "Rows")->required();
  cmd_grid->add_option("--width", grid.width, "Columns")->required();
  cmd_grid->add_option("--kind", grid.kind, "random, gradient or checker")->capture_default_str();
  cmd_grid->add_option("--seed", grid.seed, "Seed for random")->capture_default_str();
  cmd_grid->add_option("--out", grid.out, "Signal CSV")->required();
  cmd_grid->add_option("--graph-out", grid.graph_out, "Also write the grid edge list");
  cmd_grid->footer(kFormats);
  SynthClusterArgs cluster;
  auto* cmd_cluster = cmd_synth->add_subcommand("two-cluster", "Two cliques joined by one edge, as a dataset directory");
  cmd_cluster->add_option("--size", cluster.size, "Nodes per clique")->capture_default_str();
  cmd_cluster->add_option("--noise", cluster.noise, "Feature noise standard deviation")->capture_default_str();
  cmd_cluster->add_option("--seed", cluster.seed, "Seed")->capture_default_str();
  cmd_cluster->add_option("--out", cluster.out, "Dataset directory")->required();
  cmd_cluster->footer(kFormats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    std::cerr << app.help() << std::flush;
    return 2;
  }

  try {
    if (*cmd_design) return run_design(design, as_json);
    if (*cmd_apply) return run_apply(apply, as_json);
    if (*cmd_validate) return run_validate(validate, as_json);
    if (*cmd_spectrum) return run_spectrum(spectrum, as_json);
    if (*cmd_learn) {
      if (learn.graph.empty() && learn.grid.empty()) throw UsageFailure{"learn-filter needs --graph or --grid"};
      if (learn.target.empty() && learn.named_filter.empty()) {
        throw UsageFailure{"learn-filter needs --target or --named-filter"};
      }
      return run_learn(learn, as_json);
    }
    if (*cmd_train) return run_train(train, as_json);
    if (*cmd_grid) return run_synth_grid(grid, as_json);
    if (*cmd_cluster) return run_synth_cluster(cluster, as_json);
  } catch (const UsageFailure& e) {
    std::cerr << "error: usage: " << e.message << "\n";
    return 2;
  } catch (const LibraryFailure& e) {
    std::cerr << "error: " << bf_status_name(e.status) << ": " << e.message << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
