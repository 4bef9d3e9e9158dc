#include "bernfilter/dataset_io.hpp"

#include "bernfilter/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

namespace bernfilter {

namespace fs = std::filesystem;

namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  return out;
}

[[noreturn]] void parse_error(const fs::path& path, std::size_t line, const std::string& what) {
  fail(ErrorCode::Parse, path.string() + ":" + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool skip_line(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

// Splits on commas and/or whitespace.
std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_sep(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_double(std::string_view tok, const fs::path& path, std::size_t line) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) parse_error(path, line, "not a number: '" + std::string(tok) + "'");
  if (!std::isfinite(v)) {
    fail(ErrorCode::NonFinite, path.string() + ":" + std::to_string(line) + ": non-finite value '" +
                                   std::string(tok) + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view tok, const fs::path& path, std::size_t line) {
  Int v{};
  const auto* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) parse_error(path, line, "not an integer: '" + std::string(tok) + "'");
  return v;
}

std::string format_double(double v, int precision = 0) {
  char buf[64];
  const auto res = precision > 0 ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision)
                                 : std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<Edge> read_edge_list(const fs::path& path) {
  auto in = open_in(path);
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    const auto toks = tokens(line);
    if (toks.size() != 2) parse_error(path, lineno, "expected two node ids");
    edges.push_back({parse_int<std::int64_t>(toks[0], path, lineno), parse_int<std::int64_t>(toks[1], path, lineno)});
  }
  return edges;
}

Graph load_graph(const fs::path& path, std::optional<std::size_t> num_nodes) {
  const auto edges = read_edge_list(path);
  std::size_t n = 0;
  if (num_nodes) {
    n = *num_nodes;
  } else {
    for (const Edge& e : edges) n = std::max<std::size_t>(n, static_cast<std::size_t>(std::max(e.u, e.v)) + 1);
  }
  return build_graph(edges, n);
}

void write_edge_list(const fs::path& path, const Graph& graph) {
  auto out = open_out(path);
  out << "# nodes " << graph.num_nodes() << "\n";
  for (const Edge& e : graph.edges()) out << e.u << ' ' << e.v << '\n';
  if (!out) fail(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

Matrix read_matrix_csv(const fs::path& path) {
  auto in = open_in(path);
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    const auto toks = tokens(line);
    if (rows == 0) {
      cols = toks.size();
    } else if (toks.size() != cols) {
      parse_error(path, lineno, "expected " + std::to_string(cols) + " columns, found " + std::to_string(toks.size()));
    }
    for (auto tok : toks) values.push_back(parse_double(tok, path, lineno));
    ++rows;
  }
  if (rows == 0) fail(ErrorCode::Parse, path.string() + ": no data rows");
  return Eigen::Map<const Matrix>(values.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

void write_matrix_csv(const fs::path& path, const Matrix& m) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) fail(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

std::vector<double> read_signal(const fs::path& path) {
  const Matrix m = read_matrix_csv(path);
  if (m.cols() != 1) {
    fail(ErrorCode::DimensionMismatch, path.string() + ": signal must have one value per line, found " +
                                           std::to_string(m.cols()) + " columns");
  }
  return {m.data(), m.data() + m.size()};
}

void write_signal(const fs::path& path, std::span<const double> signal) {
  write_matrix_csv(path, Eigen::Map<const Matrix>(signal.data(), static_cast<Eigen::Index>(signal.size()), 1));
}

std::vector<int> read_labels(const fs::path& path) {
  auto in = open_in(path);
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    const auto toks = tokens(line);
    if (toks.size() != 1) parse_error(path, lineno, "expected one label per line");
    const int label = parse_int<int>(toks[0], path, lineno);
    if (label < 0) parse_error(path, lineno, "negative label");
    labels.push_back(label);
  }
  if (labels.empty()) fail(ErrorCode::Parse, path.string() + ": labels file is empty");
  return labels;
}

void write_labels(const fs::path& path, const std::vector<int>& labels) {
  auto out = open_out(path);
  for (int l : labels) out << l << '\n';
  if (!out) fail(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

BernCoeffs read_coeffs(const fs::path& path) {
  auto in = open_in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!skip_line(line)) lines.push_back(line);
  }
  if (lines.size() != 2) {
    fail(ErrorCode::Parse, path.string() + ": expected an order line and a coefficient line");
  }
  const auto order_toks = tokens(lines[0]);
  if (order_toks.size() != 1) parse_error(path, 1, "first line must hold the order K");
  const int order = parse_int<int>(order_toks[0], path, 1);
  std::vector<double> theta;
  for (auto tok : tokens(lines[1])) theta.push_back(parse_double(tok, path, 2));
  if (order < 0 || theta.size() != static_cast<std::size_t>(order) + 1) {
    parse_error(path, 2, "expected " + std::to_string(order + 1) + " coefficients, found " +
                             std::to_string(theta.size()));
  }
  return BernCoeffs(std::move(theta));
}

void write_coeffs(const fs::path& path, const BernCoeffs& c) {
  auto out = open_out(path);
  out << c.order() << '\n';
  const auto theta = c.theta();
  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (k > 0) out << ' ';
    out << format_double(theta[k], 17);
  }
  out << '\n';
  if (!out) fail(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

void write_coeffs_csv(const fs::path& path, const BernCoeffs& c) {
  auto out = open_out(path);
  out << "k,theta\n";
  const auto theta = c.theta();
  for (std::size_t k = 0; k < theta.size(); ++k) out << k << ',' << format_double(theta[k], 17) << '\n';
  if (!out) fail(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

Mask read_mask(const fs::path& path) {
  auto in = open_in(path);
  Mask mask;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    const auto t = trim(line);
    if (t == "1") {
      mask.push_back(1);
    } else if (t == "0") {
      mask.push_back(0);
    } else {
      parse_error(path, lineno, "mask entries must be 0 or 1");
    }
  }
  return mask;
}

SplitMasks read_split(const fs::path& path) {
  auto in = open_in(path);
  SplitMasks s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    const auto t = trim(line);
    const bool train = t == "train";
    const bool val = t == "val";
    const bool test = t == "test";
    if (!train && !val && !test && t != "none") parse_error(path, lineno, "expected train, val, test or none");
    s.train.push_back(train);
    s.val.push_back(val);
    s.test.push_back(test);
  }
  return s;
}

void write_split(const fs::path& path, const SplitMasks& split) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < split.train.size(); ++i) {
    out << (split.train[i] ? "train" : split.val[i] ? "val" : split.test[i] ? "test" : "none") << '\n';
  }
  if (!out) fail(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

namespace {

template <typename Fn>
CurveTable tabulate(std::size_t points, Fn fn) {
  if (points < 2) fail(ErrorCode::InvalidArgument, "a curve needs at least 2 points");
  CurveTable t;
  t.lambda.resize(points);
  t.value.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double lambda = i + 1 == points ? 2.0 : 2.0 * static_cast<double>(i) / static_cast<double>(points - 1);
    t.lambda[i] = lambda;
    t.value[i] = fn(lambda);
  }
  return t;
}

}  // namespace

CurveTable export_curve(const BernCoeffs& c, std::size_t points) {
  return tabulate(points, [&c](double l) { return eval_filter(c, l); });
}

CurveTable sample_curve(const FilterFn& h, std::size_t points) { return tabulate(points, h); }

void write_curve_csv(const fs::path& path, const CurveTable& curve) {
  auto out = open_out(path);
  out << "lambda,value\n";
  for (std::size_t i = 0; i < curve.lambda.size(); ++i) {
    out << format_double(curve.lambda[i]) << ',' << format_double(curve.value[i]) << '\n';
  }
  if (!out) fail(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

CurveTable read_curve_csv(const fs::path& path) {
  auto in = open_in(path);
  CurveTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    if (lineno == 1 && trim(line) == "lambda,value") continue;
    const auto toks = tokens(line);
    if (toks.size() != 2) parse_error(path, lineno, "expected lambda,value");
    t.lambda.push_back(parse_double(toks[0], path, lineno));
    t.value.push_back(parse_double(toks[1], path, lineno));
  }
  if (t.lambda.size() < 2 || t.lambda.front() != 0.0 || t.lambda.back() != 2.0 ||
      !std::is_sorted(t.lambda.begin(), t.lambda.end(), std::less_equal<>())) {
    fail(ErrorCode::Parse, path.string() + ": curve must increase strictly from lambda 0 to 2");
  }
  return t;
}

NodeDataset load_dataset(const fs::path& dir, std::optional<int> num_classes) {
  for (const char* name : {"edges.txt", "features.csv", "labels.txt"}) {
    if (!fs::exists(dir / name)) fail(ErrorCode::Io, "dataset directory '" + dir.string() + "' lacks " + name);
  }
  NodeDataset data;
  data.labels = read_labels(dir / "labels.txt");
  const std::size_t n = data.labels.size();
  data.features = read_matrix_csv(dir / "features.csv");
  if (static_cast<std::size_t>(data.features.rows()) != n) {
    fail(ErrorCode::DimensionMismatch, "features.csv has " + std::to_string(data.features.rows()) +
                                           " rows but labels.txt has " + std::to_string(n) + " labels");
  }
  data.graph = load_graph(dir / "edges.txt", n);
  const int max_label = *std::max_element(data.labels.begin(), data.labels.end());
  if (num_classes) {
    if (max_label >= *num_classes) {
      fail(ErrorCode::OutOfRange, "label " + std::to_string(max_label) + " is not below the class count " +
                                      std::to_string(*num_classes));
    }
    data.num_classes = *num_classes;
  } else {
    data.num_classes = max_label + 1;
  }
  validate_dataset(data);
  return data;
}

void save_dataset(const fs::path& dir, const NodeDataset& data) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
  write_edge_list(dir / "edges.txt", data.graph);
  write_matrix_csv(dir / "features.csv", data.features);
  write_labels(dir / "labels.txt", data.labels);
}

GridSignalKind parse_grid_signal_kind(std::string_view name) {
  if (name == "random") return GridSignalKind::Random;
  if (name == "gradient") return GridSignalKind::Gradient;
  if (name == "checker") return GridSignalKind::Checker;
  fail(ErrorCode::UnknownName, "unknown grid signal kind '" + std::string(name) + "'");
}

std::vector<double> synth_grid_signal(std::size_t height, std::size_t width, std::uint64_t seed,
                                      GridSignalKind kind) {
  if (height == 0 || width == 0 || height * width < 2) {
    fail(ErrorCode::InvalidArgument, "grid signal needs at least two pixels");
  }
  std::vector<double> out(height * width);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double span = static_cast<double>(height - 1 + width - 1);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      double& v = out[r * width + c];
      switch (kind) {
        case GridSignalKind::Random: v = unit(rng); break;
        case GridSignalKind::Gradient: v = static_cast<double>(r + c) / span; break;
        case GridSignalKind::Checker: v = (r + c) % 2 == 0 ? 1.0 : 0.0; break;
      }
    }
  }
  return out;
}

NodeDataset two_cluster_dataset(std::size_t cluster_size, double noise, std::uint64_t seed) {
  if (cluster_size < 2) fail(ErrorCode::InvalidArgument, "clusters need at least 2 nodes");
  if (!(noise >= 0.0)) fail(ErrorCode::InvalidArgument, "noise must be non-negative");
  const std::size_t n = 2 * cluster_size;
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < 2; ++c) {
    const std::size_t base = c * cluster_size;
    for (std::size_t i = 0; i < cluster_size; ++i) {
      for (std::size_t j = i + 1; j < cluster_size; ++j) {
        edges.push_back({static_cast<std::int64_t>(base + i), static_cast<std::int64_t>(base + j)});
      }
    }
  }
  edges.push_back({0, static_cast<std::int64_t>(cluster_size)});

  NodeDataset data;
  data.graph = build_graph(edges, n);
  data.num_classes = 2;
  data.labels.resize(n);
  data.features = Matrix::Zero(static_cast<Eigen::Index>(n), 2);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i < cluster_size ? 0 : 1;
    data.labels[i] = label;
    const auto row = static_cast<Eigen::Index>(i);
    data.features(row, label) = 1.0;
    for (Eigen::Index j = 0; j < 2; ++j) data.features(row, j) += noise * gauss(rng);
  }
  return data;
}

}  // namespace bernfilter
