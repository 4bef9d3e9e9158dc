#include "bernfilter/graph.hpp"

#include "bernfilter/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace bernfilter {

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (std::size_t u = 0; u < num_nodes(); ++u) {
    for (std::size_t v : neighbors(u)) {
      if (u < v) out.push_back({static_cast<std::int64_t>(u), static_cast<std::int64_t>(v)});
    }
  }
  return out;
}

Graph build_graph(std::span<const Edge> edges, std::size_t n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "graph must have at least one node");

  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  arcs.reserve(2 * edges.size());
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n ||
        static_cast<std::size_t>(e.v) >= n) {
      fail(ErrorCode::OutOfRange, "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                      ") has an index outside [0, " + std::to_string(n) + ")");
    }
    if (e.u == e.v) continue;
    const auto u = static_cast<std::size_t>(e.u);
    const auto v = static_cast<std::size_t>(e.v);
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  Graph g;
  g.row_offsets_.assign(n + 1, 0);
  g.degrees_.assign(n, 0);
  g.col_indices_.reserve(arcs.size());
  for (const auto& [u, v] : arcs) {
    ++g.degrees_[u];
    g.col_indices_.push_back(v);
  }
  for (std::size_t u = 0; u < n; ++u) g.row_offsets_[u + 1] = g.row_offsets_[u] + g.degrees_[u];
  return g;
}

Graph grid_graph(std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) fail(ErrorCode::InvalidArgument, "grid dimensions must be positive");
  std::vector<Edge> edges;
  edges.reserve(2 * height * width);
  auto id = [width](std::size_t r, std::size_t c) { return static_cast<std::int64_t>(r * width + c); };
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      if (c + 1 < width) edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < height) edges.push_back({id(r, c), id(r + 1, c)});
    }
  }
  return build_graph(edges, height * width);
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) fail(ErrorCode::InvalidArgument, "cycle needs at least 3 nodes");
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    edges.push_back({static_cast<std::int64_t>(u), static_cast<std::int64_t>((u + 1) % n)});
  }
  return build_graph(edges, n);
}

NormalizedOperator::NormalizedOperator(const Graph& graph, OperatorMode mode)
    : graph_(&graph), mode_(mode), scale_(graph.num_nodes(), 0.0) {
  for (std::size_t u = 0; u < scale_.size(); ++u) {
    const auto d = graph.degree(u);
    if (d > 0) scale_[u] = 1.0 / std::sqrt(static_cast<double>(d));
  }
}

void NormalizedOperator::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  if (x.size() != n || y.size() != n) {
    fail(ErrorCode::DimensionMismatch, "operator of size " + std::to_string(n) +
                                           " applied to vector of size " + std::to_string(x.size()));
  }
  const auto offsets = graph_->row_offsets();
  const auto cols = graph_->col_indices();
  for (std::size_t u = 0; u < n; ++u) {
    double acc = 0.0;
    for (std::size_t i = offsets[u]; i < offsets[u + 1]; ++i) {
      const std::size_t v = cols[i];
      acc += scale_[v] * x[v];
    }
    const double px = scale_[u] * acc;
    y[u] = mode_ == OperatorMode::Laplacian ? x[u] - px : px;
  }
}

std::vector<double> NormalizedOperator::apply(std::span<const double> x) const {
  std::vector<double> y(x.size());
  apply(x, y);
  return y;
}

void NormalizedOperator::apply(const Matrix& x, Matrix& y) const {
  const std::size_t n = size();
  if (static_cast<std::size_t>(x.rows()) != n) {
    fail(ErrorCode::DimensionMismatch, "operator of size " + std::to_string(n) +
                                           " applied to block with " + std::to_string(x.rows()) +
                                           " rows");
  }
  y.resize(x.rows(), x.cols());
  const auto offsets = graph_->row_offsets();
  const auto cols = graph_->col_indices();
  for (std::size_t u = 0; u < n; ++u) {
    auto out = y.row(static_cast<Eigen::Index>(u));
    out.setZero();
    for (std::size_t i = offsets[u]; i < offsets[u + 1]; ++i) {
      const std::size_t v = cols[i];
      out.noalias() += scale_[v] * x.row(static_cast<Eigen::Index>(v));
    }
    out *= scale_[u];
    if (mode_ == OperatorMode::Laplacian) out = x.row(static_cast<Eigen::Index>(u)) - out;
  }
}

Matrix NormalizedOperator::apply(const Matrix& x) const {
  Matrix y;
  apply(x, y);
  return y;
}

Matrix NormalizedOperator::dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (std::size_t v : graph_->neighbors(static_cast<std::size_t>(u))) {
      m(u, static_cast<Eigen::Index>(v)) = scale_[static_cast<std::size_t>(u)] * scale_[v];
    }
  }
  if (mode_ == OperatorMode::Laplacian) m = Matrix::Identity(n, n) - m;
  return m;
}

std::vector<double> laplacian_matvec(const NormalizedOperator& op, std::span<const double> x) {
  if (op.mode() != OperatorMode::Laplacian) {
    fail(ErrorCode::InvalidArgument, "laplacian_matvec requires a Laplacian-mode operator");
  }
  return op.apply(x);
}

}  // namespace bernfilter
