#ifndef BERNFILTER_GRAPH_HPP
#define BERNFILTER_GRAPH_HPP

#include "bernfilter/dense.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bernfilter {

struct Edge {
  std::int64_t u;
  std::int64_t v;
};

/// Simple undirected graph in compressed adjacency (CSR) form.
///
/// Both orientations of every edge are stored, neighbor lists are sorted, and
/// there are no self-loops or duplicates. Immutable once built.
class Graph {
 public:
  Graph() = default;

  std::size_t num_nodes() const noexcept { return degrees_.size(); }
  /// Number of undirected edges.
  std::size_t num_edges() const noexcept { return col_indices_.size() / 2; }

  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const std::size_t> col_indices() const noexcept { return col_indices_; }
  std::span<const std::size_t> degrees() const noexcept { return degrees_; }

  std::span<const std::size_t> neighbors(std::size_t u) const {
    return std::span<const std::size_t>(col_indices_).subspan(
        row_offsets_[u], row_offsets_[u + 1] - row_offsets_[u]);
  }

  std::size_t degree(std::size_t u) const { return degrees_[u]; }

  /// Each undirected edge once, as (u, v) with u < v.
  std::vector<Edge> edges() const;

 private:
  friend Graph build_graph(std::span<const Edge> edges, std::size_t n);

  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<std::size_t> degrees_;
};

/// Symmetrizes, deduplicates and drops self-loops. Throws on n == 0 or an
/// index outside [0, n).
Graph build_graph(std::span<const Edge> edges, std::size_t n);

/// 4-neighborhood grid; node (r, c) has index r * width + c.
Graph grid_graph(std::size_t height, std::size_t width);

/// Ring 0-1-...-(n-1)-0. Requires n >= 3.
Graph cycle_graph(std::size_t n);

enum class OperatorMode { Laplacian, Adjacency };

/// Symmetric normalization of a graph: P = D^{-1/2} A D^{-1/2} or L = I - P.
///
/// Isolated nodes get a zero row and column in P, so L is the identity there.
/// The graph must outlive the operator.
class NormalizedOperator {
 public:
  explicit NormalizedOperator(const Graph& graph, OperatorMode mode = OperatorMode::Laplacian);

  const Graph& graph() const noexcept { return *graph_; }
  OperatorMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return scale_.size(); }
  /// degree^{-1/2}, or 0 for isolated nodes.
  std::span<const double> scale() const noexcept { return scale_; }

  /// y = op * x. x and y must not alias.
  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  /// Row-wise product for an n x d block: Y = op * X.
  void apply(const Matrix& x, Matrix& y) const;
  Matrix apply(const Matrix& x) const;

  /// Densely materialized operator, for oracles on small graphs.
  Matrix dense() const;

 private:
  const Graph* graph_;
  OperatorMode mode_;
  std::vector<double> scale_;
};

/// L x for an operator in Laplacian mode.
std::vector<double> laplacian_matvec(const NormalizedOperator& op, std::span<const double> x);

}  // namespace bernfilter

#endif
