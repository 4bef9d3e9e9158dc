// Helpers and independent oracles shared by the test binaries. Nothing here
// calls into the propagation or Bernstein code paths it is used to check.
#ifndef BERNFILTER_TEST_SUPPORT_HPP
#define BERNFILTER_TEST_SUPPORT_HPP

#include "bernfilter/dense.hpp"
#include "bernfilter/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace bftest {

using bernfilter::Edge;
using bernfilter::Graph;
using bernfilter::Matrix;

/// Erdos-Renyi graph; isolated nodes are possible.
inline Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.push_back({static_cast<std::int64_t>(u), static_cast<std::int64_t>(v)});
    }
  }
  return bernfilter::build_graph(edges, n);
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Dense L = I - D^{-1/2} A D^{-1/2} assembled from the edge list alone.
inline Eigen::MatrixXd dense_laplacian(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  const Eigen::VectorXd deg = a.rowwise().sum();
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = 0; v < n; ++v) {
      if (a(u, v) != 0.0) l(u, v) -= 1.0 / std::sqrt(deg(u) * deg(v));
    }
  }
  return l;
}

/// Exact binomial by Pascal's triangle in 64-bit integers (C(64,32) fits).
inline double exact_binomial(int n, int k) {
  std::vector<std::vector<std::uint64_t>> t(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    t[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i) + 1, 1);
    for (int j = 1; j < i; ++j) {
      t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          t[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j) - 1] +
          t[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j)];
    }
  }
  return static_cast<double>(t[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]);
}

/// Direct product form C(K,k) (1-t)^{K-k} t^k.
inline double direct_basis(int k, int order, double t) {
  return exact_binomial(order, k) * std::pow(1.0 - t, order - k) * std::pow(t, k);
}

/// Dense matrix sum_k theta_k 2^{-K} C(K,k) (2I - L)^{K-k} L^k via matrix powers.
inline Eigen::MatrixXd dense_bernnet(const Eigen::MatrixXd& l, std::span<const double> theta) {
  const int order = static_cast<int>(theta.size()) - 1;
  const auto n = l.rows();
  const Eigen::MatrixXd shifted = 2.0 * Eigen::MatrixXd::Identity(n, n) - l;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k <= order; ++k) {
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < order - k; ++i) term = shifted * term;
    for (int i = 0; i < k; ++i) term = l * term;
    out += theta[static_cast<std::size_t>(k)] * exact_binomial(order, k) / std::pow(2.0, order) * term;
  }
  return out;
}

/// h(L) x through Eigen's own symmetric eigensolver.
template <typename Fn>
std::vector<double> eigen_filter(const Eigen::MatrixXd& l, Fn h, std::span<const double> x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
  Eigen::VectorXd response(l.rows());
  for (Eigen::Index i = 0; i < l.rows(); ++i) response(i) = h(std::clamp(es.eigenvalues()(i), 0.0, 2.0));
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::VectorXd y = es.eigenvectors() * response.asDiagonal() * es.eigenvectors().transpose() * xv;
  return {y.data(), y.data() + y.size()};
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace bftest

#endif
