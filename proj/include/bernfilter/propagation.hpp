#ifndef BERNFILTER_PROPAGATION_HPP
#define BERNFILTER_PROPAGATION_HPP

#include "bernfilter/bernstein.hpp"
#include "bernfilter/dense.hpp"
#include "bernfilter/graph.hpp"

#include <span>
#include <vector>

namespace bernfilter {

/// The K+1 blocks B_k X, where B_k = 2^{-K} C(K,k) (2I - L)^{K-k} L^k.
///
/// A filter with coefficients theta is then sum_k theta_k B_k X, and the
/// derivative of that output with respect to theta_k is B_k X itself.
class BasisCache {
 public:
  BasisCache() = default;
  explicit BasisCache(std::vector<Matrix> terms) : terms_(std::move(terms)) {}

  int order() const noexcept { return static_cast<int>(terms_.size()) - 1; }
  const Matrix& operator[](std::size_t k) const { return terms_[k]; }
  std::span<const Matrix> terms() const noexcept { return terms_; }

  /// sum_k theta_k B_k X.
  Matrix combine(std::span<const double> theta) const;

 private:
  std::vector<Matrix> terms_;
};

/// Builds B_k X for k = 0..K. Computes L^k X first, then applies (2I - L)
/// K-k times to each, so O(K^2) sparse products.
BasisCache build_basis_cache(const NormalizedOperator& op, int order, const Matrix& x);

/// sum_k theta_k 2^{-K} C(K,k) (2I - L)^{K-k} L^k x.
std::vector<double> bernnet_apply(const NormalizedOperator& op, const BernCoeffs& c, std::span<const double> x);

/// Column-wise bernnet_apply over an n x d block.
Matrix bernnet_apply_matrix(const NormalizedOperator& op, const BernCoeffs& c, const Matrix& x);

}  // namespace bernfilter

#endif
