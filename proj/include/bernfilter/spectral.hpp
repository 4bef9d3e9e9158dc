#ifndef BERNFILTER_SPECTRAL_HPP
#define BERNFILTER_SPECTRAL_HPP

#include "bernfilter/bernstein.hpp"
#include "bernfilter/dense.hpp"
#include "bernfilter/graph.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace bernfilter {

/// Dense oracle is limited to graphs of at most this many nodes.
inline constexpr std::size_t kOracleMaxNodes = 2000;

/// Eigenpairs of a symmetric matrix: eigenvalues ascending, column i of
/// eigenvectors pairs with eigenvalues[i].
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
  int sweeps = 0;

  std::size_t size() const noexcept { return eigenvalues.size(); }
};

/// Cyclic Jacobi on a dense symmetric matrix. Sweeps until the off-diagonal
/// Frobenius norm drops to off_tolerance or max_sweeps is reached.
SpectralDecomposition jacobi_eigensolver(Matrix a, double off_tolerance = 1e-12, int max_sweeps = 100);

/// Eigendecomposition of the normalized Laplacian, eigenvalues clamped to
/// [0, 2]. Throws OracleCap above kOracleMaxNodes.
SpectralDecomposition eigendecompose(const NormalizedOperator& op);

/// U diag(h(lambda_i)) U^T x.
std::vector<double> exact_filter_apply(const SpectralDecomposition& dec, const FilterFn& h,
                                       std::span<const double> x);

/// Minimizer of (1-alpha) z^T gamma(L) z + alpha ||z - x||^2, i.e. the
/// spectral filter alpha / (alpha + (1-alpha) gamma(lambda)). Throws
/// EnergyNotPsd if gamma is negative anywhere on the spectrum.
std::vector<double> energy_solution(const SpectralDecomposition& dec, const FilterFn& gamma, double alpha,
                                    std::span<const double> x);

/// sum_{k=0}^{K} alpha (1-alpha)^k P^k x, by iterated sparse products.
std::vector<double> ppr_suffix_sum(const NormalizedOperator& op, double alpha, int order,
                                   std::span<const double> x);

/// sum_{k=0}^{K} e^{-t} t^k / k! P^k x.
std::vector<double> heat_suffix_sum(const NormalizedOperator& op, double t, int order,
                                    std::span<const double> x);

}  // namespace bernfilter

#endif
