#include "bernfilter/spectral.hpp"

#include "bernfilter/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace bernfilter {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (Eigen::Index p = 0; p < a.rows(); ++p) {
    for (Eigen::Index q = p + 1; q < a.cols(); ++q) sum += a(p, q) * a(p, q);
  }
  return std::sqrt(2.0 * sum);
}

void check_length(const SpectralDecomposition& dec, std::span<const double> x) {
  if (x.size() != dec.size()) {
    fail(ErrorCode::DimensionMismatch, "decomposition of size " + std::to_string(dec.size()) +
                                           " applied to vector of size " + std::to_string(x.size()));
  }
}

std::vector<double> spectral_multiply(const SpectralDecomposition& dec, std::span<const double> response,
                                      std::span<const double> x) {
  const auto n = static_cast<Eigen::Index>(dec.size());
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), n);
  Eigen::Map<const Eigen::VectorXd> hv(response.data(), n);
  const Eigen::VectorXd coeffs = dec.eigenvectors.transpose() * xv;
  const Eigen::VectorXd y = dec.eigenvectors * coeffs.cwiseProduct(hv);
  return {y.data(), y.data() + n};
}

}  // namespace

SpectralDecomposition jacobi_eigensolver(Matrix a, double off_tolerance, int max_sweeps) {
  if (a.rows() != a.cols()) fail(ErrorCode::DimensionMismatch, "eigensolver needs a square matrix");
  const Eigen::Index n = a.rows();
  // Rows of vt are the eigenvectors, so rotations touch contiguous memory.
  Matrix vt = Matrix::Identity(n, n);

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    const double off = off_diagonal_norm(a);
    if (off <= off_tolerance) break;
    // Early sweeps skip small pivots; afterwards every nonzero pivot rotates.
    const double threshold = sweep < 3 ? 0.2 * off / static_cast<double>(n * n) : 0.0;

    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0 || std::abs(apq) < threshold) continue;

        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          const double np = c * akp - s * akq;
          const double nq = s * akp + c * akq;
          a(k, p) = np;
          a(p, k) = np;
          a(k, q) = nq;
          a(q, k) = nq;
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        auto vp = vt.row(p);
        auto vq = vt.row(q);
        for (Eigen::Index k = 0; k < n; ++k) {
          const double x = vp(k);
          const double y = vq(k);
          vp(k) = c * x - s * y;
          vq(k) = s * x + c * y;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&a](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  SpectralDecomposition dec;
  dec.sweeps = sweep;
  dec.eigenvalues.resize(static_cast<std::size_t>(n));
  dec.eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    dec.eigenvalues[static_cast<std::size_t>(i)] = a(src, src);
    dec.eigenvectors.col(i) = vt.row(src).transpose();
  }
  return dec;
}

SpectralDecomposition eigendecompose(const NormalizedOperator& op) {
  if (op.mode() != OperatorMode::Laplacian) {
    fail(ErrorCode::InvalidArgument, "eigendecompose expects a Laplacian-mode operator");
  }
  if (op.size() > kOracleMaxNodes) {
    fail(ErrorCode::OracleCap, "dense oracle is limited to " + std::to_string(kOracleMaxNodes) +
                                   " nodes, graph has " + std::to_string(op.size()));
  }
  SpectralDecomposition dec = jacobi_eigensolver(op.dense());
  for (double& l : dec.eigenvalues) l = std::clamp(l, 0.0, 2.0);
  return dec;
}

std::vector<double> exact_filter_apply(const SpectralDecomposition& dec, const FilterFn& h,
                                       std::span<const double> x) {
  check_length(dec, x);
  std::vector<double> response(dec.size());
  for (std::size_t i = 0; i < dec.size(); ++i) {
    response[i] = h(dec.eigenvalues[i]);
    if (!std::isfinite(response[i])) {
      fail(ErrorCode::NonFinite, "filter '" + h.name() + "' is not finite on the spectrum");
    }
  }
  return spectral_multiply(dec, response, x);
}

std::vector<double> energy_solution(const SpectralDecomposition& dec, const FilterFn& gamma, double alpha,
                                    std::span<const double> x) {
  if (!(alpha > 0.0 && alpha <= 1.0)) fail(ErrorCode::OutOfRange, "alpha must lie in (0, 1]");
  check_length(dec, x);
  std::vector<double> response(dec.size());
  for (std::size_t i = 0; i < dec.size(); ++i) {
    const double g = gamma(dec.eigenvalues[i]);
    if (!std::isfinite(g)) fail(ErrorCode::NonFinite, "energy function is not finite on the spectrum");
    if (g < 0.0) {
      fail(ErrorCode::EnergyNotPsd, "energy not positive semidefinite: gamma(" +
                                        std::to_string(dec.eigenvalues[i]) + ") = " + std::to_string(g));
    }
    response[i] = alpha / (alpha + (1.0 - alpha) * g);
  }
  return spectral_multiply(dec, response, x);
}

namespace {

template <typename CoeffFn>
std::vector<double> adjacency_series(const NormalizedOperator& op, int order, std::span<const double> x,
                                     CoeffFn coeff) {
  if (order < 0) fail(ErrorCode::OutOfRange, "series order must be non-negative");
  if (x.size() != op.size()) {
    fail(ErrorCode::DimensionMismatch, "operator of size " + std::to_string(op.size()) +
                                           " applied to vector of size " + std::to_string(x.size()));
  }
  const NormalizedOperator adjacency(op.graph(), OperatorMode::Adjacency);
  std::vector<double> term(x.begin(), x.end());
  std::vector<double> next(x.size());
  std::vector<double> acc(x.size(), 0.0);
  for (int k = 0; k <= order; ++k) {
    if (k > 0) {
      adjacency.apply(term, next);
      term.swap(next);
    }
    const double w = coeff(k);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * term[i];
  }
  return acc;
}

}  // namespace

std::vector<double> ppr_suffix_sum(const NormalizedOperator& op, double alpha, int order,
                                   std::span<const double> x) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::OutOfRange, "PPR alpha must lie in (0, 1)");
  return adjacency_series(op, order, x,
                          [alpha](int k) { return alpha * std::pow(1.0 - alpha, k); });
}

std::vector<double> heat_suffix_sum(const NormalizedOperator& op, double t, int order,
                                    std::span<const double> x) {
  if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorCode::OutOfRange, "heat temperature must be positive");
  // e^{-t} t^k / k! via lgamma keeps large k from overflowing.
  return adjacency_series(op, order, x, [t](int k) {
    return std::exp(-t + k * std::log(t) - std::lgamma(static_cast<double>(k) + 1.0));
  });
}

}  // namespace bernfilter
