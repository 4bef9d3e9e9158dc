#include "bernfilter/propagation.hpp"

#include "bernfilter/error.hpp"

#include <cmath>
#include <string>

namespace bernfilter {

namespace {

void check_input(const NormalizedOperator& op, int order, const Matrix& x) {
  if (op.mode() != OperatorMode::Laplacian) {
    fail(ErrorCode::InvalidArgument, "Bernstein propagation needs a Laplacian-mode operator");
  }
  if (order < 0 || order > kMaxOrder) {
    fail(ErrorCode::OutOfRange, "order " + std::to_string(order) + " outside [0, " +
                                    std::to_string(kMaxOrder) + "]");
  }
  if (static_cast<std::size_t>(x.rows()) != op.size()) {
    fail(ErrorCode::DimensionMismatch, "input has " + std::to_string(x.rows()) + " rows, graph has " +
                                           std::to_string(op.size()) + " nodes");
  }
  if (!x.allFinite()) fail(ErrorCode::NonFinite, "propagation input holds a non-finite value");
}

// Calls visit(k, B_k X) for every k whose weight is nonzero (all k when
// weights is empty).
template <typename Visit>
void for_each_basis_term(const NormalizedOperator& op, int order, const Matrix& x,
                         std::span<const double> weights, Visit visit) {
  std::vector<Matrix> powers(static_cast<std::size_t>(order) + 1);
  powers[0] = x;
  for (int k = 1; k <= order; ++k) {
    op.apply(powers[static_cast<std::size_t>(k) - 1], powers[static_cast<std::size_t>(k)]);
  }

  Matrix lx;
  for (int k = 0; k <= order; ++k) {
    if (!weights.empty() && weights[static_cast<std::size_t>(k)] == 0.0) continue;
    Matrix term = std::move(powers[static_cast<std::size_t>(k)]);
    for (int step = 0; step < order - k; ++step) {
      op.apply(term, lx);
      term = 2.0 * term - lx;
    }
    term *= std::ldexp(binomial(order, k), -order);
    visit(k, std::move(term));
  }
}

}  // namespace

Matrix BasisCache::combine(std::span<const double> theta) const {
  if (theta.size() != terms_.size()) {
    fail(ErrorCode::DimensionMismatch, "expected " + std::to_string(terms_.size()) + " coefficients, got " +
                                           std::to_string(theta.size()));
  }
  Matrix out = Matrix::Zero(terms_.front().rows(), terms_.front().cols());
  for (std::size_t k = 0; k < terms_.size(); ++k) out += theta[k] * terms_[k];
  return out;
}

BasisCache build_basis_cache(const NormalizedOperator& op, int order, const Matrix& x) {
  check_input(op, order, x);
  std::vector<Matrix> terms(static_cast<std::size_t>(order) + 1);
  for_each_basis_term(op, order, x, {}, [&terms](int k, Matrix term) {
    terms[static_cast<std::size_t>(k)] = std::move(term);
  });
  return BasisCache(std::move(terms));
}

Matrix bernnet_apply_matrix(const NormalizedOperator& op, const BernCoeffs& c, const Matrix& x) {
  check_input(op, c.order(), x);
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  const auto theta = c.theta();
  for_each_basis_term(op, c.order(), x, theta, [&out, theta](int k, const Matrix& term) {
    out += theta[static_cast<std::size_t>(k)] * term;
  });
  return out;
}

std::vector<double> bernnet_apply(const NormalizedOperator& op, const BernCoeffs& c, std::span<const double> x) {
  if (x.size() != op.size()) {
    fail(ErrorCode::DimensionMismatch, "signal has " + std::to_string(x.size()) + " entries, graph has " +
                                           std::to_string(op.size()) + " nodes");
  }
  const Matrix column = Eigen::Map<const Matrix>(x.data(), static_cast<Eigen::Index>(x.size()), 1);
  const Matrix out = bernnet_apply_matrix(op, c, column);
  return {out.data(), out.data() + out.size()};
}

}  // namespace bernfilter
