#ifndef BERNFILTER_BERNSTEIN_HPP
#define BERNFILTER_BERNSTEIN_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bernfilter {

/// Largest supported polynomial order.
inline constexpr int kMaxOrder = 64;

double binomial(int n, int k);
double log_binomial(int n, int k);

/// b_k^K(t) = C(K,k) (1-t)^{K-k} t^k for 0 <= k <= K <= kMaxOrder, t in [0,1].
///
/// Computed in log space with the endpoints t = 0 and t = 1 short-circuited,
/// so accuracy is uniform across orders.
double bernstein_basis(int k, int order, double t);

/// Order K and the K+1 coefficients theta_k of a Bernstein filter.
class BernCoeffs {
 public:
  /// Throws if theta is empty, longer than kMaxOrder + 1, or holds a
  /// non-finite value.
  explicit BernCoeffs(std::vector<double> theta);

  static BernCoeffs constant(int order, double value);

  int order() const noexcept { return static_cast<int>(theta_.size()) - 1; }
  std::span<const double> theta() const noexcept { return theta_; }
  double operator[](std::size_t k) const { return theta_[k]; }

  friend bool operator==(const BernCoeffs&, const BernCoeffs&) = default;

 private:
  std::vector<double> theta_;
};

/// Scalar spectral response h(lambda) on [0, 2], either closed-form or a
/// table of samples with linear interpolation.
class FilterFn {
 public:
  FilterFn(std::string name, std::function<double(double)> fn);

  /// Piecewise-linear through (lambdas[i], values[i]); lambdas strictly
  /// increasing and spanning [0, 2].
  static FilterFn tabulated(std::vector<double> lambdas, std::vector<double> values);

  double operator()(double lambda) const { return fn_(lambda); }
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  std::function<double(double)> fn_;
};

/// theta_k = h(2k / K).
BernCoeffs design_coeffs(const FilterFn& h, int order);

/// sum_k theta_k b_k^K(lambda / 2) for lambda in [0, 2].
double eval_filter(const BernCoeffs& c, double lambda);

/// Names accepted by named_filter().
std::span<const std::string_view> filter_catalog() noexcept;

/// Closed-form filters: the designed filters (all-pass, linear, impulse), the
/// exponential low/high/band-pass and band-rejection responses, |sin(pi
/// lambda)| comb and the piecewise low-band-pass. Throws UnknownName.
FilterFn named_filter(std::string_view name);

/// Re-expresses p(t) = sum_j w_j t^j on [0,1] in the order-(len(w)-1)
/// Bernstein basis via theta_k = sum_{j<=k} C(k,j)/C(K,j) w_j.
BernCoeffs monomial_to_bernstein(std::span<const double> w);

struct ValidityReport {
  double min_value = 0.0;
  double max_value = 0.0;
  double argmin_lambda = 0.0;
  double argmax_lambda = 0.0;
  bool nonneg_ok = false;
  bool bounded_ok = false;
  // Sufficient conditions read straight off the coefficients.
  bool theta_nonneg = false;
  bool theta_bounded = false;
  /// Grid points where g < 0 or g > 1 (beyond the 1e-12 slack).
  std::vector<double> violations;

  bool valid() const noexcept { return nonneg_ok && bounded_ok; }
};

/// Checks 0 <= g(lambda) <= 1 on a uniform grid over [0, 2].
ValidityReport validate_filter(const BernCoeffs& c, std::size_t grid_points = 1000);

}  // namespace bernfilter

#endif
