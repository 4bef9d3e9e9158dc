#include "bernfilter/bernstein.hpp"

#include "bernfilter/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace bernfilter {

namespace {

void check_order(int order) {
  if (order < 0 || order > kMaxOrder) {
    fail(ErrorCode::OutOfRange,
         "order " + std::to_string(order) + " outside [0, " + std::to_string(kMaxOrder) + "]");
  }
}

// Impulse at a point: 1 exactly there, 0 elsewhere.
double impulse(double lambda, double at) { return lambda == at ? 1.0 : 0.0; }

constexpr std::array<std::string_view, 12> kCatalog = {
    "all_pass",    "linear_low", "linear_high", "impulse_low",     "impulse_high", "impulse_band",
    "exp_low",     "exp_high",   "exp_band",    "exp_band_reject", "comb",         "low_band_pass",
};

}  // namespace

double binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

double log_binomial(int n, int k) { return std::log(binomial(n, k)); }

double bernstein_basis(int k, int order, double t) {
  check_order(order);
  if (k < 0 || k > order) {
    fail(ErrorCode::OutOfRange,
         "basis index " + std::to_string(k) + " outside [0, " + std::to_string(order) + "]");
  }
  if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::OutOfRange, "basis argument outside [0, 1]");
  if (t == 0.0) return k == 0 ? 1.0 : 0.0;
  if (t == 1.0) return k == order ? 1.0 : 0.0;
  return std::exp(log_binomial(order, k) + (order - k) * std::log1p(-t) + k * std::log(t));
}

BernCoeffs::BernCoeffs(std::vector<double> theta) : theta_(std::move(theta)) {
  if (theta_.empty()) fail(ErrorCode::InvalidArgument, "coefficient vector is empty");
  check_order(order());
  for (double v : theta_) {
    if (!std::isfinite(v)) fail(ErrorCode::NonFinite, "coefficient vector holds a non-finite value");
  }
}

BernCoeffs BernCoeffs::constant(int order, double value) {
  check_order(order);
  return BernCoeffs(std::vector<double>(static_cast<std::size_t>(order) + 1, value));
}

FilterFn::FilterFn(std::string name, std::function<double(double)> fn)
    : name_(std::move(name)), fn_(std::move(fn)) {
  if (!fn_) fail(ErrorCode::InvalidArgument, "filter function is empty");
}

FilterFn FilterFn::tabulated(std::vector<double> lambdas, std::vector<double> values) {
  if (lambdas.size() != values.size() || lambdas.size() < 2) {
    fail(ErrorCode::InvalidArgument, "tabulated filter needs >= 2 matching (lambda, value) samples");
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!std::isfinite(lambdas[i]) || !std::isfinite(values[i])) {
      fail(ErrorCode::NonFinite, "tabulated filter holds a non-finite sample");
    }
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) {
      fail(ErrorCode::InvalidArgument, "tabulated lambdas must be strictly increasing");
    }
  }
  if (lambdas.front() > 0.0 || lambdas.back() < 2.0) {
    fail(ErrorCode::InvalidArgument, "tabulated lambdas must cover [0, 2]");
  }
  auto fn = [xs = std::move(lambdas), ys = std::move(values)](double lambda) {
    if (lambda <= xs.front()) return ys.front();
    if (lambda >= xs.back()) return ys.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), lambda) - xs.begin());
    const std::size_t lo = hi - 1;
    const double w = (lambda - xs[lo]) / (xs[hi] - xs[lo]);
    return (1.0 - w) * ys[lo] + w * ys[hi];
  };
  return FilterFn("tabulated", std::move(fn));
}

BernCoeffs design_coeffs(const FilterFn& h, int order) {
  if (order < 1) fail(ErrorCode::OutOfRange, "design order must be at least 1");
  check_order(order);
  std::vector<double> theta(static_cast<std::size_t>(order) + 1);
  for (int k = 0; k <= order; ++k) {
    const double value = h(2.0 * k / order);
    if (!std::isfinite(value)) {
      fail(ErrorCode::NonFinite, "filter '" + h.name() + "' is not finite at lambda = " +
                                     std::to_string(2.0 * k / order));
    }
    theta[static_cast<std::size_t>(k)] = value;
  }
  return BernCoeffs(std::move(theta));
}

double eval_filter(const BernCoeffs& c, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 2.0)) {
    fail(ErrorCode::OutOfRange, "lambda " + std::to_string(lambda) + " outside [0, 2]");
  }
  const int order = c.order();
  const double t = lambda / 2.0;
  double acc = 0.0;
  for (int k = 0; k <= order; ++k) {
    acc += c[static_cast<std::size_t>(k)] * bernstein_basis(k, order, t);
  }
  return acc;
}

std::span<const std::string_view> filter_catalog() noexcept { return kCatalog; }

FilterFn named_filter(std::string_view name) {
  using std::exp;
  std::function<double(double)> fn;
  if (name == "all_pass") {
    fn = [](double) { return 1.0; };
  } else if (name == "linear_low") {
    fn = [](double l) { return 1.0 - l / 2.0; };
  } else if (name == "linear_high") {
    fn = [](double l) { return l / 2.0; };
  } else if (name == "impulse_low") {
    fn = [](double l) { return impulse(l, 0.0); };
  } else if (name == "impulse_high") {
    fn = [](double l) { return impulse(l, 2.0); };
  } else if (name == "impulse_band") {
    fn = [](double l) { return impulse(l, 1.0); };
  } else if (name == "exp_low") {
    fn = [](double l) { return exp(-10.0 * l * l); };
  } else if (name == "exp_high") {
    fn = [](double l) { return 1.0 - exp(-10.0 * l * l); };
  } else if (name == "exp_band") {
    fn = [](double l) { return exp(-10.0 * (l - 1.0) * (l - 1.0)); };
  } else if (name == "exp_band_reject") {
    fn = [](double l) { return 1.0 - exp(-10.0 * (l - 1.0) * (l - 1.0)); };
  } else if (name == "comb") {
    fn = [](double l) { return std::abs(std::sin(std::numbers::pi * l)); };
  } else if (name == "low_band_pass") {
    // Indicator pieces [0, 0.5], (0.5, 1), [1, 2].
    fn = [](double l) {
      if (l <= 0.5) return 1.0;
      if (l < 1.0) return exp(-100.0 * (l - 0.5) * (l - 0.5));
      return exp(-50.0 * (l - 1.5) * (l - 1.5));
    };
  } else {
    fail(ErrorCode::UnknownName, "unknown filter '" + std::string(name) + "'");
  }
  return FilterFn(std::string(name), std::move(fn));
}

BernCoeffs monomial_to_bernstein(std::span<const double> w) {
  if (w.empty()) fail(ErrorCode::InvalidArgument, "monomial coefficient vector is empty");
  const int order = static_cast<int>(w.size()) - 1;
  check_order(order);
  std::vector<double> theta(w.size(), 0.0);
  for (int k = 0; k <= order; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) {
      acc += binomial(k, j) / binomial(order, j) * w[static_cast<std::size_t>(j)];
    }
    theta[static_cast<std::size_t>(k)] = acc;
  }
  return BernCoeffs(std::move(theta));
}

ValidityReport validate_filter(const BernCoeffs& c, std::size_t grid_points) {
  if (grid_points < 2) fail(ErrorCode::InvalidArgument, "validation grid needs at least 2 points");
  constexpr double kSlack = 1e-12;

  ValidityReport report;
  report.min_value = std::numeric_limits<double>::infinity();
  report.max_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double lambda = i + 1 == grid_points ? 2.0 : 2.0 * static_cast<double>(i) / (grid_points - 1);
    const double g = eval_filter(c, lambda);
    if (g < report.min_value) {
      report.min_value = g;
      report.argmin_lambda = lambda;
    }
    if (g > report.max_value) {
      report.max_value = g;
      report.argmax_lambda = lambda;
    }
    if (g < -kSlack || g > 1.0 + kSlack) report.violations.push_back(lambda);
  }
  report.nonneg_ok = report.min_value >= -kSlack;
  report.bounded_ok = report.max_value <= 1.0 + kSlack;

  const auto theta = c.theta();
  report.theta_nonneg = std::all_of(theta.begin(), theta.end(), [](double v) { return v >= 0.0; });
  report.theta_bounded = std::all_of(theta.begin(), theta.end(), [](double v) { return v <= 1.0; });
  return report;
}

}  // namespace bernfilter
