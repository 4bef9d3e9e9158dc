#include "bernfilter/filter_learn.hpp"

#include "bernfilter/adam.hpp"
#include "bernfilter/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bernfilter {

namespace {

Matrix as_column(std::span<const double> v) {
  return Eigen::Map<const Matrix>(v.data(), static_cast<Eigen::Index>(v.size()), 1);
}

double masked_dot(const Mask& mask, const Matrix& a, const Matrix& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) acc += a(static_cast<Eigen::Index>(i), 0) * b(static_cast<Eigen::Index>(i), 0);
  }
  return acc;
}

}  // namespace

void validate_task(const RegressionTask& task) {
  const std::size_t n = task.graph.num_nodes();
  if (task.input.size() != n || task.target.size() != n || task.mask.size() != n) {
    fail(ErrorCode::DimensionMismatch, "regression task sizes (input " + std::to_string(task.input.size()) +
                                           ", target " + std::to_string(task.target.size()) + ", mask " +
                                           std::to_string(task.mask.size()) + ") do not match " +
                                           std::to_string(n) + " nodes");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(task.input.begin(), task.input.end(), finite) ||
      !std::all_of(task.target.begin(), task.target.end(), finite)) {
    fail(ErrorCode::NonFinite, "regression task holds a non-finite signal value");
  }
  if (std::none_of(task.mask.begin(), task.mask.end(), [](std::uint8_t m) { return m != 0; })) {
    fail(ErrorCode::InvalidArgument, "regression mask selects no nodes");
  }
}

FitScore sse_and_r2(std::span<const double> prediction, std::span<const double> target, const Mask& mask) {
  if (prediction.size() != target.size() || mask.size() != target.size()) {
    fail(ErrorCode::DimensionMismatch, "prediction, target and mask lengths differ");
  }
  double count = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (!mask[i]) continue;
    count += 1.0;
    mean += target[i];
  }
  if (count == 0.0) fail(ErrorCode::InvalidArgument, "mask selects no nodes");
  mean /= count;

  FitScore score;
  double total = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (!mask[i]) continue;
    const double r = prediction[i] - target[i];
    score.sse += r * r;
    total += (target[i] - mean) * (target[i] - mean);
  }
  if (total == 0.0) {
    score.r2_defined = false;
    score.r2 = std::numeric_limits<double>::quiet_NaN();
  } else {
    score.r2 = 1.0 - score.sse / total;
  }
  return score;
}

RegressionTask make_regression_task(Graph graph, const SpectralDecomposition& dec, const FilterFn& h,
                                    std::vector<double> input, Mask mask) {
  if (dec.size() != graph.num_nodes()) {
    fail(ErrorCode::DimensionMismatch, "decomposition does not match the graph");
  }
  RegressionTask task{std::move(graph), std::move(input), {}, std::move(mask)};
  task.target = exact_filter_apply(dec, h, task.input);
  validate_task(task);
  return task;
}

RegressionTask make_regression_task(Graph graph, const FilterFn& h, std::vector<double> input, Mask mask) {
  if (graph.num_nodes() > kOracleMaxNodes) {
    fail(ErrorCode::OracleCap, "target synthesis needs the dense oracle, limited to " +
                                   std::to_string(kOracleMaxNodes) + " nodes");
  }
  const NormalizedOperator op(graph);
  const SpectralDecomposition dec = eigendecompose(op);
  return make_regression_task(std::move(graph), dec, h, std::move(input), std::move(mask));
}

Mask grid_interior_mask(std::size_t height, std::size_t width) {
  Mask mask(height * width, 0);
  for (std::size_t r = 1; r + 1 < height; ++r) {
    for (std::size_t c = 1; c + 1 < width; ++c) mask[r * width + c] = 1;
  }
  return mask;
}

RegressionObjective::RegressionObjective(const RegressionTask& task, int order, int layers)
    : task_(&task), op_(task.graph), order_(order), layers_(layers) {
  validate_task(task);
  if (layers != 1 && layers != 2) fail(ErrorCode::InvalidArgument, "layers must be 1 or 2");
  input_basis_ = build_basis_cache(op_, order, as_column(task.input));
}

RegressionObjective::Evaluation RegressionObjective::evaluate(std::span<const double> theta) const {
  if (theta.size() != static_cast<std::size_t>(order_) + 1) {
    fail(ErrorCode::DimensionMismatch, "expected " + std::to_string(order_ + 1) + " coefficients");
  }
  const Mask& mask = task_->mask;
  const std::size_t n = task_->input.size();
  Evaluation out;
  out.gradient.assign(theta.size(), 0.0);

  // Only masked nodes contribute to the residual.
  auto masked_residual = [&](const Matrix& pred) {
    Matrix r = Matrix::Zero(pred.rows(), 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i]) r(static_cast<Eigen::Index>(i), 0) = pred(static_cast<Eigen::Index>(i), 0) - task_->target[i];
    }
    return r;
  };

  const Matrix first = input_basis_.combine(theta);
  if (layers_ == 1) {
    const Matrix r = masked_residual(first);
    out.loss = r.squaredNorm();
    for (std::size_t k = 0; k < theta.size(); ++k) out.gradient[k] = 2.0 * masked_dot(mask, r, input_basis_[k]);
    out.prediction.assign(first.data(), first.data() + n);
    return out;
  }

  // y2 = G y1 with G = sum_k theta_k B_k shared by both layers, so
  // d y2 / d theta_k = B_k y1 + G B_k x and <r, G B_k x> = <G r, B_k x>.
  const BasisCache second_basis = build_basis_cache(op_, order_, first);
  const Matrix second = second_basis.combine(theta);
  const Matrix r = masked_residual(second);
  out.loss = r.squaredNorm();
  const BernCoeffs shared{std::vector<double>(theta.begin(), theta.end())};
  const Matrix back = bernnet_apply_matrix(op_, shared, r);
  for (std::size_t k = 0; k < theta.size(); ++k) {
    out.gradient[k] = 2.0 * (r.col(0).dot(second_basis[k].col(0)) + back.col(0).dot(input_basis_[k].col(0)));
  }
  out.prediction.assign(second.data(), second.data() + n);
  return out;
}

FitReport learn_filter(const RegressionTask& task, const LearnConfig& cfg) {
  if (cfg.order < 0 || cfg.order > kMaxOrder) {
    fail(ErrorCode::OutOfRange, "order " + std::to_string(cfg.order) + " outside [0, " +
                                    std::to_string(kMaxOrder) + "]");
  }
  if (cfg.max_epochs < 1 || cfg.patience < 1 || !(cfg.learning_rate > 0.0)) {
    fail(ErrorCode::InvalidArgument, "epochs, patience and learning rate must be positive");
  }
  const RegressionObjective objective(task, cfg.order, cfg.layers);

  std::vector<double> theta(static_cast<std::size_t>(cfg.order) + 1, 1.0);
  std::vector<double> best_theta = theta;
  double best_loss = std::numeric_limits<double>::infinity();
  Adam adam(theta.size(), AdamConfig{.learning_rate = cfg.learning_rate});

  FitReport report;
  int stall = 0;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const auto eval = objective.evaluate(theta);
    if (!std::isfinite(eval.loss)) {
      fail(ErrorCode::Diverged, "loss became non-finite at epoch " + std::to_string(epoch));
    }
    report.loss_history.push_back(eval.loss);
    if (eval.loss < best_loss) {
      best_loss = eval.loss;
      best_theta = theta;
      report.best_epoch = epoch;
      stall = 0;
    } else if (++stall >= cfg.patience) {
      break;
    }
    adam.step(theta, eval.gradient);
    for (double& t : theta) t = std::max(t, 0.0);
  }

  report.epochs_run = static_cast<int>(report.loss_history.size());
  report.coeffs = BernCoeffs(best_theta);
  report.prediction = objective.evaluate(best_theta).prediction;
  report.score = sse_and_r2(report.prediction, task.target, task.mask);
  return report;
}

}  // namespace bernfilter
