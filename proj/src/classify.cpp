#include "bernfilter/classify.hpp"

#include "bernfilter/adam.hpp"
#include "bernfilter/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace bernfilter {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Inverted dropout mask: 0 with probability rate, 1/(1-rate) otherwise.
Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(1.0 - rate);
  const double scale = 1.0 / (1.0 - rate);
  Matrix mask(rows, cols);
  for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = keep(rng) ? scale : 0.0;
  return mask;
}

void check_rate(double rate) {
  if (!(rate >= 0.0 && rate < 1.0)) fail(ErrorCode::InvalidArgument, "dropout rate must lie in [0, 1)");
}

std::size_t mask_count(const Mask& mask) {
  return static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(), [](std::uint8_t m) { return m != 0; }));
}

void uniform_fill(Eigen::Ref<Matrix> m, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = dist(rng);
  }
}

void uniform_fill(RowVector& v, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = dist(rng);
}

std::span<double> flat(Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<double> flat(RowVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<const double> flat(const Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<const double> flat(const RowVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

void validate_dataset(const NodeDataset& data) {
  const std::size_t n = data.graph.num_nodes();
  if (static_cast<std::size_t>(data.features.rows()) != n) {
    fail(ErrorCode::DimensionMismatch, "features have " + std::to_string(data.features.rows()) +
                                           " rows but the graph has " + std::to_string(n) + " nodes");
  }
  if (data.labels.size() != n) {
    fail(ErrorCode::DimensionMismatch, "labels have " + std::to_string(data.labels.size()) +
                                           " entries but the graph has " + std::to_string(n) + " nodes");
  }
  if (data.num_classes < 1) fail(ErrorCode::InvalidArgument, "dataset needs at least one class");
  for (std::size_t i = 0; i < n; ++i) {
    if (data.labels[i] < 0 || data.labels[i] >= data.num_classes) {
      fail(ErrorCode::OutOfRange, "label " + std::to_string(data.labels[i]) + " of node " + std::to_string(i) +
                                      " outside [0, " + std::to_string(data.num_classes) + ")");
    }
  }
  if (!data.features.allFinite()) fail(ErrorCode::NonFinite, "features hold a non-finite value");
}

SplitMasks make_splits(std::size_t n, std::uint64_t seed, double train_ratio, double val_ratio) {
  if (n < 5) fail(ErrorCode::InvalidArgument, "need at least 5 nodes to split, got " + std::to_string(n));
  if (!(train_ratio > 0.0 && val_ratio >= 0.0 && train_ratio + val_ratio < 1.0)) {
    fail(ErrorCode::InvalidArgument, "split ratios must be positive and sum below 1");
  }
  const auto n_train = static_cast<std::size_t>(std::llround(train_ratio * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(std::llround(val_ratio * static_cast<double>(n)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(order[i], order[pick(rng)]);
  }

  SplitMasks s{Mask(n, 0), Mask(n, 0), Mask(n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    Mask& target = i < n_train ? s.train : (i < n_train + n_val ? s.val : s.test);
    target[order[i]] = 1;
  }
  return s;
}

std::vector<int> missing_classes(const NodeDataset& data, const Mask& mask) {
  std::vector<bool> seen(static_cast<std::size_t>(data.num_classes), false);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) seen[static_cast<std::size_t>(data.labels[i])] = true;
  }
  std::vector<int> missing;
  for (int c = 0; c < data.num_classes; ++c) {
    if (!seen[static_cast<std::size_t>(c)]) missing.push_back(c);
  }
  return missing;
}

ModelParams ModelParams::init(std::size_t features, std::size_t hidden, std::size_t classes, int order,
                              std::mt19937_64& rng) {
  if (features == 0 || hidden == 0 || classes == 0) {
    fail(ErrorCode::InvalidArgument, "model dimensions must be positive");
  }
  if (order < 0 || order > kMaxOrder) fail(ErrorCode::OutOfRange, "order outside [0, 64]");
  ModelParams p;
  p.w1.resize(idx(features), idx(hidden));
  p.b1.resize(idx(hidden));
  p.w2.resize(idx(hidden), idx(classes));
  p.b2.resize(idx(classes));
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(features));
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  uniform_fill(p.w1, bound1, rng);
  uniform_fill(p.b1, bound1, rng);
  uniform_fill(p.w2, bound2, rng);
  uniform_fill(p.b2, bound2, rng);
  p.theta.assign(static_cast<std::size_t>(order) + 1, 1.0);
  return p;
}

ForwardPass forward(const ModelParams& params, const NodeDataset& data, const NormalizedOperator& op,
                    bool train_mode, DropoutRates rates, std::mt19937_64& rng) {
  check_rate(rates.linear);
  check_rate(rates.prop);
  if (data.features.cols() != params.w1.rows() || params.w1.cols() != params.w2.rows() ||
      params.b1.size() != params.w1.cols() || params.b2.size() != params.w2.cols() ||
      static_cast<std::size_t>(data.features.rows()) != op.size()) {
    fail(ErrorCode::DimensionMismatch, "model parameters do not match the dataset");
  }
  const bool drop_linear = train_mode && rates.linear > 0.0;
  const bool drop_prop = train_mode && rates.prop > 0.0;

  ForwardPass fp;
  if (drop_linear) {
    fp.input_mask = dropout_mask(data.features.rows(), data.features.cols(), rates.linear, rng);
    fp.input = data.features.cwiseProduct(fp.input_mask);
  } else {
    fp.input = data.features;
  }
  fp.pre = fp.input * params.w1;
  fp.pre.rowwise() += params.b1;
  fp.hidden = fp.pre.cwiseMax(0.0);
  if (drop_linear) {
    fp.hidden_mask = dropout_mask(fp.hidden.rows(), fp.hidden.cols(), rates.linear, rng);
    fp.hidden = fp.hidden.cwiseProduct(fp.hidden_mask);
  }
  fp.prop_input = fp.hidden * params.w2;
  fp.prop_input.rowwise() += params.b2;
  if (drop_prop) {
    fp.prop_mask = dropout_mask(fp.prop_input.rows(), fp.prop_input.cols(), rates.prop, rng);
    fp.prop_input = fp.prop_input.cwiseProduct(fp.prop_mask);
  }
  if (!fp.prop_input.allFinite()) fail(ErrorCode::NonFinite, "non-finite activation before propagation");
  fp.basis = build_basis_cache(op, static_cast<int>(params.theta.size()) - 1, fp.prop_input);
  fp.logits = fp.basis.combine(params.theta);
  return fp;
}

double cross_entropy(const Matrix& logits, const std::vector<int>& labels, const Mask& mask) {
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    const auto row = logits.row(idx(i));
    const double top = row.maxCoeff();
    const double lse = top + std::log((row.array() - top).exp().sum());
    total += lse - row(labels[i]);
    ++count;
  }
  if (count == 0) fail(ErrorCode::InvalidArgument, "mask selects no nodes");
  return total / static_cast<double>(count);
}

double accuracy(const Matrix& logits, const std::vector<int>& labels, const Mask& mask) {
  std::size_t correct = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    Eigen::Index best = 0;
    logits.row(idx(i)).maxCoeff(&best);
    if (best == labels[i]) ++correct;
    ++count;
  }
  if (count == 0) fail(ErrorCode::InvalidArgument, "mask selects no nodes");
  return static_cast<double>(correct) / static_cast<double>(count);
}

LossAndGrads loss_and_grads(const ModelParams& params, const ForwardPass& pass, const NodeDataset& data,
                            const NormalizedOperator& op, const Mask& mask, double weight_decay) {
  const std::size_t count = mask_count(mask);
  if (count == 0) fail(ErrorCode::InvalidArgument, "training mask selects no nodes");
  if (mask.size() != data.labels.size()) fail(ErrorCode::DimensionMismatch, "mask length differs from node count");

  LossAndGrads out;
  out.loss = cross_entropy(pass.logits, data.labels, mask) +
             0.5 * weight_decay * (params.w1.squaredNorm() + params.w2.squaredNorm());

  // d loss / d logits: (softmax - onehot) / count on masked rows.
  Matrix dz = Matrix::Zero(pass.logits.rows(), pass.logits.cols());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    const auto row = pass.logits.row(idx(i));
    const double top = row.maxCoeff();
    RowVector p = (row.array() - top).exp();
    p /= p.sum();
    p(data.labels[i]) -= 1.0;
    dz.row(idx(i)) = p / static_cast<double>(count);
  }

  Gradients& g = out.grads;
  g.theta.resize(params.theta.size());
  for (std::size_t k = 0; k < params.theta.size(); ++k) g.theta[k] = dz.cwiseProduct(pass.basis[k]).sum();

  // Each B_k is symmetric, so the propagation is its own adjoint.
  Matrix df = bernnet_apply_matrix(op, BernCoeffs(params.theta), dz);
  if (pass.prop_mask.size() > 0) df = df.cwiseProduct(pass.prop_mask);

  g.w2 = pass.hidden.transpose() * df + weight_decay * params.w2;
  g.b2 = df.colwise().sum();
  Matrix dh = df * params.w2.transpose();
  if (pass.hidden_mask.size() > 0) dh = dh.cwiseProduct(pass.hidden_mask);
  dh = dh.cwiseProduct((pass.pre.array() > 0.0).cast<double>().matrix());
  g.w1 = pass.input.transpose() * dh + weight_decay * params.w1;
  g.b1 = dh.colwise().sum();
  return out;
}

TrainResult train(const NodeDataset& data, const SplitMasks& splits, const TrainConfig& cfg) {
  validate_dataset(data);
  const std::size_t n = data.graph.num_nodes();
  if (splits.train.size() != n || splits.val.size() != n || splits.test.size() != n) {
    fail(ErrorCode::DimensionMismatch, "split masks do not match the node count");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if ((splits.train[i] != 0) + (splits.val[i] != 0) + (splits.test[i] != 0) > 1) {
      fail(ErrorCode::InvalidArgument, "split masks overlap at node " + std::to_string(i));
    }
  }
  if (mask_count(splits.train) == 0 || mask_count(splits.val) == 0 || mask_count(splits.test) == 0) {
    fail(ErrorCode::InvalidArgument, "every split must contain at least one node");
  }
  if (cfg.max_epochs < 1 || cfg.patience < 1 || cfg.hidden < 1) {
    fail(ErrorCode::InvalidArgument, "epochs, patience and hidden size must be positive");
  }
  if (cfg.lr_linear < 0.0 || cfg.lr_prop < 0.0) fail(ErrorCode::InvalidArgument, "learning rates must be >= 0");

  const NormalizedOperator op(data.graph);
  std::mt19937_64 rng(cfg.seed);
  ModelParams params = ModelParams::init(static_cast<std::size_t>(data.features.cols()),
                                         static_cast<std::size_t>(cfg.hidden),
                                         static_cast<std::size_t>(data.num_classes), cfg.order, rng);
  const DropoutRates rates{cfg.dropout_linear, cfg.dropout_prop};

  const AdamConfig linear{.learning_rate = cfg.lr_linear};
  Adam opt_w1(static_cast<std::size_t>(params.w1.size()), linear);
  Adam opt_b1(static_cast<std::size_t>(params.b1.size()), linear);
  Adam opt_w2(static_cast<std::size_t>(params.w2.size()), linear);
  Adam opt_b2(static_cast<std::size_t>(params.b2.size()), linear);
  Adam opt_theta(params.theta.size(), AdamConfig{.learning_rate = cfg.lr_prop});

  TrainResult result;
  result.missing_train_classes = missing_classes(data, splits.train);
  result.params = params;
  double best_val = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const ForwardPass pass = forward(params, data, op, true, rates, rng);
    const LossAndGrads lg = loss_and_grads(params, pass, data, op, splits.train, cfg.weight_decay);
    if (!std::isfinite(lg.loss)) {
      fail(ErrorCode::Diverged, "training loss became non-finite at epoch " + std::to_string(epoch));
    }
    opt_w1.step(flat(params.w1), flat(lg.grads.w1));
    opt_b1.step(flat(params.b1), flat(lg.grads.b1));
    opt_w2.step(flat(params.w2), flat(lg.grads.w2));
    opt_b2.step(flat(params.b2), flat(lg.grads.b2));
    opt_theta.step(params.theta, lg.grads.theta);
    for (double& t : params.theta) t = std::max(t, 0.0);

    const ForwardPass eval = forward(params, data, op, false, rates, rng);
    EpochMetrics m;
    m.train_loss = lg.loss;
    m.val_loss = cross_entropy(eval.logits, data.labels, splits.val);
    m.val_accuracy = accuracy(eval.logits, data.labels, splits.val);
    if (!std::isfinite(m.val_loss)) {
      fail(ErrorCode::Diverged, "validation loss became non-finite at epoch " + std::to_string(epoch));
    }
    result.history.push_back(m);

    if (m.val_loss < best_val) {
      best_val = m.val_loss;
      result.params = params;
      result.best_epoch = epoch;
      result.val_accuracy = m.val_accuracy;
      stall = 0;
    } else if (++stall >= cfg.patience) {
      break;
    }
  }
  result.epochs_run = static_cast<int>(result.history.size());

  const ForwardPass best = forward(result.params, data, op, false, rates, rng);
  result.test_accuracy = accuracy(best.logits, data.labels, splits.test);
  return result;
}

}  // namespace bernfilter
