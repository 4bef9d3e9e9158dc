#ifndef BERNFILTER_CLASSIFY_HPP
#define BERNFILTER_CLASSIFY_HPP

#include "bernfilter/dense.hpp"
#include "bernfilter/graph.hpp"
#include "bernfilter/propagation.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace bernfilter {

struct NodeDataset {
  Graph graph;
  Matrix features;  // n x d
  std::vector<int> labels;
  int num_classes = 0;
};

/// Throws on shape mismatch, non-finite features or labels outside
/// [0, num_classes).
void validate_dataset(const NodeDataset& data);

struct SplitMasks {
  Mask train;
  Mask val;
  Mask test;
};

/// Random disjoint train/val/test cover of n nodes. Train gets
/// round(train_ratio * n) nodes, val round(val_ratio * n), test the rest.
SplitMasks make_splits(std::size_t n, std::uint64_t seed, double train_ratio = 0.6, double val_ratio = 0.2);

/// Classes with no node in the mask.
std::vector<int> missing_classes(const NodeDataset& data, const Mask& mask);

/// Two-layer MLP f(X) = relu(X W1 + b1) W2 + b2 followed by the Bernstein
/// propagation with coefficients theta.
struct ModelParams {
  Matrix w1;     // d x h
  RowVector b1;  // h
  Matrix w2;     // h x C
  RowVector b2;  // C
  std::vector<double> theta;

  /// Linear layers uniform in +-1/sqrt(fan_in); theta all ones.
  static ModelParams init(std::size_t features, std::size_t hidden, std::size_t classes, int order,
                          std::mt19937_64& rng);
};

struct DropoutRates {
  double linear = 0.0;
  double prop = 0.0;
};

/// Activations kept for the backward pass.
struct ForwardPass {
  Matrix input;         // X after dropout
  Matrix input_mask;    // empty when no dropout was applied
  Matrix pre;           // X' W1 + b1
  Matrix hidden;        // relu(pre) after dropout
  Matrix hidden_mask;
  Matrix prop_input;    // F after dropout
  Matrix prop_mask;
  BasisCache basis;     // B_k F'
  Matrix logits;
};

/// Dropout (inverted, drawn from rng) is applied only when train_mode is set.
ForwardPass forward(const ModelParams& params, const NodeDataset& data, const NormalizedOperator& op,
                    bool train_mode, DropoutRates rates, std::mt19937_64& rng);

struct Gradients {
  Matrix w1;
  RowVector b1;
  Matrix w2;
  RowVector b2;
  std::vector<double> theta;
};

struct LossAndGrads {
  double loss = 0.0;
  Gradients grads;
};

/// Mean softmax cross-entropy over masked nodes plus
/// weight_decay * (|W1|^2 + |W2|^2) / 2, with gradients for every parameter.
LossAndGrads loss_and_grads(const ModelParams& params, const ForwardPass& pass, const NodeDataset& data,
                            const NormalizedOperator& op, const Mask& mask, double weight_decay);

/// Mean cross-entropy of logits over masked nodes (no regularization).
double cross_entropy(const Matrix& logits, const std::vector<int>& labels, const Mask& mask);

/// Fraction of masked nodes whose argmax logit equals the label.
double accuracy(const Matrix& logits, const std::vector<int>& labels, const Mask& mask);

struct TrainConfig {
  double lr_linear = 0.01;
  double lr_prop = 0.01;
  double dropout_linear = 0.5;
  double dropout_prop = 0.5;
  double weight_decay = 0.0005;
  int order = 10;
  int hidden = 64;
  int max_epochs = 1000;
  /// Early stop after this many epochs without a lower validation loss.
  int patience = 200;
  std::uint64_t seed = 42;
};

struct EpochMetrics {
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainResult {
  ModelParams params;  // from the best-validation epoch
  std::vector<EpochMetrics> history;
  double val_accuracy = 0.0;
  /// Micro-F1 on the test mask; equal to accuracy for single-label data.
  double test_accuracy = 0.0;
  int best_epoch = 0;
  int epochs_run = 0;
  std::vector<int> missing_train_classes;
};

/// Adam with separate learning rates for the linear layers and theta; theta
/// is clamped at zero after every step.
TrainResult train(const NodeDataset& data, const SplitMasks& splits, const TrainConfig& cfg);

}  // namespace bernfilter

#endif
