#ifndef BERNFILTER_FILTER_LEARN_HPP
#define BERNFILTER_FILTER_LEARN_HPP

#include "bernfilter/bernstein.hpp"
#include "bernfilter/dense.hpp"
#include "bernfilter/graph.hpp"
#include "bernfilter/propagation.hpp"
#include "bernfilter/spectral.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace bernfilter {

/// Input signal, filtered target and the nodes that count toward the loss.
struct RegressionTask {
  Graph graph;
  std::vector<double> input;
  std::vector<double> target;
  Mask mask;
};

/// Throws unless sizes agree with the graph, values are finite and at least
/// one node is masked in.
void validate_task(const RegressionTask& task);

struct LearnConfig {
  int order = 10;
  double learning_rate = 0.01;
  int max_epochs = 2000;
  /// Stop after this many epochs without a new best loss.
  int patience = 100;
  /// 1, or 2 for two stacked propagation layers sharing theta.
  int layers = 1;
};

struct FitScore {
  double sse = 0.0;
  double r2 = 0.0;
  /// False when the masked target has zero variance; r2 is then NaN.
  bool r2_defined = true;
};

struct FitReport {
  BernCoeffs coeffs = BernCoeffs::constant(0, 1.0);
  FitScore score;
  std::vector<double> prediction;
  std::vector<double> loss_history;
  int epochs_run = 0;
  int best_epoch = 0;
};

/// SSE = sum over masked nodes of (pred - target)^2, R^2 = 1 - SSE / SST.
FitScore sse_and_r2(std::span<const double> prediction, std::span<const double> target, const Mask& mask);

/// Target = exact spectral filtering of x by h through the dense oracle.
RegressionTask make_regression_task(Graph graph, const FilterFn& h, std::vector<double> input, Mask mask);

/// Same, reusing a decomposition of the graph's Laplacian.
RegressionTask make_regression_task(Graph graph, const SpectralDecomposition& dec, const FilterFn& h,
                                    std::vector<double> input, Mask mask);

/// Grid mask with the outer ring of nodes excluded.
Mask grid_interior_mask(std::size_t height, std::size_t width);

/// Masked SSE of the (one- or two-layer) Bernstein filter and its exact
/// gradient with respect to theta.
class RegressionObjective {
 public:
  /// The task must outlive the objective.
  RegressionObjective(const RegressionTask& task, int order, int layers);

  struct Evaluation {
    double loss = 0.0;
    std::vector<double> gradient;
    std::vector<double> prediction;
  };

  Evaluation evaluate(std::span<const double> theta) const;

  int order() const noexcept { return order_; }

 private:
  const RegressionTask* task_;
  NormalizedOperator op_;
  int order_;
  int layers_;
  BasisCache input_basis_;
};

/// Fits theta >= 0 by Adam on the masked SSE, clamping at zero after every
/// step, starting from the all-pass filter. Returns the best-loss theta.
FitReport learn_filter(const RegressionTask& task, const LearnConfig& cfg);

}  // namespace bernfilter

#endif
