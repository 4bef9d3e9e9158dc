#include "bernfilter/error.hpp"
#include "bernfilter/filter_learn.hpp"
#include "bernfilter/dataset_io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace bernfilter;

namespace {

RegressionTask random_task(std::size_t n, std::mt19937_64& rng) {
  RegressionTask task;
  task.graph = bftest::random_graph(n, 0.3, rng);
  task.input = bftest::random_vector(n, rng);
  task.target = bftest::random_vector(n, rng);
  task.mask.assign(n, 1);
  for (std::size_t i = 0; i < n; i += 3) task.mask[i] = 0;
  return task;
}

double sup_gap(const BernCoeffs& a, const BernCoeffs& b) {
  double m = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double l = 2.0 * i / 1000.0;
    m = std::max(m, std::abs(eval_filter(a, l) - eval_filter(b, l)));
  }
  return m;
}

}  // namespace

TEST(Score, Examples) {
  const Mask all{1, 1};
  const auto s = sse_and_r2(std::vector<double>{0, 1}, std::vector<double>{0, 2}, all);
  EXPECT_DOUBLE_EQ(s.sse, 1.0);
  EXPECT_DOUBLE_EQ(s.r2, 0.5);
  EXPECT_TRUE(s.r2_defined);

  const std::vector<double> target{1, 4, 2, 5};
  const Mask m4(4, 1);
  const auto exact = sse_and_r2(target, target, m4);
  EXPECT_EQ(exact.sse, 0.0);
  EXPECT_EQ(exact.r2, 1.0);
  const auto mean = sse_and_r2(std::vector<double>(4, 3.0), target, m4);
  EXPECT_NEAR(mean.r2, 0.0, 1e-15);

  const auto flat = sse_and_r2(std::vector<double>{1, 2}, std::vector<double>{3, 3}, all);
  EXPECT_FALSE(flat.r2_defined);
  EXPECT_TRUE(std::isnan(flat.r2));
  EXPECT_DOUBLE_EQ(flat.sse, 5.0);

  // Masked-out entries do not count.
  const auto masked = sse_and_r2(std::vector<double>{0, 1, 100}, std::vector<double>{0, 2, 0}, Mask{1, 1, 0});
  EXPECT_DOUBLE_EQ(masked.sse, 1.0);

  EXPECT_THROW(sse_and_r2(std::vector<double>{0}, std::vector<double>{0, 1}, all), Error);
  EXPECT_THROW(sse_and_r2(std::vector<double>{0, 1}, std::vector<double>{0, 1}, Mask{0, 0}), Error);
}

TEST(RegressionTask, Construction) {
  const Graph g = grid_graph(4, 4);
  const auto x = synth_grid_signal(4, 4, 3, GridSignalKind::Random);
  const auto id = make_regression_task(g, named_filter("all_pass"), x, Mask(16, 1));
  EXPECT_LT(bftest::max_abs_diff(id.target, x), 1e-12);

  // A constant on a regular-degree graph is the lambda = 0 eigenvector, which
  // exp_high sends to 1 - exp(0) = 0.
  const Graph ring = cycle_graph(8);
  const auto hp = make_regression_task(ring, named_filter("exp_high"), std::vector<double>(8, 1.0), Mask(8, 1));
  for (double v : hp.target) EXPECT_NEAR(v, 0.0, 1e-12);

  EXPECT_THROW(make_regression_task(g, named_filter("all_pass"), x, Mask(16, 0)), Error);
  EXPECT_THROW(make_regression_task(g, named_filter("all_pass"), std::vector<double>(3, 0.0), Mask(16, 1)), Error);
  try {
    make_regression_task(cycle_graph(kOracleMaxNodes + 1), named_filter("all_pass"),
                         std::vector<double>(kOracleMaxNodes + 1, 0.0), Mask(kOracleMaxNodes + 1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OracleCap);
  }
}

TEST(RegressionTask, InteriorMask) {
  const Mask m = grid_interior_mask(4, 5);
  std::size_t count = 0;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 5; ++c) {
      const bool interior = r > 0 && r < 3 && c > 0 && c < 4;
      EXPECT_EQ(m[r * 5 + c] != 0, interior);
      count += m[r * 5 + c];
    }
  }
  EXPECT_EQ(count, 6u);

  // SSE counts interior nodes only.
  const Graph g = grid_graph(4, 5);
  const auto x = synth_grid_signal(4, 5, 1, GridSignalKind::Random);
  auto task = make_regression_task(g, named_filter("all_pass"), x, m);
  for (std::size_t i = 0; i < 20; ++i) {
    if (!m[i]) task.target[i] += 10.0;
  }
  const RegressionObjective obj(task, 3, 1);
  EXPECT_NEAR(obj.evaluate(std::vector<double>(4, 1.0)).loss, 0.0, 1e-20);
}

class GradientCheck : public ::testing::TestWithParam<int> {};

TEST_P(GradientCheck, MatchesCentralDifferences) {
  const int layers = GetParam();
  std::mt19937_64 rng(107 + static_cast<unsigned>(layers));
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 5 + rng() % 11;
    const auto task = random_task(n, rng);
    const int order = 1 + static_cast<int>(rng() % 4);
    const RegressionObjective obj(task, order, layers);
    const auto theta = bftest::random_vector(static_cast<std::size_t>(order) + 1, rng, 0.0, 1.5);
    const auto eval = obj.evaluate(theta);
    const double h = 1e-5;
    for (std::size_t k = 0; k < theta.size(); ++k) {
      auto plus = theta;
      auto minus = theta;
      plus[k] += h;
      minus[k] -= h;
      const double fd = (obj.evaluate(plus).loss - obj.evaluate(minus).loss) / (2.0 * h);
      EXPECT_NEAR(eval.gradient[k], fd, 1e-4 * std::max(1.0, std::abs(fd))) << "layers=" << layers << " k=" << k;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Layers, GradientCheck, ::testing::Values(1, 2));

TEST(RegressionObjective, TwoLayersAppliesFilterTwice) {
  std::mt19937_64 rng(109);
  const auto task = random_task(12, rng);
  const RegressionObjective obj(task, 3, 2);
  const std::vector<double> theta{0.3, 0.9, 0.1, 0.6};
  const NormalizedOperator op(task.graph);
  const auto once = bernnet_apply(op, BernCoeffs(theta), task.input);
  const auto twice = bernnet_apply(op, BernCoeffs(theta), once);
  EXPECT_LT(bftest::max_abs_diff(obj.evaluate(theta).prediction, twice), 1e-14);
  EXPECT_THROW(RegressionObjective(task, 3, 3), Error);
  EXPECT_THROW(obj.evaluate(std::vector<double>{1, 1}), Error);
}

TEST(LearnFilter, AllPassTargetIsRecovered) {
  const Graph g = grid_graph(6, 6);
  const auto x = synth_grid_signal(6, 6, 5, GridSignalKind::Random);
  const auto task = make_regression_task(g, named_filter("all_pass"), x, Mask(36, 1));
  const auto fit = learn_filter(task, LearnConfig{.order = 5});
  EXPECT_LE(fit.score.sse, 1e-6);
  for (int i = 0; i <= 100; ++i) EXPECT_NEAR(eval_filter(fit.coeffs, 2.0 * i / 100.0), 1.0, 0.05);
}

TEST(LearnFilter, RealizableTarget) {
  const Graph g = grid_graph(7, 7);
  const NormalizedOperator op(g);
  const auto x = synth_grid_signal(7, 7, 9, GridSignalKind::Random);
  const BernCoeffs truth({0.9, 0.2, 0.0, 0.7, 0.4});
  RegressionTask task{g, x, bernnet_apply(op, truth, x), Mask(49, 1)};
  const auto fit = learn_filter(task, LearnConfig{.order = 4, .max_epochs = 20000, .patience = 500});
  EXPECT_LE(fit.score.sse, 1e-6) << "epochs " << fit.epochs_run;
  EXPECT_LE(sup_gap(fit.coeffs, truth), 0.02);
  for (double t : fit.coeffs.theta()) EXPECT_GE(t, 0.0);
}

TEST(LearnFilter, LossDecreasesAndStaysNonNegative) {
  const Graph g = grid_graph(8, 8);
  const auto x = synth_grid_signal(8, 8, 11, GridSignalKind::Random);
  const auto task = make_regression_task(g, named_filter("exp_high"), x, grid_interior_mask(8, 8));
  const auto fit = learn_filter(task, LearnConfig{.max_epochs = 400});
  ASSERT_GT(fit.loss_history.size(), 200u);
  EXPECT_LT(fit.loss_history[200], fit.loss_history[0]);
  for (double t : fit.coeffs.theta()) EXPECT_GE(t, 0.0);
  EXPECT_TRUE(validate_filter(fit.coeffs).nonneg_ok);
  EXPECT_EQ(fit.prediction.size(), 64u);
  EXPECT_LE(fit.best_epoch, fit.epochs_run);
}

TEST(LearnFilter, ExpLowOnDeskGrid) {
  const Graph g = grid_graph(20, 20);
  const auto x = synth_grid_signal(20, 20, 2024, GridSignalKind::Random);
  const auto task = make_regression_task(g, named_filter("exp_low"), x, grid_interior_mask(20, 20));
  const auto fit = learn_filter(task, LearnConfig{});
  EXPECT_GE(fit.score.r2, 0.95);
}

TEST(LearnFilter, EarlyStoppingAndErrors) {
  const Graph g = grid_graph(4, 4);
  const auto x = synth_grid_signal(4, 4, 5, GridSignalKind::Random);
  const auto task = make_regression_task(g, named_filter("all_pass"), x, Mask(16, 1));
  // Already optimal at theta = 1, so the loss never improves after epoch 0.
  const auto fit = learn_filter(task, LearnConfig{.order = 3, .patience = 7});
  EXPECT_EQ(fit.best_epoch, 0);
  EXPECT_EQ(fit.epochs_run, 8);

  EXPECT_THROW(learn_filter(task, LearnConfig{.order = 65}), Error);
  EXPECT_THROW(learn_filter(task, LearnConfig{.learning_rate = 0.0}), Error);
  EXPECT_THROW(learn_filter(task, LearnConfig{.layers = 0}), Error);

  RegressionTask huge{g, std::vector<double>(16, 1e200), std::vector<double>(16, -1e200), Mask(16, 1)};
  try {
    learn_filter(huge, LearnConfig{.order = 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Diverged);
  }
}
