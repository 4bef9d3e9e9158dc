#ifndef BERNFILTER_ADAM_HPP
#define BERNFILTER_ADAM_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace bernfilter {

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction over one flat parameter group.
class Adam {
 public:
  Adam(std::size_t size, AdamConfig config);

  /// params -= lr * m_hat / (sqrt(v_hat) + eps). Gradient length must match.
  void step(std::span<double> params, std::span<const double> grad);

  const AdamConfig& config() const noexcept { return config_; }
  long steps() const noexcept { return t_; }

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  long t_ = 0;
};

}  // namespace bernfilter

#endif
