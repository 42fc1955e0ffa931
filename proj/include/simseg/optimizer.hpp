#pragma once

#include <cstddef>
#include <vector>

namespace simseg {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam(size_t n_params, const AdamConfig& cfg);

  // One update with bias-corrected moments.
  void step(std::vector<double>& params, const std::vector<double>& grad);

  int64_t steps_taken() const { return t_; }

 private:
  AdamConfig cfg_;
  std::vector<double> m_, v_;
  int64_t t_ = 0;
};

}  // namespace simseg
