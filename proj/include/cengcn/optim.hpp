#pragma once

#include <vector>

#include "cengcn/types.hpp"

namespace cengcn {

struct AdamOptions {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected Adam over a list of dense parameters.
class Adam {
 public:
  Adam(AdamOptions options, const std::vector<Matrix>& params);

  void step(std::vector<Matrix>& params, const std::vector<Matrix>& grads);

  long steps() const noexcept { return step_; }
  const AdamOptions& options() const noexcept { return options_; }
  const std::vector<Matrix>& first_moment() const noexcept { return m_; }
  const std::vector<Matrix>& second_moment() const noexcept { return v_; }

 private:
  AdamOptions options_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  long step_ = 0;
};

}  // namespace cengcn
