#include "cengcn/optim.hpp"

#include <cmath>

#include "cengcn/error.hpp"

namespace cengcn {

Adam::Adam(AdamOptions options, const std::vector<Matrix>& params) : options_(options) {
  for (const Matrix& p : params) {
    m_.push_back(Matrix::Zero(p.rows(), p.cols()));
    v_.push_back(Matrix::Zero(p.rows(), p.cols()));
  }
}

void Adam::step(std::vector<Matrix>& params, const std::vector<Matrix>& grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) throw ConfigError("Adam: parameter count mismatch");
  ++step_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    const Matrix& g = grads[k];
    if (g.rows() != params[k].rows() || g.cols() != params[k].cols()) throw ConfigError("Adam: gradient shape mismatch");
    m_[k] = b1 * m_[k] + (1.0 - b1) * g;
    v_[k] = b2 * v_[k] + (1.0 - b2) * g.cwiseProduct(g);
    const auto m_hat = m_[k].array() / correction1;
    const auto v_hat = v_[k].array() / correction2;
    params[k].array() -= options_.learning_rate * m_hat / (v_hat.sqrt() + options_.epsilon);
  }
}

}  // namespace cengcn
