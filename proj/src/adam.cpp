#include "ruq/adam.hpp"

#include <cmath>

#include "ruq/errors.hpp"

namespace ruq {

namespace {

struct BiasCorrection {
  double first;
  double second;
};

BiasCorrection correction(std::uint64_t step, double beta1, double beta2) {
  const double t = static_cast<double>(step);
  return {1.0 - std::pow(beta1, t), 1.0 - std::pow(beta2, t)};
}

void update(std::span<double> p, std::span<const double> g, std::span<double> m,
            std::span<double> v, BiasCorrection bc, double lr, double beta1, double beta2,
            double eps) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    m[k] = beta1 * m[k] + (1.0 - beta1) * g[k];
    v[k] = beta2 * v[k] + (1.0 - beta2) * g[k] * g[k];
    const double m_hat = m[k] / bc.first;
    const double v_hat = v[k] / bc.second;
    p[k] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

}  // namespace

AdamState AdamState::zeros_like(const Network& net) {
  AdamState s;
  s.first_moment = ruq::zeros_like(net);
  s.second_moment = ruq::zeros_like(net);
  return s;
}

void adam_step(Network& net, const std::vector<DenseLayer>& grads, AdamState& state, double lr) {
  auto& layers = net.layers();
  if (grads.size() != layers.size() || state.first_moment.size() != layers.size() ||
      state.second_moment.size() != layers.size()) {
    throw InvalidInput("adam_step: gradient/moment layer count mismatch");
  }
  ++state.step;
  const BiasCorrection bc = correction(state.step, state.beta1, state.beta2);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    update(layers[i].weights.values(), grads[i].weights.values(),
           state.first_moment[i].weights.values(), state.second_moment[i].weights.values(), bc, lr,
           state.beta1, state.beta2, state.eps);
    update(layers[i].bias, grads[i].bias, state.first_moment[i].bias,
           state.second_moment[i].bias, bc, lr, state.beta1, state.beta2, state.eps);
  }
}

void adam_step(std::span<double> params, std::span<const double> grads,
               std::span<double> first_moment, std::span<double> second_moment,
               std::uint64_t& step, double lr, double beta1, double beta2, double eps) {
  if (grads.size() != params.size() || first_moment.size() != params.size() ||
      second_moment.size() != params.size()) {
    throw InvalidInput("adam_step: size mismatch");
  }
  ++step;
  update(params, grads, first_moment, second_moment, correction(step, beta1, beta2), lr, beta1,
         beta2, eps);
}

}  // namespace ruq
