#include "ruq/train.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "ruq/adam.hpp"
#include "ruq/errors.hpp"
#include "ruq/rng.hpp"

namespace ruq {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
}

TrainResult train(Network net, const Dataset& data, const LossKind& loss, const TrainConfig& cfg) {
  cfg.validate();
  data.validate();
  if (data.size() == 0) throw ConfigError("train: dataset '" + data.name + "' is empty");
  if (data.features.cols() != net.input_width()) {
    throw InvalidInput("train: dataset has " + std::to_string(data.features.cols()) +
                       " features, network expects " + std::to_string(net.input_width()));
  }

  TrainResult result{std::move(net), {}};
  result.history.reserve(cfg.iterations);
  AdamState adam = AdamState::zeros_like(result.net);
  Rng rng(cfg.seed);

  const std::size_t n = data.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t cursor = n;  // forces a shuffle before the first batch
  std::vector<std::size_t> batch;
  batch.reserve(cfg.batch_size);

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    if (cursor >= n) {
      for (std::size_t i = n - 1; i > 0; --i) {
        std::swap(order[i], order[static_cast<std::size_t>(rng.index(i + 1))]);
      }
      cursor = 0;
    }
    const std::size_t take = std::min(cfg.batch_size, n - cursor);
    batch.assign(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                 order.begin() + static_cast<std::ptrdiff_t>(cursor + take));
    cursor += take;

    const Tensor2 x = data.features.gather_rows(batch);
    const Tensor2 y = data.targets.gather_rows(batch);
    Gradients g = backward(result.net, x, y, loss, /*want_input_grad=*/false);
    if (!std::isfinite(g.loss)) throw TrainingDivergence(it, std::move(result.history));
    result.history.push_back(g.loss);
    adam_step(result.net, g.layers, adam, cfg.learning_rate);
  }
  return result;
}

}  // namespace ruq
