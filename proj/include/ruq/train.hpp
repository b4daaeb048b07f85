#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ruq/data.hpp"
#include "ruq/likelihoods.hpp"
#include "ruq/network.hpp"

namespace ruq {

struct TrainConfig {
  double learning_rate = 5e-3;
  std::size_t batch_size = 128;
  std::size_t iterations = 5000;  // Adam steps; 0 returns the network unchanged
  std::uint64_t seed = 0;         // drives mini-batch shuffling

  // Throws ConfigError unless learning_rate > 0 and batch_size ≥ 1.
  void validate() const;
};

struct TrainResult {
  Network net;
  std::vector<double> history;  // mean batch loss per iteration
};

// Mini-batch Adam on already-standardized data. Each epoch is a fresh seeded permutation;
// the final short batch of an epoch is kept. Throws TrainingDivergence on a non-finite loss.
TrainResult train(Network net, const Dataset& data, const LossKind& loss, const TrainConfig& cfg);

}  // namespace ruq
