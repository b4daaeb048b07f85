#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ruq/network.hpp"

namespace ruq {

struct AdamState {
  std::vector<DenseLayer> first_moment;
  std::vector<DenseLayer> second_moment;
  std::uint64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState zeros_like(const Network& net);
};

// One bias-corrected Adam update of every parameter of `net`, in place.
void adam_step(Network& net, const std::vector<DenseLayer>& grads, AdamState& state, double lr);

// Same update on a flat parameter vector (moments sized like params). Used by the scalar
// convergence checks; shares the per-element rule with the network overload.
void adam_step(std::span<double> params, std::span<const double> grads,
               std::span<double> first_moment, std::span<double> second_moment,
               std::uint64_t& step, double lr, double beta1 = 0.9, double beta2 = 0.999,
               double eps = 1e-8);

}  // namespace ruq
