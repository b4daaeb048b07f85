#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ruq/likelihoods.hpp"
#include "ruq/tensor.hpp"

namespace ruq {

// Fully connected layer; weights are stored input-major (in × out).
struct DenseLayer {
  Tensor2 weights;
  std::vector<double> bias;

  std::size_t in() const noexcept { return weights.rows(); }
  std::size_t out() const noexcept { return weights.cols(); }

  bool operator==(const DenseLayer&) const = default;
};

// Layer stack with ReLU on every hidden layer and identity on the output layer.
class Network {
 public:
  Network() = default;
  // Throws InvalidInput if adjacent widths do not chain or a bias length is wrong.
  explicit Network(std::vector<DenseLayer> layers);

  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::vector<DenseLayer>& layers() noexcept { return layers_; }

  std::size_t input_width() const;
  std::size_t output_width() const;
  std::size_t parameter_count() const;

  bool operator==(const Network&) const = default;

 private:
  std::vector<DenseLayer> layers_;
};

struct NetworkPlan {
  std::size_t input_width = 1;
  std::size_t hidden_layers = 4;
  std::size_t hidden_width = 100;
  std::size_t head_width = 2;  // 2 (Gaussian, Laplace) or 4 (Evidential)
};

// Weights ~ N(0, 2 / fan_in) from the seeded generator, biases exactly zero.
Network init_he(const NetworkPlan& plan, std::uint64_t seed);

// Raw head outputs, x.rows() × output_width. Throws InvalidInput on width mismatch.
Tensor2 forward(const Network& net, const Tensor2& x);

struct Gradients {
  std::vector<DenseLayer> layers;  // same shapes as the network's parameters
  Tensor2 input;                   // ∂loss/∂x; empty when not requested
  double loss = 0.0;               // mean per-sample loss over the batch
};

// Mean loss over the batch and its gradients. y is rows × 1.
// Throws InvalidInput on shape mismatch; a non-finite loss is returned as-is.
Gradients backward(const Network& net, const Tensor2& x, const Tensor2& y, const LossKind& loss,
                   bool want_input_grad = true);

// Parameter-shaped zeros.
std::vector<DenseLayer> zeros_like(const Network& net);

}  // namespace ruq
