#include "ruq/network.hpp"

#include <cmath>
#include <string>

#include "ruq/errors.hpp"
#include "ruq/kernels.hpp"
#include "ruq/rng.hpp"

namespace ruq {

namespace {

void relu_inplace(Tensor2& t) {
  for (double& v : t.values()) v = v > 0.0 ? v : 0.0;
}

Tensor2 affine(const DenseLayer& layer, const Tensor2& x) {
  Tensor2 z(x.rows(), layer.out());
  kernels::parallel::affine({x.rows(), layer.in(), layer.out()}, x.values(),
                            layer.weights.values(), layer.bias, z.values());
  return z;
}

}  // namespace

Network::Network(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw InvalidInput("Network: at least one layer required");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.bias.size() != l.out()) {
      throw InvalidInput("Network: layer " + std::to_string(i) + " bias length mismatch");
    }
    if (i > 0 && layers_[i - 1].out() != l.in()) {
      throw InvalidInput("Network: layer " + std::to_string(i) + " input width " +
                         std::to_string(l.in()) + " does not chain with previous output " +
                         std::to_string(layers_[i - 1].out()));
    }
  }
}

std::size_t Network::input_width() const { return layers_.empty() ? 0 : layers_.front().in(); }

std::size_t Network::output_width() const { return layers_.empty() ? 0 : layers_.back().out(); }

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
  return n;
}

Network init_he(const NetworkPlan& plan, std::uint64_t seed) {
  if (plan.input_width == 0) throw InvalidInput("init_he: input width must be positive");
  if (plan.head_width != 2 && plan.head_width != 4) {
    throw InvalidInput("init_he: head width must be 2 or 4");
  }
  if (plan.hidden_layers > 0 && plan.hidden_width == 0) {
    throw InvalidInput("init_he: hidden width must be positive");
  }
  std::vector<std::size_t> widths{plan.input_width};
  for (std::size_t i = 0; i < plan.hidden_layers; ++i) widths.push_back(plan.hidden_width);
  widths.push_back(plan.head_width);

  Rng rng(seed);
  std::vector<DenseLayer> layers;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    const std::size_t fan_in = widths[i];
    const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
    DenseLayer layer{Tensor2(fan_in, widths[i + 1]), std::vector<double>(widths[i + 1], 0.0)};
    for (double& w : layer.weights.values()) w = rng.normal(0.0, stddev);
    layers.push_back(std::move(layer));
  }
  return Network(std::move(layers));
}

Tensor2 forward(const Network& net, const Tensor2& x) {
  if (x.cols() != net.input_width()) {
    throw InvalidInput("forward: input has " + std::to_string(x.cols()) +
                       " columns, network expects " + std::to_string(net.input_width()));
  }
  const auto& layers = net.layers();
  Tensor2 a = affine(layers.front(), x);
  for (std::size_t i = 1; i < layers.size(); ++i) {
    relu_inplace(a);
    a = affine(layers[i], a);
  }
  return a;
}

std::vector<DenseLayer> zeros_like(const Network& net) {
  std::vector<DenseLayer> out;
  out.reserve(net.layers().size());
  for (const auto& l : net.layers()) {
    out.push_back({Tensor2(l.in(), l.out()), std::vector<double>(l.out(), 0.0)});
  }
  return out;
}

Gradients backward(const Network& net, const Tensor2& x, const Tensor2& y, const LossKind& loss,
                   bool want_input_grad) {
  if (x.cols() != net.input_width()) {
    throw InvalidInput("backward: input has " + std::to_string(x.cols()) +
                       " columns, network expects " + std::to_string(net.input_width()));
  }
  if (y.rows() != x.rows() || y.cols() != 1) {
    throw InvalidInput("backward: targets must be rows × 1 and match the input rows");
  }
  if (net.output_width() != head_width(loss.family) || loss.family == Family::ensemble) {
    throw InvalidInput("backward: network head width does not match the loss family");
  }
  const auto& layers = net.layers();
  const std::size_t depth = layers.size();
  const std::size_t rows = x.rows();

  // activations[i] is the input to layer i; activations[depth] is the head output.
  std::vector<Tensor2> activations;
  activations.reserve(depth + 1);
  activations.push_back(x);
  for (std::size_t i = 0; i < depth; ++i) {
    Tensor2 z = affine(layers[i], activations.back());
    if (i + 1 < depth) relu_inplace(z);
    activations.push_back(std::move(z));
  }

  Gradients grads;
  grads.layers = zeros_like(net);

  const Tensor2& head = activations.back();
  Tensor2 delta(rows, head.cols());
  const double inv_rows = 1.0 / static_cast<double>(rows);
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    total += loss_and_grad(loss, head.row(r), y(r, 0), delta.row(r));
  }
  for (double& v : delta.values()) v *= inv_rows;
  grads.loss = total * inv_rows;

  for (std::size_t i = depth; i-- > 0;) {
    const DenseLayer& layer = layers[i];
    const Tensor2& input = activations[i];
    const kernels::Dims dims{rows, layer.in(), layer.out()};
    kernels::parallel::weight_grad(dims, input.values(), delta.values(),
                                   grads.layers[i].weights.values());
    kernels::parallel::bias_grad(dims, delta.values(), grads.layers[i].bias);
    if (i == 0 && !want_input_grad) break;
    Tensor2 upstream(rows, layer.in());
    kernels::parallel::input_grad(dims, delta.values(), layer.weights.values(),
                                  upstream.values());
    if (i > 0) {
      // ReLU derivative, 0 at the kink; the stored activation is max(z, 0).
      const auto act = input.values();
      auto up = upstream.values();
      for (std::size_t k = 0; k < up.size(); ++k) {
        if (!(act[k] > 0.0)) up[k] = 0.0;
      }
    } else {
      grads.input = std::move(upstream);
      break;
    }
    delta = std::move(upstream);
  }
  return grads;
}

}  // namespace ruq
