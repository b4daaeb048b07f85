#pragma once

#include <vector>

#include "ruq/data.hpp"
#include "ruq/likelihoods.hpp"
#include "ruq/metrics.hpp"
#include "ruq/model.hpp"
#include "ruq/network.hpp"

namespace ruq {

// x' = x + ε·sign(∂ℓ/∂x), sign(0) = 0. x and y are in standardized units.
Tensor2 fgsm(const Network& net, const Tensor2& x, const Tensor2& y, const LossKind& loss,
             double epsilon);

// Ensemble-aware variant: the gradient is that of the summed member losses.
Tensor2 fgsm(const Predictor& model, const Tensor2& x, const Tensor2& y, double epsilon);

// Apply ε·sign(gradient) to x.
Tensor2 sign_step(const Tensor2& x, const Tensor2& gradient, double epsilon);

struct AttackConfig {
  std::vector<double> epsilons{0.0, 0.02, 0.04, 0.06, 0.08, 0.10};

  // Throws ConfigError unless epsilons are non-negative, ascending and start at 0.
  void validate() const;
};

struct AttackRow {
  double epsilon = 0.0;
  MetricsReport metrics;  // rmse against clean targets plus every other report field
};

// Perturbs the (original-unit) test features in standardized space for each ε and
// evaluates the predictor on the perturbed inputs. Outlier rows are dropped first.
std::vector<AttackRow> attack_sweep(const Predictor& model, const Dataset& test,
                                    const AttackConfig& cfg,
                                    const IntervalConfig& interval = {});

}  // namespace ruq
