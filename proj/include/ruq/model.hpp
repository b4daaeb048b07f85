#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ruq/data.hpp"
#include "ruq/likelihoods.hpp"
#include "ruq/network.hpp"
#include "ruq/train.hpp"

namespace ruq {

// Everything needed to fit one method on one training split.
struct FitConfig {
  std::size_t hidden_layers = 4;
  std::size_t hidden_width = 100;
  TrainConfig train;
  std::size_t ensemble_size = 5;
  double evidential_lambda = 0.01;
};

// A trained method: one network (or ensemble_size Gaussian members) plus the standardizer
// fitted on its training split. Predictions come back in target units.
class Predictor {
 public:
  Predictor(Family method, std::vector<Network> members, Standardizer standardizer,
            LossKind member_loss);

  Family method() const noexcept { return method_; }
  const std::vector<Network>& members() const noexcept { return members_; }
  const Standardizer& standardizer() const noexcept { return standardizer_; }
  const LossKind& member_loss() const noexcept { return member_loss_; }

  // Features in original units.
  std::vector<PredictiveDistribution> predict(const Tensor2& features) const;
  // Features already in standardized units.
  std::vector<PredictiveDistribution> predict_standardized(const Tensor2& z) const;

  // ∂(sum of member training losses)/∂z for standardized features z and targets.
  Tensor2 input_gradient(const Tensor2& z, const Tensor2& y_standardized) const;

 private:
  Family method_;
  std::vector<Network> members_;
  Standardizer standardizer_;
  LossKind member_loss_;
};

// Standardizes on `train`, initializes (He) and trains the method. Member m of an
// ensemble uses init/shuffle seeds derived from (seed, m).
// Throws TrainingDivergence if any member diverges.
Predictor fit_predictor(Family method, const Dataset& train, const FitConfig& cfg,
                        std::uint64_t seed);

}  // namespace ruq
