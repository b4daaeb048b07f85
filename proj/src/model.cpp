#include "ruq/model.hpp"

#include <string>

#include "ruq/errors.hpp"
#include "ruq/rng.hpp"

namespace ruq {

Predictor::Predictor(Family method, std::vector<Network> members, Standardizer standardizer,
                     LossKind member_loss)
    : method_(method),
      members_(std::move(members)),
      standardizer_(std::move(standardizer)),
      member_loss_(member_loss) {
  if (members_.empty()) throw InvalidInput("Predictor: no member networks");
  if (method_ != Family::ensemble && members_.size() != 1) {
    throw InvalidInput("Predictor: single-network methods take exactly one member");
  }
}

std::vector<PredictiveDistribution> Predictor::predict(const Tensor2& features) const {
  return predict_standardized(standardizer_.apply_features(features));
}

std::vector<PredictiveDistribution> Predictor::predict_standardized(const Tensor2& z) const {
  const double shift = standardizer_.target_mean();
  const double scale = standardizer_.target_std();
  std::vector<PredictiveDistribution> out;
  out.reserve(z.rows());
  if (method_ != Family::ensemble) {
    const Tensor2 raw = forward(members_.front(), z);
    for (std::size_t r = 0; r < raw.rows(); ++r) {
      out.push_back(rescale(head_transform(raw.row(r), method_), shift, scale));
    }
    return out;
  }
  std::vector<Tensor2> raws;
  raws.reserve(members_.size());
  for (const auto& m : members_) raws.push_back(forward(m, z));
  for (std::size_t r = 0; r < z.rows(); ++r) {
    EnsembleMixture mix;
    mix.members.reserve(raws.size());
    for (const auto& raw : raws) {
      mix.members.push_back(std::get<GaussianParams>(head_transform(raw.row(r), Family::gaussian)));
    }
    out.push_back(rescale(mix, shift, scale));
  }
  return out;
}

Tensor2 Predictor::input_gradient(const Tensor2& z, const Tensor2& y_standardized) const {
  Tensor2 total(z.rows(), z.cols());
  for (const auto& m : members_) {
    const Gradients g = backward(m, z, y_standardized, member_loss_, /*want_input_grad=*/true);
    auto acc = total.values();
    const auto part = g.input.values();
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += part[k];
  }
  return total;
}

Predictor fit_predictor(Family method, const Dataset& train_set, const FitConfig& cfg,
                        std::uint64_t seed) {
  const Standardizer standardizer = Standardizer::fit(train_set);
  const Dataset z = standardizer.apply(train_set);
  const Family member_family = method == Family::ensemble ? Family::gaussian : method;
  const LossKind loss{member_family, cfg.evidential_lambda};
  const std::size_t count = method == Family::ensemble ? cfg.ensemble_size : 1;
  if (count == 0) throw ConfigError("ensemble_size must be >= 1");

  const NetworkPlan plan{train_set.features.cols(), cfg.hidden_layers, cfg.hidden_width,
                         head_width(member_family)};
  std::vector<Network> members;
  members.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    const std::uint64_t member_seed = mix_seed(seed ^ mix_seed(m + 1));
    TrainConfig tc = cfg.train;
    tc.seed = mix_seed(member_seed ^ 0x5348554646ULL);
    members.push_back(train(init_he(plan, member_seed), z, loss, tc).net);
  }
  return Predictor(method, std::move(members), standardizer, loss);
}

}  // namespace ruq
