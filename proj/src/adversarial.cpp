#include "ruq/adversarial.hpp"

#include "ruq/errors.hpp"

namespace ruq {

Tensor2 sign_step(const Tensor2& x, const Tensor2& gradient, double epsilon) {
  if (!(epsilon >= 0.0)) throw InvalidInput("fgsm: epsilon must be >= 0");
  if (gradient.rows() != x.rows() || gradient.cols() != x.cols()) {
    throw InvalidInput("fgsm: gradient shape does not match the input");
  }
  Tensor2 out = x;
  if (epsilon == 0.0) return out;
  auto v = out.values();
  const auto g = gradient.values();
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (g[k] > 0.0) {
      v[k] += epsilon;
    } else if (g[k] < 0.0) {
      v[k] -= epsilon;
    }
  }
  return out;
}

Tensor2 fgsm(const Network& net, const Tensor2& x, const Tensor2& y, const LossKind& loss,
             double epsilon) {
  if (!(epsilon >= 0.0)) throw InvalidInput("fgsm: epsilon must be >= 0");
  if (epsilon == 0.0) return x;
  return sign_step(x, backward(net, x, y, loss, /*want_input_grad=*/true).input, epsilon);
}

Tensor2 fgsm(const Predictor& model, const Tensor2& x, const Tensor2& y, double epsilon) {
  if (!(epsilon >= 0.0)) throw InvalidInput("fgsm: epsilon must be >= 0");
  if (epsilon == 0.0) return x;
  return sign_step(x, model.input_gradient(x, y), epsilon);
}

void AttackConfig::validate() const {
  if (epsilons.empty() || epsilons.front() != 0.0) {
    throw ConfigError("attack epsilons must start with 0 (the clean baseline)");
  }
  for (std::size_t i = 1; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > epsilons[i - 1])) throw ConfigError("attack epsilons must be ascending");
  }
}

std::vector<AttackRow> attack_sweep(const Predictor& model, const Dataset& test,
                                    const AttackConfig& cfg, const IntervalConfig& interval) {
  cfg.validate();
  const Dataset clean = test.clean_rows();
  const Standardizer& s = model.standardizer();
  const Tensor2 z = s.apply_features(clean.features);
  Tensor2 y_std = clean.targets;
  for (double& v : y_std.values()) v = s.apply_target(v);
  const std::vector<double> targets = clean.targets.column(0);

  // The gradient does not depend on ε; compute it once.
  const Tensor2 grad = model.input_gradient(z, y_std);
  std::vector<AttackRow> rows;
  rows.reserve(cfg.epsilons.size());
  for (double eps : cfg.epsilons) {
    const Tensor2 perturbed = eps == 0.0 ? z : sign_step(z, grad, eps);
    const auto dists = model.predict_standardized(perturbed);
    rows.push_back({eps, evaluate(dists, targets, interval)});
  }
  return rows;
}

}  // namespace ruq
