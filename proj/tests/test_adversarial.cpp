#include <doctest.h>

#include <cmath>
#include <vector>

#include "ruq/adversarial.hpp"
#include "ruq/errors.hpp"
#include "ruq/model.hpp"
#include "support/gradient_check.hpp"

using namespace ruq;

namespace {

// Linear Gaussian head whose scale channel ignores x, so σ is fixed across inputs.
Network linear_fixed_sigma(const std::vector<double>& w, double b, double scale_raw) {
  Tensor2 weights(w.size(), 2);
  for (std::size_t i = 0; i < w.size(); ++i) weights(i, 0) = w[i];
  return Network({DenseLayer{weights, {b, scale_raw}}});
}

Predictor small_predictor(Family method, const Dataset& train, std::uint64_t seed) {
  FitConfig cfg;
  cfg.hidden_layers = 2;
  cfg.hidden_width = 16;
  cfg.train.iterations = 300;
  cfg.train.batch_size = 64;
  cfg.ensemble_size = 3;
  return fit_predictor(method, train, cfg, seed);
}

double linf(const Tensor2& a, const Tensor2& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) {
    m = std::max(m, std::fabs(a.values()[k] - b.values()[k]));
  }
  return m;
}

}  // namespace

TEST_CASE("fgsm with epsilon 0 is the identity") {
  const Network net = testing::random_net(3, 2, 8, 2, 4);
  const auto [x, y] = testing::standard_batch(20, 3, 5);
  CHECK(fgsm(net, x, y, {Family::laplace}, 0.0) == x);
  CHECK_THROWS_AS(fgsm(net, x, y, {Family::laplace}, -0.1), InvalidInput);
}

TEST_CASE("fgsm on a linear head with fixed sigma moves against sign(w)") {
  const std::vector<double> w{0.8, -1.5, 0.0, 2.0};
  const Network net = linear_fixed_sigma(w, 0.1, 0.3);
  Tensor2 x(5, 4);
  Tensor2 y(5, 1);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 4; ++c) x(r, c) = 0.1 * static_cast<double>(r) - 0.2 * c;
  }
  const Tensor2 mu = forward(net, x);
  for (std::size_t r = 0; r < 5; ++r) y(r, 0) = mu(r, 0) + 1.0 + r;  // y > μ everywhere
  const double eps = 0.07;
  const Tensor2 adv = fgsm(net, x, y, {Family::gaussian}, eps);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const double sgn = w[c] > 0 ? 1.0 : (w[c] < 0 ? -1.0 : 0.0);
      CHECK(adv(r, c) == x(r, c) - eps * sgn);
    }
  }
  // Zero-weight coordinates have zero gradient and are untouched.
  for (std::size_t r = 0; r < 5; ++r) CHECK(adv(r, 2) == x(r, 2));
}

TEST_CASE("fgsm sign pattern is invariant to positive loss scaling") {
  const Network net = testing::random_net(3, 2, 8, 2, 9);
  const auto [x, y] = testing::standard_batch(30, 3, 10);
  const Gradients g = backward(net, x, y, {Family::laplace}, true);
  Tensor2 doubled = g.input;
  for (double& v : doubled.values()) v *= 2.0;
  const Tensor2 base = fgsm(net, x, y, {Family::laplace}, 0.05);
  CHECK(sign_step(x, doubled, 0.05) == base);
  CHECK(sign_step(x, g.input, 0.05) == base);
  CHECK_THROWS_AS(sign_step(x, Tensor2(2, 3), 0.05), InvalidInput);
}

TEST_CASE("fgsm perturbation respects the L-infinity budget") {
  for (LossKind loss : {LossKind{Family::gaussian}, LossKind{Family::laplace},
                        LossKind{Family::evidential}}) {
    const Network net = testing::random_net(4, 3, 10, head_width(loss.family), 21);
    const auto [x, y] = testing::standard_batch(40, 4, 22);
    const Gradients g = backward(net, x, y, loss, true);
    for (double eps : {0.01, 0.1, 0.5}) {
      const Tensor2 adv = fgsm(net, x, y, loss, eps);
      CHECK(linf(adv, x) <= eps * (1 + 1e-12));
      for (std::size_t k = 0; k < x.values().size(); ++k) {
        const double d = std::fabs(adv.values()[k] - x.values()[k]);
        if (g.input.values()[k] == 0.0) {
          CHECK(d == 0.0);
        } else {
          CHECK(d == doctest::Approx(eps).epsilon(1e-9));
        }
      }
      CHECK(fgsm(net, x, y, loss, eps) == adv);
    }
  }
}

TEST_CASE("ensemble fgsm uses the summed member gradient") {
  const Dataset train = gen_sine(SineConfig{}, 1);
  const Predictor model = small_predictor(Family::ensemble, train, 3);
  REQUIRE(model.members().size() == 3);
  const auto [x, y] = testing::standard_batch(25, 1, 4);
  Tensor2 sum(25, 1);
  for (const auto& m : model.members()) {
    const Gradients g = backward(m, x, y, {Family::gaussian}, true);
    for (std::size_t k = 0; k < sum.values().size(); ++k) sum.values()[k] += g.input.values()[k];
  }
  const Tensor2 got = model.input_gradient(x, y);
  for (std::size_t k = 0; k < sum.values().size(); ++k) CHECK(got.values()[k] == sum.values()[k]);
  CHECK(fgsm(model, x, y, 0.05) == sign_step(x, sum, 0.05));
}

TEST_CASE("attack sweep") {
  const Dataset data = inject_outliers(gen_sine(SineConfig{}, 2), {0.1}, 3);
  const auto [train, test_raw] = split(data, 0.2, 4);
  const Predictor model = small_predictor(Family::laplace, train, 5);

  const AttackConfig cfg;
  const auto rows = attack_sweep(model, test_raw, cfg);
  REQUIRE(rows.size() == cfg.epsilons.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].epsilon == cfg.epsilons[i]);

  // Row 0 is bit-identical to a clean evaluation on the outlier-free test rows.
  const Dataset test = test_raw.clean_rows();
  const auto dists = model.predict(test.features);
  const MetricsReport clean = evaluate(dists, test.targets.column(0));
  CHECK(rows[0].metrics.rmse == clean.rmse);
  CHECK(rows[0].metrics.mean_nll == clean.mean_nll);
  CHECK(rows[0].metrics.mean_interval_score == clean.mean_interval_score);
  CHECK(rows[0].metrics.entropy_median == clean.entropy_median);
  CHECK(rows[0].metrics.calibration_error == clean.calibration_error);

  // Only ε = 0 requested.
  const auto only_clean = attack_sweep(model, test_raw, AttackConfig{{0.0}});
  REQUIRE(only_clean.size() == 1);
  CHECK(only_clean[0].metrics.rmse == clean.rmse);

  CHECK(attack_sweep(model, test_raw, cfg)[3].metrics.rmse == rows[3].metrics.rmse);

  auto check = [](std::vector<double> e) { AttackConfig{std::move(e)}.validate(); };
  CHECK_THROWS_AS(check({0.02, 0.04}), ConfigError);
  CHECK_THROWS_AS(check({0.0, 0.04, 0.02}), ConfigError);
  CHECK_THROWS_AS(check({}), ConfigError);
  CHECK_NOTHROW(check({0.0}));
}
