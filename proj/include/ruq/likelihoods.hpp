#pragma once

// Probabilistic regression heads.
//
// A head maps the raw network outputs of one sample (2 or 4 channels) onto the parameters
// of a predictive distribution. Every family supports NLL, moments, differential entropy,
// CDF and quantiles; the three trainable families also expose the NLL gradient with respect
// to the raw head channels, which is what backward() consumes.

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "ruq/tensor.hpp"

namespace ruq {

enum class Family { gaussian, laplace, evidential, ensemble };

std::string_view family_name(Family f);
// Accepts the lower-case names produced by family_name(). Throws ConfigError otherwise.
Family parse_family(std::string_view name);

// Raw head channels per target for the trainable families (2 for Gaussian/Laplace, 4 for
// Evidential). Ensemble members are Gaussian heads.
std::size_t head_width(Family f);

struct GaussianParams {
  double mu;
  double sigma;
};

struct LaplaceParams {
  double mu;
  double s;
};

// Normal-inverse-gamma evidential parameters.
struct EvidentialParams {
  double gamma;
  double nu;
  double alpha;
  double beta;
};

struct EnsembleMixture {
  std::vector<GaussianParams> members;
};

using PredictiveDistribution =
    std::variant<GaussianParams, LaplaceParams, EvidentialParams, EnsembleMixture>;

Family family_of(const PredictiveDistribution& d);

// Training loss selection. The λ weight only applies to the evidential regularizer.
struct LossKind {
  Family family = Family::gaussian;
  double evidential_lambda = 0.01;
};

inline constexpr double kScaleFloor = 1e-6;

double softplus(double x);
double sigmoid(double x);

// One row of raw head outputs → parameters. Family must be trainable; raw width must match.
PredictiveDistribution head_transform(std::span<const double> raw, Family family);
std::vector<PredictiveDistribution> head_transform(const Tensor2& raw, Family family);

// Negative log-likelihoods. Throw DomainError on invalid parameters.
double gaussian_nll(double y, double mu, double sigma);
double laplace_nll(double y, double mu, double s);
// Evidential NLL plus λ·|y−γ|·(2ν+α). With Ω = 2β(1+ν):
//   ½ln(π/ν) − α·lnΩ + (α+½)·ln((y−γ)²ν + Ω) + lnΓ(α) − lnΓ(α+½)
double evidential_nll(double y, const EvidentialParams& p, double lambda);
double mixture_nll(double y, const EnsembleMixture& m);

// Family-matched NLL used for evaluation (evidential without the regularizer).
double nll(const PredictiveDistribution& d, double y);

// Per-sample training loss for one raw head row; writes ∂loss/∂raw into grad_raw.
double loss_and_grad(const LossKind& loss, std::span<const double> raw, double y,
                     std::span<double> grad_raw);

struct Moments {
  double mean;
  double variance;
};

Moments ensemble_moments(const EnsembleMixture& m);
Moments predictive_moments(const PredictiveDistribution& d);

// Differential entropy in nats. Evidential and Ensemble use the moment-matched Gaussian.
double entropy(const PredictiveDistribution& d);

double cdf(const PredictiveDistribution& d, double y);
// 0 < p < 1, otherwise DomainError.
double quantile(const PredictiveDistribution& d, double p);

struct Interval {
  double lower;
  double upper;
};

// Central interval holding `level` probability mass.
Interval central_interval(const PredictiveDistribution& d, double level);

// Maps a distribution over standardized targets back to target units: y = shift + scale·z.
PredictiveDistribution rescale(const PredictiveDistribution& d, double shift, double scale);

// Location parameter (μ, γ, or the mixture mean).
double location(const PredictiveDistribution& d);

}  // namespace ruq
