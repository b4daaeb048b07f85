#include "ruq/likelihoods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ruq/errors.hpp"
#include "ruq/special.hpp"

namespace ruq {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // ln(2π)

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite and > 0, got " + std::to_string(v));
  }
}

void validate(const GaussianParams& p) { check_positive(p.sigma, "gaussian sigma"); }
void validate(const LaplaceParams& p) { check_positive(p.s, "laplace scale"); }
void validate(const EvidentialParams& p) {
  check_positive(p.nu, "evidential nu");
  check_positive(p.beta, "evidential beta");
  if (!(p.alpha > 1.0) || !std::isfinite(p.alpha)) {
    throw DomainError("evidential alpha must be finite and > 1");
  }
}
// The NLL itself only needs α > 0; α > 1 is required where the predictive variance enters.
void validate_for_nll(const EvidentialParams& p) {
  check_positive(p.nu, "evidential nu");
  check_positive(p.beta, "evidential beta");
  check_positive(p.alpha, "evidential alpha");
}
void validate(const EnsembleMixture& m) {
  if (m.members.empty()) throw DomainError("ensemble mixture needs at least one member");
  for (const auto& g : m.members) validate(g);
}

double student_scale(const EvidentialParams& p) {
  return std::sqrt(p.beta * (1.0 + p.nu) / (p.nu * p.alpha));
}

// Smallest x in [lo, hi] with f(x) ≥ p, to an absolute width of tol.
template <class Cdf>
double bisect_quantile(Cdf&& f, double p, double lo, double hi, double tol) {
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::laplace: return "laplace";
    case Family::evidential: return "evidential";
    case Family::ensemble: return "ensemble";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::gaussian, Family::laplace, Family::evidential, Family::ensemble}) {
    if (family_name(f) == name) return f;
  }
  throw ConfigError("unknown method '" + std::string(name) +
                    "' (expected gaussian, laplace, evidential or ensemble)");
}

std::size_t head_width(Family f) { return f == Family::evidential ? 4 : 2; }

Family family_of(const PredictiveDistribution& d) {
  return std::visit(overloaded{[](const GaussianParams&) { return Family::gaussian; },
                               [](const LaplaceParams&) { return Family::laplace; },
                               [](const EvidentialParams&) { return Family::evidential; },
                               [](const EnsembleMixture&) { return Family::ensemble; }},
                    d);
}

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

PredictiveDistribution head_transform(std::span<const double> raw, Family family) {
  if (raw.size() != head_width(family) || family == Family::ensemble) {
    throw InvalidInput("head_transform: raw width " + std::to_string(raw.size()) +
                       " does not match family " + std::string(family_name(family)));
  }
  switch (family) {
    case Family::gaussian: return GaussianParams{raw[0], softplus(raw[1]) + kScaleFloor};
    case Family::laplace: return LaplaceParams{raw[0], softplus(raw[1]) + kScaleFloor};
    case Family::evidential:
      return EvidentialParams{raw[0], softplus(raw[1]) + kScaleFloor,
                              softplus(raw[2]) + 1.0 + kScaleFloor,
                              softplus(raw[3]) + kScaleFloor};
    case Family::ensemble: break;
  }
  throw InvalidInput("head_transform: ensemble has no single-network head");
}

std::vector<PredictiveDistribution> head_transform(const Tensor2& raw, Family family) {
  std::vector<PredictiveDistribution> out;
  out.reserve(raw.rows());
  for (std::size_t r = 0; r < raw.rows(); ++r) out.push_back(head_transform(raw.row(r), family));
  return out;
}

double gaussian_nll(double y, double mu, double sigma) {
  check_positive(sigma, "gaussian sigma");
  const double r = (y - mu) / sigma;
  return 0.5 * kLog2Pi + std::log(sigma) + 0.5 * r * r;
}

double laplace_nll(double y, double mu, double s) {
  check_positive(s, "laplace scale");
  return std::log(2.0 * s) + std::fabs(y - mu) / s;
}

double evidential_nll(double y, const EvidentialParams& p, double lambda) {
  validate_for_nll(p);
  if (!(lambda >= 0.0)) throw DomainError("evidential lambda must be >= 0");
  const double r = y - p.gamma;
  const double omega = 2.0 * p.beta * (1.0 + p.nu);
  const double nll = 0.5 * std::log(std::numbers::pi / p.nu) - p.alpha * std::log(omega) +
                     (p.alpha + 0.5) * std::log(r * r * p.nu + omega) + std::lgamma(p.alpha) -
                     std::lgamma(p.alpha + 0.5);
  return nll + lambda * std::fabs(r) * (2.0 * p.nu + p.alpha);
}

double mixture_nll(double y, const EnsembleMixture& m) {
  validate(m);
  std::vector<double> logs;
  logs.reserve(m.members.size());
  for (const auto& g : m.members) logs.push_back(-gaussian_nll(y, g.mu, g.sigma));
  const double top = *std::max_element(logs.begin(), logs.end());
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - top);
  return -(top + std::log(acc / static_cast<double>(m.members.size())));
}

double nll(const PredictiveDistribution& d, double y) {
  return std::visit(
      overloaded{[y](const GaussianParams& g) { return gaussian_nll(y, g.mu, g.sigma); },
                 [y](const LaplaceParams& l) { return laplace_nll(y, l.mu, l.s); },
                 [y](const EvidentialParams& e) { return evidential_nll(y, e, 0.0); },
                 [y](const EnsembleMixture& m) { return mixture_nll(y, m); }},
      d);
}

double loss_and_grad(const LossKind& loss, std::span<const double> raw, double y,
                     std::span<double> grad_raw) {
  const std::size_t width = head_width(loss.family);
  if (loss.family == Family::ensemble || raw.size() != width || grad_raw.size() != width) {
    throw InvalidInput("loss_and_grad: head width does not match loss family");
  }
  switch (loss.family) {
    case Family::gaussian: {
      const double mu = raw[0];
      const double sigma = softplus(raw[1]) + kScaleFloor;
      const double r = y - mu;
      const double inv_var = 1.0 / (sigma * sigma);
      grad_raw[0] = -r * inv_var;
      grad_raw[1] = (1.0 / sigma - r * r * inv_var / sigma) * sigmoid(raw[1]);
      return 0.5 * kLog2Pi + std::log(sigma) + 0.5 * r * r * inv_var;
    }
    case Family::laplace: {
      const double mu = raw[0];
      const double s = softplus(raw[1]) + kScaleFloor;
      const double r = y - mu;
      const double a = std::fabs(r);
      grad_raw[0] = -sign(r) / s;
      grad_raw[1] = (1.0 / s - a / (s * s)) * sigmoid(raw[1]);
      return std::log(2.0 * s) + a / s;
    }
    case Family::evidential: {
      const double lambda = loss.evidential_lambda;
      const double gamma = raw[0];
      const double nu = softplus(raw[1]) + kScaleFloor;
      const double alpha = softplus(raw[2]) + 1.0 + kScaleFloor;
      const double beta = softplus(raw[3]) + kScaleFloor;
      const double r = y - gamma;
      const double a = std::fabs(r);
      const double omega = 2.0 * beta * (1.0 + nu);
      const double big = r * r * nu + omega;
      const double ap = alpha + 0.5;

      const double d_gamma = -ap * 2.0 * r * nu / big - lambda * sign(r) * (2.0 * nu + alpha);
      const double d_nu = -0.5 / nu - alpha * 2.0 * beta / omega + ap * (r * r + 2.0 * beta) / big +
                          2.0 * lambda * a;
      const double d_alpha = -std::log(omega) + std::log(big) + special::digamma(alpha) -
                             special::digamma(ap) + lambda * a;
      const double d_beta = -alpha / beta + ap * 2.0 * (1.0 + nu) / big;

      grad_raw[0] = d_gamma;
      grad_raw[1] = d_nu * sigmoid(raw[1]);
      grad_raw[2] = d_alpha * sigmoid(raw[2]);
      grad_raw[3] = d_beta * sigmoid(raw[3]);
      return 0.5 * std::log(std::numbers::pi / nu) - alpha * std::log(omega) + ap * std::log(big) +
             std::lgamma(alpha) - std::lgamma(ap) + lambda * a * (2.0 * nu + alpha);
    }
    case Family::ensemble: break;
  }
  throw InvalidInput("loss_and_grad: ensemble is trained through its Gaussian members");
}

Moments ensemble_moments(const EnsembleMixture& m) {
  validate(m);
  const double count = static_cast<double>(m.members.size());
  double mean = 0.0;
  double second = 0.0;
  for (const auto& g : m.members) {
    mean += g.mu;
    second += g.sigma * g.sigma + g.mu * g.mu;
  }
  mean /= count;
  second /= count;
  return {mean, std::max(0.0, second - mean * mean)};
}

Moments predictive_moments(const PredictiveDistribution& d) {
  return std::visit(overloaded{[](const GaussianParams& g) {
                                 validate(g);
                                 return Moments{g.mu, g.sigma * g.sigma};
                               },
                               [](const LaplaceParams& l) {
                                 validate(l);
                                 return Moments{l.mu, 2.0 * l.s * l.s};
                               },
                               [](const EvidentialParams& e) {
                                 validate(e);
                                 return Moments{e.gamma,
                                                e.beta * (1.0 + e.nu) / (e.nu * (e.alpha - 1.0))};
                               },
                               [](const EnsembleMixture& m) { return ensemble_moments(m); }},
                    d);
}

double entropy(const PredictiveDistribution& d) {
  constexpr double kLog2PiE = kLog2Pi + 1.0;
  return std::visit(overloaded{[](const GaussianParams& g) {
                                 validate(g);
                                 return 0.5 * kLog2PiE + std::log(g.sigma);
                               },
                               [](const LaplaceParams& l) {
                                 validate(l);
                                 return 1.0 + std::log(2.0 * l.s);
                               },
                               [&d](const auto&) {
                                 const double var = predictive_moments(d).variance;
                                 if (!(var > 0.0)) {
                                   throw DomainError("entropy: predictive variance must be > 0");
                                 }
                                 return 0.5 * (kLog2PiE + std::log(var));
                               }},
                    d);
}

double cdf(const PredictiveDistribution& d, double y) {
  return std::visit(
      overloaded{[y](const GaussianParams& g) {
                   validate(g);
                   return special::normal_cdf((y - g.mu) / g.sigma);
                 },
                 [y](const LaplaceParams& l) {
                   validate(l);
                   const double z = (y - l.mu) / l.s;
                   return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
                 },
                 [y](const EvidentialParams& e) {
                   validate(e);
                   return special::student_t_cdf((y - e.gamma) / student_scale(e), 2.0 * e.alpha);
                 },
                 [y](const EnsembleMixture& m) {
                   validate(m);
                   double acc = 0.0;
                   for (const auto& g : m.members) acc += special::normal_cdf((y - g.mu) / g.sigma);
                   return acc / static_cast<double>(m.members.size());
                 }},
      d);
}

double quantile(const PredictiveDistribution& d, double p) {
  check_probability(p);
  return std::visit(
      overloaded{[p](const GaussianParams& g) {
                   validate(g);
                   return g.mu + g.sigma * special::inverse_normal_cdf(p);
                 },
                 [p](const LaplaceParams& l) {
                   validate(l);
                   const double c = p - 0.5;
                   return l.mu - l.s * sign(c) * std::log1p(-2.0 * std::fabs(c));
                 },
                 [p](const EvidentialParams& e) {
                   validate(e);
                   const double dof = 2.0 * e.alpha;
                   auto f = [dof](double t) { return special::student_t_cdf(t, dof); };
                   double lo = -1.0;
                   double hi = 1.0;
                   while (f(lo) > p) lo *= 2.0;
                   while (f(hi) < p) hi *= 2.0;
                   const double t = bisect_quantile(f, p, lo, hi, 1e-9);
                   return e.gamma + student_scale(e) * t;
                 },
                 [p](const EnsembleMixture& m) {
                   validate(m);
                   double lo = std::numeric_limits<double>::infinity();
                   double hi = -lo;
                   double min_sigma = lo;
                   for (const auto& g : m.members) {
                     lo = std::min(lo, g.mu - 40.0 * g.sigma);
                     hi = std::max(hi, g.mu + 40.0 * g.sigma);
                     min_sigma = std::min(min_sigma, g.sigma);
                   }
                   const PredictiveDistribution mix = m;
                   auto f = [&mix](double y) { return cdf(mix, y); };
                   return bisect_quantile(f, p, lo, hi, 1e-9 * min_sigma);
                 }},
      d);
}

Interval central_interval(const PredictiveDistribution& d, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("central_interval: level must lie in (0, 1)");
  const double tail = 0.5 * (1.0 - level);
  const double lo = quantile(d, tail);
  const double hi = quantile(d, 1.0 - tail);
  return {std::min(lo, hi), std::max(lo, hi)};
}

PredictiveDistribution rescale(const PredictiveDistribution& d, double shift, double scale) {
  if (!(scale > 0.0)) throw DomainError("rescale: scale must be > 0");
  return std::visit(
      overloaded{
          [&](const GaussianParams& g) -> PredictiveDistribution {
            return GaussianParams{shift + scale * g.mu, scale * g.sigma};
          },
          [&](const LaplaceParams& l) -> PredictiveDistribution {
            return LaplaceParams{shift + scale * l.mu, scale * l.s};
          },
          [&](const EvidentialParams& e) -> PredictiveDistribution {
            return EvidentialParams{shift + scale * e.gamma, e.nu, e.alpha, e.beta * scale * scale};
          },
          [&](const EnsembleMixture& m) -> PredictiveDistribution {
            EnsembleMixture out;
            out.members.reserve(m.members.size());
            for (const auto& g : m.members) {
              out.members.push_back({shift + scale * g.mu, scale * g.sigma});
            }
            return out;
          }},
      d);
}

double location(const PredictiveDistribution& d) {
  return std::visit(overloaded{[](const GaussianParams& g) { return g.mu; },
                               [](const LaplaceParams& l) { return l.mu; },
                               [](const EvidentialParams& e) { return e.gamma; },
                               [](const EnsembleMixture& m) { return ensemble_moments(m).mean; }},
                    d);
}

}  // namespace ruq
