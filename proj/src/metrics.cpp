#include "ruq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ruq/errors.hpp"

namespace ruq {

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw InvalidInput(std::string(what) + ": length mismatch");
  if (a == 0) throw InvalidInput(std::string(what) + ": empty input");
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double interpolated_quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

void IntervalConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("interval alpha must lie in (0, 1)");
}

double rmse(std::span<const double> predicted, std::span<const double> targets) {
  check_lengths(predicted.size(), targets.size(), "rmse");
  double acc = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double r = predicted[i] - targets[i];
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(predicted.size()));
}

double interval_score(double lower, double upper, double y, double alpha) {
  if (lower > upper) throw DomainError("interval_score: lower endpoint exceeds upper endpoint");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("interval_score: alpha must lie in (0, 1)");
  double score = upper - lower;
  if (y < lower) score += 2.0 / alpha * (lower - y);
  if (y > upper) score += 2.0 / alpha * (y - upper);
  return score;
}

double mean_interval_score(std::span<const PredictiveDistribution> dists,
                           std::span<const double> targets, double alpha) {
  check_lengths(dists.size(), targets.size(), "mean_interval_score");
  double acc = 0.0;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    const Interval iv = central_interval(dists[i], 1.0 - alpha);
    acc += interval_score(iv.lower, iv.upper, targets[i], alpha);
  }
  return acc / static_cast<double>(dists.size());
}

double mean_nll(std::span<const PredictiveDistribution> dists, std::span<const double> targets) {
  check_lengths(dists.size(), targets.size(), "mean_nll");
  const Family family = family_of(dists.front());
  double acc = 0.0;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    if (family_of(dists[i]) != family) {
      throw InvalidInput("mean_nll: mixed distribution families in one evaluation");
    }
    acc += nll(dists[i], targets[i]);
  }
  return acc / static_cast<double>(dists.size());
}

std::vector<double> default_calibration_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(0.05 * k);
  return grid;
}

CalibrationCurve calibration_curve(std::span<const PredictiveDistribution> dists,
                                   std::span<const double> targets,
                                   std::span<const double> grid) {
  check_lengths(dists.size(), targets.size(), "calibration_curve");
  if (grid.empty()) throw InvalidInput("calibration_curve: empty level grid");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(grid[j] > 0.0 && grid[j] < 1.0) || (j > 0 && !(grid[j] > grid[j - 1]))) {
      throw InvalidInput("calibration_curve: grid must be strictly increasing within (0, 1)");
    }
  }
  CalibrationCurve curve;
  curve.expected_levels.assign(grid.begin(), grid.end());
  std::vector<std::size_t> hits(grid.size(), 0);
  for (std::size_t i = 0; i < dists.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const Interval iv = central_interval(dists[i], grid[j]);
      if (targets[i] >= iv.lower && targets[i] <= iv.upper) ++hits[j];
    }
  }
  double err = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double freq = static_cast<double>(hits[j]) / static_cast<double>(dists.size());
    curve.observed_frequencies.push_back(freq);
    err += std::fabs(freq - grid[j]);
  }
  curve.calibration_error = err / static_cast<double>(grid.size());
  return curve;
}

EntropyStats order_stats(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("order_stats: empty input");
  std::sort(values.begin(), values.end());
  return {interpolated_quantile(values, 0.5), interpolated_quantile(values, 0.25),
          interpolated_quantile(values, 0.75)};
}

EntropyStats entropy_stats(std::span<const PredictiveDistribution> dists) {
  if (dists.empty()) throw InvalidInput("entropy_stats: empty input");
  std::vector<double> h;
  h.reserve(dists.size());
  for (const auto& d : dists) h.push_back(entropy(d));
  return order_stats(std::move(h));
}

std::optional<double> breakaway_point(std::span<const SweepPoint> sweep, double tau) {
  const auto base = std::find_if(sweep.begin(), sweep.end(),
                                 [](const SweepPoint& p) { return p.eta == 0.0; });
  if (base == sweep.end()) throw InvalidInput("breakaway_point: sweep lacks the eta = 0 baseline");
  const double threshold = (1.0 + tau) * base->metric;
  std::optional<double> first;
  for (const auto& p : sweep) {
    if (p.metric > threshold && (!first || p.eta < *first)) first = p.eta;
  }
  return first;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  check_lengths(a.size(), b.size(), "spearman");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    va += (ra[i] - mean) * (ra[i] - mean);
    vb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (va == 0.0 || vb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return cov / std::sqrt(va * vb);
}

MetricsReport evaluate(std::span<const PredictiveDistribution> dists,
                       std::span<const double> targets, const IntervalConfig& interval) {
  interval.validate();
  check_lengths(dists.size(), targets.size(), "evaluate");
  MetricsReport r;
  std::vector<double> means;
  means.reserve(dists.size());
  for (const auto& d : dists) means.push_back(location(d));
  r.rmse = rmse(means, targets);
  r.mean_nll = mean_nll(dists, targets);
  r.mean_interval_score = mean_interval_score(dists, targets, interval.alpha);
  const auto grid = default_calibration_grid();
  r.calibration = calibration_curve(dists, targets, grid);
  r.calibration_error = r.calibration.calibration_error;
  const EntropyStats h = entropy_stats(dists);
  r.entropy_median = h.median;
  r.entropy_q1 = h.q1;
  r.entropy_q3 = h.q3;
  return r;
}

}  // namespace ruq
