#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ruq/likelihoods.hpp"

namespace ruq {

// Tail mass of the central prediction interval scored by the interval score.
struct IntervalConfig {
  double alpha = 0.05;

  // Reads a value like 0.95 as interval coverage rather than tail mass.
  static IntervalConfig from_coverage(double coverage) { return {1.0 - coverage}; }
  double coverage() const { return 1.0 - alpha; }
  void validate() const;
};

struct CalibrationCurve {
  std::vector<double> expected_levels;
  std::vector<double> observed_frequencies;
  double calibration_error = 0.0;  // mean |observed − expected|
};

struct EntropyStats {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr() const { return q3 - q1; }
};

struct MetricsReport {
  double rmse = 0.0;
  double mean_nll = 0.0;
  double mean_interval_score = 0.0;
  double calibration_error = 0.0;
  double entropy_median = 0.0;
  double entropy_q1 = 0.0;
  double entropy_q3 = 0.0;
  CalibrationCurve calibration;
};

struct SweepPoint {
  double eta;
  double metric;
};

double rmse(std::span<const double> predicted, std::span<const double> targets);

// (u − l) + (2/α)(l − y)·1{y < l} + (2/α)(y − u)·1{y > u}, evaluated in that order.
double interval_score(double lower, double upper, double y, double alpha);
double mean_interval_score(std::span<const PredictiveDistribution> dists,
                           std::span<const double> targets, double alpha);

// Mean family-matched NLL; all distributions must share one family.
double mean_nll(std::span<const PredictiveDistribution> dists, std::span<const double> targets);

// {0.05, 0.10, ..., 0.95}
std::vector<double> default_calibration_grid();

CalibrationCurve calibration_curve(std::span<const PredictiveDistribution> dists,
                                   std::span<const double> targets,
                                   std::span<const double> grid);

// Median and quartiles with linear interpolation between closest ranks.
EntropyStats order_stats(std::vector<double> values);
EntropyStats entropy_stats(std::span<const PredictiveDistribution> dists);

// Smallest eta whose metric exceeds (1 + tau)·metric(eta = 0); nullopt if never.
std::optional<double> breakaway_point(std::span<const SweepPoint> sweep, double tau = 0.5);

// Spearman rank correlation (average ranks for ties). NaN if either side is constant.
double spearman(std::span<const double> a, std::span<const double> b);

// All report fields for one evaluation set.
MetricsReport evaluate(std::span<const PredictiveDistribution> dists,
                       std::span<const double> targets, const IntervalConfig& interval = {});

}  // namespace ruq
