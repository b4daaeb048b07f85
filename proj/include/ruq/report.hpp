#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ruq/data.hpp"
#include "ruq/likelihoods.hpp"
#include "ruq/records.hpp"
#include "ruq/tensor.hpp"

namespace ruq {

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single run
};

// Aggregate over seeds for one (experiment, method, dataset, eta, epsilon).
struct SummaryRow {
  std::string experiment;
  std::string method;
  std::string dataset;
  double eta = 0.0;
  std::optional<double> epsilon;
  std::size_t n_runs = 0;    // successful runs entering the aggregates
  std::size_t n_failed = 0;
  MetricSummary rmse, mean_nll, mean_interval_score, calibration_error, entropy_median,
      entropy_q1, entropy_q3;
};

struct OodGap {
  std::string method;
  std::string dataset;  // in-distribution dataset name
  double eta = 0.0;
  std::uint64_t seed = 0;
  double id_median = 0.0;
  double ood_median = 0.0;
  double gap() const { return ood_median - id_median; }
};

struct ReportBundle {
  std::vector<SummaryRow> summary;
  std::vector<std::filesystem::path> plots;
};

inline constexpr const char* kOodSuffix = "-ood";

// Throws ConfigError when records are empty or span more than one experiment kind.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records);

// Pairs every "<name>-ood" record with its "<name>" record of the same method, eta and seed.
std::vector<OodGap> ood_gaps(const std::vector<RunRecord>& records);

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);

// summary.csv, the experiment's plots and, for ood, ood_gaps.csv.
ReportBundle emit_report(const std::vector<RunRecord>& records, const std::filesystem::path& out_dir);

// Training points (outliers highlighted), predictive mean and a ±3 sd band over `xs`.
void write_fit_plot(const std::filesystem::path& path, const std::string& title,
                    const Dataset& train, const Tensor2& xs,
                    const std::vector<PredictiveDistribution>& dists);

}  // namespace ruq
