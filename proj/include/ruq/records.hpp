#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ruq {

// One experiment grid cell's outcome; the unit written to records.csv.
struct RunRecord {
  std::string run_id;
  std::string experiment;
  std::string method;
  std::string dataset;
  double eta = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> epsilon;

  // Metric fields are empty in the CSV when the cell failed.
  bool failed = false;
  std::string diagnostic;
  double rmse = 0.0;
  double mean_nll = 0.0;
  double mean_interval_score = 0.0;
  double calibration_error = 0.0;
  double entropy_median = 0.0;
  double entropy_q1 = 0.0;
  double entropy_q3 = 0.0;

  std::int64_t wall_ms = 0;  // excluded from the determinism contract

  // Per-level central-interval coverage; written to calibration.csv, not records.csv.
  std::vector<double> calibration_levels;
  std::vector<double> calibration_observed;
};

inline constexpr const char* kRecordsHeader =
    "run_id,experiment,method,dataset,eta,seed,epsilon,rmse,mean_nll,mean_interval_score,"
    "calibration_error,entropy_median,entropy_q1,entropy_q3,wall_ms";

// Stable identifier derived from the record key.
std::string make_run_id(const std::string& experiment, const std::string& method,
                        const std::string& dataset, double eta, std::uint64_t seed,
                        std::optional<double> epsilon);

// Orders by (experiment, method, dataset, eta, seed, epsilon); a missing epsilon sorts first.
void sort_records(std::vector<RunRecord>& records);

// Throws ConfigError if two records share a key.
void check_unique_keys(const std::vector<RunRecord>& records);

// Shortest round-trip rendering shared by every CSV the harness writes.
std::string format_number(double v);

void write_records_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);
// Reads records.csv and, when present next to it, calibration.csv.
std::vector<RunRecord> read_records_csv(const std::filesystem::path& path);

// run_id,level,observed
void write_calibration_csv(const std::filesystem::path& path,
                           const std::vector<RunRecord>& records);
// run_id,diagnostic, only for failed records; no file when nothing failed.
void write_failures_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);

}  // namespace ruq
