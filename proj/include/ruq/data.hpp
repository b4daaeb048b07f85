#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ruq/tensor.hpp"

namespace ruq {

struct Dataset {
  Tensor2 features;                  // N × d
  Tensor2 targets;                   // N × 1
  std::vector<bool> outlier_mask;    // true for rows replaced by inject_outliers
  std::string name;

  std::size_t size() const noexcept { return features.rows(); }
  std::size_t outlier_count() const;

  // Rows with a false mask entry.
  Dataset clean_rows() const;
  Dataset subset(const std::vector<std::size_t>& rows) const;

  // Throws InvalidInput if row counts disagree.
  void validate() const;

  bool operator==(const Dataset&) const = default;
};

// 1D sine with noise that grows linearly along x.
struct SineConfig {
  std::size_t n = 1000;
  double x_min = -4.0;
  double x_max = 4.0;
  double amplitude = 1.0;
  double sigma_lo = 0.05;
  double sigma_hi = 0.5;

  // Throws ConfigError unless x_min < x_max and 0 < sigma_lo ≤ sigma_hi.
  void validate() const;
  double noise_sigma(double x) const;
};

enum class OutlierModel { uniform_y, sensor_dropout };

struct OutlierSpec {
  double eta = 0.0;
  OutlierModel model = OutlierModel::uniform_y;
  double uniform_margin = 0.5;

  // Throws ConfigError if eta is outside [0, 0.5].
  void validate() const;
};

std::string outlier_model_name(OutlierModel m);
OutlierModel parse_outlier_model(const std::string& name);

Dataset gen_sine(const SineConfig& cfg, std::uint64_t seed);

// Tabular regression with features ~ U(-2, 2) and homoskedastic Gaussian noise:
// y = sin(x0) + 0.5·x1 − 0.25·x2² + 0.3·x1·x3 (+ further features unused) + N(0, noise_sigma²).
struct TabularConfig {
  std::size_t n = 1000;
  std::size_t features = 4;
  double noise_sigma = 1.0;

  // Throws ConfigError unless n ≥ 2, features ≥ 4 and noise_sigma > 0.
  void validate() const;
};

Dataset gen_tabular(const TabularConfig& cfg, std::uint64_t seed);

// Replaces exactly round(eta·N) targets chosen uniformly without replacement.
// uniform_y draws from [y_min − margin·range, y_max + margin·range] of the clean targets;
// sensor_dropout writes 0. Features are never touched.
Dataset inject_outliers(const Dataset& data, const OutlierSpec& spec, std::uint64_t seed);

// Comma-separated file with a header row; the named column becomes the target and every
// other column a feature. ParseError positions are 1-based (row counts the header as 1).
Dataset load_csv(const std::filesystem::path& path, const std::string& target_column);

// Writes a dataset as <feature names...>,<target name> with a header row.
void write_csv(const std::filesystem::path& path, const Dataset& data,
               const std::vector<std::string>& feature_names, const std::string& target_name);

// Seeded permutation split; |test| = round(test_fraction·N). Throws ConfigError if either
// side would be empty.
std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction, std::uint64_t seed);

// Per-column affine standardization fitted on a training split.
class Standardizer {
 public:
  static Standardizer fit(const Dataset& train);

  Dataset apply(const Dataset& data) const;
  Dataset invert(const Dataset& data) const;
  Tensor2 apply_features(const Tensor2& features) const;
  Tensor2 invert_features(const Tensor2& features) const;
  double apply_target(double y) const { return (y - target_mean_) / target_std_; }
  double invert_target(double z) const { return target_mean_ + target_std_ * z; }

  const std::vector<double>& feature_mean() const noexcept { return feature_mean_; }
  const std::vector<double>& feature_std() const noexcept { return feature_std_; }
  double target_mean() const noexcept { return target_mean_; }
  double target_std() const noexcept { return target_std_; }

 private:
  std::vector<double> feature_mean_;
  std::vector<double> feature_std_;
  double target_mean_ = 0.0;
  double target_std_ = 1.0;
};

}  // namespace ruq
