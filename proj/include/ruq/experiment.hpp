#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ruq/data.hpp"
#include "ruq/likelihoods.hpp"
#include "ruq/records.hpp"

namespace ruq {

enum class ExperimentKind { breakaway, regression, attack, ood, demo1d };

std::string experiment_name(ExperimentKind k);
ExperimentKind parse_experiment(const std::string& name);

// Flat experiment description. Field names double as the config-file keys.
struct ExperimentSpec {
  ExperimentKind experiment = ExperimentKind::breakaway;
  std::vector<Family> methods{Family::gaussian, Family::laplace, Family::evidential,
                              Family::ensemble};

  std::size_t hidden_layers = 4;
  std::size_t hidden_width = 100;
  double learning_rate = 5e-3;
  std::size_t batch_size = 128;
  std::size_t iterations = 5000;

  std::vector<double> etas;  // outlier fractions applied to training splits
  OutlierModel outlier_model = OutlierModel::uniform_y;
  double uniform_margin = 0.5;

  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::size_t ensemble_size = 5;
  double evidential_lambda = 0.01;
  double interval_alpha = 0.05;
  double test_fraction = 0.1;

  // Generator source (breakaway, attack, ood, demo1d).
  std::size_t sine_n = 1000;
  double sine_x_min = -4.0;
  double sine_x_max = 4.0;
  double sine_amplitude = 1.0;
  double sine_sigma_lo = 0.05;
  double sine_sigma_hi = 0.5;
  // Shifted-domain generator for ood.
  double ood_x_min = 6.0;
  double ood_x_max = 14.0;

  // CSV sources (regression; ood when set).
  std::vector<std::string> csv_paths;
  std::string target_column = "y";
  std::string ood_csv;

  std::vector<double> epsilons{0.0, 0.02, 0.04, 0.06, 0.08, 0.10};

  std::string output_directory = "out";
  std::size_t threads = 1;

  // Defaults for a given experiment kind.
  static ExperimentSpec defaults(ExperimentKind kind);

  // Throws ConfigError on any violated invariant.
  void validate() const;

  SineConfig sine() const;
  SineConfig ood_sine() const;
};

// Applies `key = value` lines onto `spec`. '#' starts a comment. List values are comma
// separated. Unknown keys raise one ConfigError naming all of them.
void apply_config_text(ExperimentSpec& spec, const std::string& text);
void apply_config_file(ExperimentSpec& spec, const std::filesystem::path& path);
// Sets one field from its textual value.
void apply_config_value(ExperimentSpec& spec, const std::string& key, const std::string& value);

// Every key understood by apply_config_text.
const std::vector<std::string>& config_keys();

// Record-set runners. Cells run on up to spec.threads OpenMP threads; the returned records
// are sorted by key and independent of the thread count.
std::vector<RunRecord> run_breakaway(const ExperimentSpec& spec);
std::vector<RunRecord> run_regression_bench(const ExperimentSpec& spec);
std::vector<RunRecord> run_attack(const ExperimentSpec& spec);
std::vector<RunRecord> run_ood(const ExperimentSpec& spec);
// Also writes fit plots (data, mean, ±3 sd band) into spec.output_directory.
std::vector<RunRecord> run_demo1d(const ExperimentSpec& spec);

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec);

// Seed for a grid cell, derived from its key so results do not depend on execution order.
std::uint64_t cell_seed(const std::string& purpose, const std::string& experiment,
                        const std::string& method, const std::string& dataset, double eta,
                        std::uint64_t seed);

}  // namespace ruq
