#include "ruq/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "ruq/adversarial.hpp"
#include "ruq/errors.hpp"
#include "ruq/metrics.hpp"
#include "ruq/model.hpp"
#include "ruq/report.hpp"
#include "ruq/rng.hpp"

namespace ruq {

namespace {

constexpr int kTrainAttempts = 3;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
  }
  return out;
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not a non-negative integer");
  }
  return out;
}

std::vector<double> parse_reals(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(parse_real(key, item));
  return out;
}

using Setter = std::function<void(ExperimentSpec&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto real = [](double ExperimentSpec::*field) {
      return [field](ExperimentSpec& s, const std::string& k, const std::string& v) {
        s.*field = parse_real(k, v);
      };
    };
    auto count = [](std::size_t ExperimentSpec::*field) {
      return [field](ExperimentSpec& s, const std::string& k, const std::string& v) {
        s.*field = static_cast<std::size_t>(parse_count(k, v));
      };
    };
    auto text = [](std::string ExperimentSpec::*field) {
      return [field](ExperimentSpec& s, const std::string&, const std::string& v) { s.*field = v; };
    };
    t["experiment"] = [](ExperimentSpec& s, const std::string&, const std::string& v) {
      s.experiment = parse_experiment(v);
    };
    t["methods"] = [](ExperimentSpec& s, const std::string&, const std::string& v) {
      s.methods.clear();
      for (const auto& m : split_list(v)) s.methods.push_back(parse_family(m));
    };
    t["hidden_layers"] = count(&ExperimentSpec::hidden_layers);
    t["hidden_width"] = count(&ExperimentSpec::hidden_width);
    t["learning_rate"] = real(&ExperimentSpec::learning_rate);
    t["batch_size"] = count(&ExperimentSpec::batch_size);
    t["iterations"] = count(&ExperimentSpec::iterations);
    t["etas"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) {
      s.etas = parse_reals(k, v);
    };
    t["outlier_model"] = [](ExperimentSpec& s, const std::string&, const std::string& v) {
      s.outlier_model = parse_outlier_model(v);
    };
    t["uniform_margin"] = real(&ExperimentSpec::uniform_margin);
    t["seeds"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) {
      s.seeds.clear();
      for (const auto& item : split_list(v)) s.seeds.push_back(parse_count(k, item));
    };
    t["ensemble_size"] = count(&ExperimentSpec::ensemble_size);
    t["evidential_lambda"] = real(&ExperimentSpec::evidential_lambda);
    t["interval_alpha"] = real(&ExperimentSpec::interval_alpha);
    t["test_fraction"] = real(&ExperimentSpec::test_fraction);
    t["sine_n"] = count(&ExperimentSpec::sine_n);
    t["sine_x_min"] = real(&ExperimentSpec::sine_x_min);
    t["sine_x_max"] = real(&ExperimentSpec::sine_x_max);
    t["sine_amplitude"] = real(&ExperimentSpec::sine_amplitude);
    t["sine_sigma_lo"] = real(&ExperimentSpec::sine_sigma_lo);
    t["sine_sigma_hi"] = real(&ExperimentSpec::sine_sigma_hi);
    t["ood_x_min"] = real(&ExperimentSpec::ood_x_min);
    t["ood_x_max"] = real(&ExperimentSpec::ood_x_max);
    t["csv_paths"] = [](ExperimentSpec& s, const std::string&, const std::string& v) {
      s.csv_paths = split_list(v);
    };
    t["target_column"] = text(&ExperimentSpec::target_column);
    t["ood_csv"] = text(&ExperimentSpec::ood_csv);
    t["epsilons"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) {
      s.epsilons = parse_reals(k, v);
    };
    t["output_directory"] = text(&ExperimentSpec::output_directory);
    t["threads"] = count(&ExperimentSpec::threads);
    return t;
  }();
  return table;
}

// ---------------------------------------------------------------------------------------
// Grid execution

struct Cell {
  Family method;
  std::string dataset;   // record dataset name
  std::size_t source;    // index into the experiment's data sources
  double eta;
  std::uint64_t seed;
};

FitConfig fit_config(const ExperimentSpec& spec) {
  FitConfig fc;
  fc.hidden_layers = spec.hidden_layers;
  fc.hidden_width = spec.hidden_width;
  fc.train.learning_rate = spec.learning_rate;
  fc.train.batch_size = spec.batch_size;
  fc.train.iterations = spec.iterations;
  fc.ensemble_size = spec.ensemble_size;
  fc.evidential_lambda = spec.evidential_lambda;
  return fc;
}

RunRecord base_record(const ExperimentSpec& spec, const Cell& cell,
                      std::optional<double> epsilon = std::nullopt) {
  RunRecord r;
  r.experiment = experiment_name(spec.experiment);
  r.method = std::string(family_name(cell.method));
  r.dataset = cell.dataset;
  r.eta = cell.eta;
  r.seed = cell.seed;
  r.epsilon = epsilon;
  r.run_id = make_run_id(r.experiment, r.method, r.dataset, r.eta, r.seed, r.epsilon);
  return r;
}

void fill_metrics(RunRecord& r, const MetricsReport& m) {
  r.rmse = m.rmse;
  r.mean_nll = m.mean_nll;
  r.mean_interval_score = m.mean_interval_score;
  r.calibration_error = m.calibration_error;
  r.entropy_median = m.entropy_median;
  r.entropy_q1 = m.entropy_q1;
  r.entropy_q3 = m.entropy_q3;
  r.calibration_levels = m.calibration.expected_levels;
  r.calibration_observed = m.calibration.observed_frequencies;
  const double fields[] = {r.rmse, r.mean_nll, r.mean_interval_score, r.calibration_error,
                           r.entropy_median, r.entropy_q1, r.entropy_q3};
  for (double v : fields) {
    if (!std::isfinite(v)) {
      r.failed = true;
      r.diagnostic = "non-finite metric value";
    }
  }
}

// Train/test split for one cell: outliers go into the training side only.
struct CellData {
  Dataset train;
  Dataset test;
};

CellData prepare(const ExperimentSpec& spec, const Dataset& source, const Cell& cell) {
  const std::string exp = experiment_name(spec.experiment);
  auto [train_set, test_set] =
      split(source, spec.test_fraction, cell_seed("split", exp, "", cell.dataset, 0.0, cell.seed));
  OutlierSpec os{cell.eta, spec.outlier_model, spec.uniform_margin};
  train_set = inject_outliers(train_set, os,
                              cell_seed("outliers", exp, "", cell.dataset, cell.eta, cell.seed));
  return {std::move(train_set), test_set.clean_rows()};
}

// Fits with up to kTrainAttempts derived seeds; rethrows the last divergence.
Predictor fit_with_retries(const ExperimentSpec& spec, const Cell& cell, const Dataset& train_set) {
  const std::string exp = experiment_name(spec.experiment);
  const std::string method(family_name(cell.method));
  for (int attempt = 0;; ++attempt) {
    const std::uint64_t seed = cell_seed("train#" + std::to_string(attempt), exp, method,
                                         cell.dataset, cell.eta, cell.seed);
    try {
      return fit_predictor(cell.method, train_set, fit_config(spec), seed);
    } catch (const TrainingDivergence&) {
      if (attempt + 1 >= kTrainAttempts) throw;
    }
  }
}

using CellFn = std::function<std::vector<RunRecord>(const Cell&)>;

// Runs every cell; a diverged cell becomes failed records built by `on_failure`.
std::vector<RunRecord> run_cells(const ExperimentSpec& spec, const std::vector<Cell>& cells,
                                 const CellFn& fn,
                                 const std::function<std::vector<RunRecord>(const Cell&,
                                                                            const std::string&)>&
                                     on_failure) {
  std::vector<std::vector<RunRecord>> slots(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  const long n = static_cast<long>(cells.size());
  const int threads = static_cast<int>(std::max<std::size_t>(1, spec.threads));
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long i = 0; i < n; ++i) {
    const auto start = std::chrono::steady_clock::now();
    try {
      slots[i] = fn(cells[i]);
    } catch (const TrainingDivergence& e) {
      slots[i] = on_failure(cells[i], std::string(e.what()) + " after " +
                                          std::to_string(kTrainAttempts) + " attempts");
    } catch (...) {
      errors[i] = std::current_exception();
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    for (auto& r : slots[i]) r.wall_ms = ms;
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<RunRecord> records;
  for (auto& s : slots) {
    for (auto& r : s) records.push_back(std::move(r));
  }
  sort_records(records);
  check_unique_keys(records);
  return records;
}

std::vector<Cell> grid(const ExperimentSpec& spec, const std::vector<std::string>& datasets) {
  std::vector<Cell> cells;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (Family m : spec.methods) {
      for (double eta : spec.etas) {
        for (std::uint64_t seed : spec.seeds) cells.push_back({m, datasets[d], d, eta, seed});
      }
    }
  }
  return cells;
}

Dataset sine_source(const ExperimentSpec& spec, std::uint64_t seed) {
  return gen_sine(spec.sine(), cell_seed("data", experiment_name(spec.experiment), "", "sine",
                                         0.0, seed));
}

std::vector<RunRecord> single_failure(const ExperimentSpec& spec, const Cell& cell,
                                      const std::string& why) {
  RunRecord r = base_record(spec, cell);
  r.failed = true;
  r.diagnostic = why;
  return {r};
}

// Sweep over the whole generator-based grid, evaluating each cell on its clean test split.
std::vector<RunRecord> run_generator_grid(const ExperimentSpec& spec) {
  const auto cells = grid(spec, {"sine"});
  return run_cells(
      spec, cells,
      [&](const Cell& cell) {
        const CellData data = prepare(spec, sine_source(spec, cell.seed), cell);
        const Predictor model = fit_with_retries(spec, cell, data.train);
        RunRecord r = base_record(spec, cell);
        fill_metrics(r, evaluate(model.predict(data.test.features), data.test.targets.column(0),
                                 {spec.interval_alpha}));
        return std::vector<RunRecord>{r};
      },
      [&](const Cell& cell, const std::string& why) { return single_failure(spec, cell, why); });
}

}  // namespace

std::string experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::breakaway: return "breakaway";
    case ExperimentKind::regression: return "regression";
    case ExperimentKind::attack: return "attack";
    case ExperimentKind::ood: return "ood";
    case ExperimentKind::demo1d: return "demo1d";
  }
  return "unknown";
}

ExperimentKind parse_experiment(const std::string& name) {
  for (auto k : {ExperimentKind::breakaway, ExperimentKind::regression, ExperimentKind::attack,
                 ExperimentKind::ood, ExperimentKind::demo1d}) {
    if (experiment_name(k) == name) return k;
  }
  throw ConfigError("unknown experiment '" + name +
                    "' (expected breakaway, regression, attack, ood or demo1d)");
}

ExperimentSpec ExperimentSpec::defaults(ExperimentKind kind) {
  ExperimentSpec s;
  s.experiment = kind;
  switch (kind) {
    case ExperimentKind::breakaway:
      for (int k = 0; k <= 10; ++k) s.etas.push_back(0.05 * k);
      break;
    case ExperimentKind::regression:
      s.hidden_layers = 3;
      s.batch_size = 512;
      s.iterations = 2000;
      s.etas = {0.0};
      s.seeds.clear();
      for (std::uint64_t k = 0; k < 20; ++k) s.seeds.push_back(k);
      break;
    case ExperimentKind::attack:
    case ExperimentKind::ood:
      s.etas = {0.1};
      s.seeds = {0, 1, 2};
      break;
    case ExperimentKind::demo1d:
      s.etas = {0.0, 0.1};
      s.seeds = {0};
      break;
  }
  return s;
}

void ExperimentSpec::validate() const {
  if (methods.empty()) throw ConfigError("methods must not be empty");
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  if (etas.empty()) throw ConfigError("etas must not be empty");
  for (double eta : etas) OutlierSpec{eta, outlier_model, uniform_margin}.validate();
  if (std::find(methods.begin(), methods.end(), Family::ensemble) != methods.end() &&
      ensemble_size < 2) {
    throw ConfigError("ensemble_size must be >= 2 when the ensemble method is selected");
  }
  if (hidden_layers > 0 && hidden_width == 0) throw ConfigError("hidden_width must be >= 1");
  if (!(evidential_lambda >= 0.0)) throw ConfigError("evidential_lambda must be >= 0");
  IntervalConfig{interval_alpha}.validate();
  TrainConfig{learning_rate, batch_size, iterations, 0}.validate();
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in (0, 1)");
  }
  sine().validate();
  if (experiment == ExperimentKind::ood && ood_csv.empty()) ood_sine().validate();
  if (experiment == ExperimentKind::regression && csv_paths.empty()) {
    throw ConfigError("regression needs csv_paths");
  }
  if (experiment == ExperimentKind::attack) AttackConfig{epsilons}.validate();
  if (threads == 0) throw ConfigError("threads must be >= 1");
  auto sorted = methods;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError("methods contains duplicates");
  }
}

SineConfig ExperimentSpec::sine() const {
  return {sine_n, sine_x_min, sine_x_max, sine_amplitude, sine_sigma_lo, sine_sigma_hi};
}

SineConfig ExperimentSpec::ood_sine() const {
  return {sine_n, ood_x_min, ood_x_max, sine_amplitude, sine_sigma_lo, sine_sigma_hi};
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_config_value(ExperimentSpec& spec, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown config key: " + key);
  it->second(spec, key, value);
}

void apply_config_text(ExperimentSpec& spec, const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<std::string> unknown;
  std::stringstream ss(text);
  std::string line;
  std::size_t row = 0;
  while (std::getline(ss, line)) {
    ++row;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(row) + ": expected 'key = value'", row);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (setters().count(key) == 0) {
      unknown.push_back(key);
    } else {
      entries.emplace_back(key, value);
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }
  for (const auto& [k, v] : entries) apply_config_value(spec, k, v);
}

void apply_config_file(ExperimentSpec& spec, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(spec, buf.str());
}

std::uint64_t cell_seed(const std::string& purpose, const std::string& experiment,
                        const std::string& method, const std::string& dataset, double eta,
                        std::uint64_t seed) {
  return hash_key(purpose + "|" + experiment + "|" + method + "|" + dataset + "|" +
                  format_number(eta) + "|" + std::to_string(seed));
}

std::vector<RunRecord> run_breakaway(const ExperimentSpec& spec) {
  if (spec.experiment != ExperimentKind::breakaway) throw ConfigError("spec is not a breakaway spec");
  spec.validate();
  return run_generator_grid(spec);
}

std::vector<RunRecord> run_regression_bench(const ExperimentSpec& spec) {
  if (spec.experiment != ExperimentKind::regression) {
    throw ConfigError("spec is not a regression spec");
  }
  spec.validate();
  std::vector<Dataset> sources;
  std::vector<std::string> names;
  for (const auto& path : spec.csv_paths) {
    try {
      Dataset d = load_csv(path, spec.target_column);
      names.push_back(d.name);
      sources.push_back(std::move(d));
    } catch (const ParseError& e) {
      std::cerr << "skipping dataset '" << path << "': " << e.what() << '\n';
    }
  }
  const auto cells = grid(spec, names);
  return run_cells(
      spec, cells,
      [&](const Cell& cell) {
        const CellData data = prepare(spec, sources[cell.source], cell);
        const Predictor model = fit_with_retries(spec, cell, data.train);
        RunRecord r = base_record(spec, cell);
        fill_metrics(r, evaluate(model.predict(data.test.features), data.test.targets.column(0),
                                 {spec.interval_alpha}));
        return std::vector<RunRecord>{r};
      },
      [&](const Cell& cell, const std::string& why) { return single_failure(spec, cell, why); });
}

std::vector<RunRecord> run_attack(const ExperimentSpec& spec) {
  if (spec.experiment != ExperimentKind::attack) throw ConfigError("spec is not an attack spec");
  spec.validate();
  const AttackConfig attack{spec.epsilons};
  const auto cells = grid(spec, {"sine"});
  return run_cells(
      spec, cells,
      [&](const Cell& cell) {
        const CellData data = prepare(spec, sine_source(spec, cell.seed), cell);
        const Predictor model = fit_with_retries(spec, cell, data.train);
        std::vector<RunRecord> out;
        for (const auto& row : attack_sweep(model, data.test, attack, {spec.interval_alpha})) {
          RunRecord r = base_record(spec, cell, row.epsilon);
          fill_metrics(r, row.metrics);
          out.push_back(std::move(r));
        }
        return out;
      },
      [&](const Cell& cell, const std::string& why) {
        std::vector<RunRecord> out;
        for (double eps : attack.epsilons) {
          RunRecord r = base_record(spec, cell, eps);
          r.failed = true;
          r.diagnostic = why;
          out.push_back(std::move(r));
        }
        return out;
      });
}

std::vector<RunRecord> run_ood(const ExperimentSpec& spec) {
  if (spec.experiment != ExperimentKind::ood) throw ConfigError("spec is not an ood spec");
  spec.validate();

  // In-distribution source: the first CSV when given, the sine generator otherwise.
  const bool from_csv = !spec.csv_paths.empty();
  std::optional<Dataset> id_csv;
  std::optional<Dataset> ood_csv;
  if (from_csv) id_csv = load_csv(spec.csv_paths.front(), spec.target_column);
  if (!spec.ood_csv.empty()) ood_csv = load_csv(spec.ood_csv, spec.target_column);
  const std::size_t id_width = id_csv ? id_csv->features.cols() : 1;
  if (ood_csv && ood_csv->features.cols() != id_width) {
    throw ConfigError("ood source has " + std::to_string(ood_csv->features.cols()) +
                      " features, in-distribution source has " + std::to_string(id_width));
  }
  const std::string id_name = id_csv ? id_csv->name : "sine";
  const std::string ood_name = id_name + "-ood";
  const std::string exp = experiment_name(spec.experiment);

  const auto cells = grid(spec, {id_name});
  return run_cells(
      spec, cells,
      [&](const Cell& cell) {
        const Dataset source = id_csv ? *id_csv : sine_source(spec, cell.seed);
        const CellData data = prepare(spec, source, cell);
        const Predictor model = fit_with_retries(spec, cell, data.train);
        // A CSV shifted source is evaluated on the split an in-distribution source would get,
        // so comparing a source against itself yields identical evaluation rows.
        const Dataset shifted =
            ood_csv ? split(*ood_csv, spec.test_fraction,
                            cell_seed("split", exp, "", cell.dataset, 0.0, cell.seed))
                          .second
                    : gen_sine(spec.ood_sine(), cell_seed("ood-data", exp, "", ood_name, 0.0, cell.seed));

        RunRecord id = base_record(spec, cell);
        fill_metrics(id, evaluate(model.predict(data.test.features), data.test.targets.column(0),
                                  {spec.interval_alpha}));
        Cell ood_cell = cell;
        ood_cell.dataset = ood_name;
        RunRecord ood = base_record(spec, ood_cell);
        const Dataset shifted_clean = shifted.clean_rows();
        fill_metrics(ood, evaluate(model.predict(shifted_clean.features),
                                   shifted_clean.targets.column(0), {spec.interval_alpha}));
        return std::vector<RunRecord>{id, ood};
      },
      [&](const Cell& cell, const std::string& why) {
        auto out = single_failure(spec, cell, why);
        Cell ood_cell = cell;
        ood_cell.dataset = ood_name;
        auto more = single_failure(spec, ood_cell, why);
        out.insert(out.end(), more.begin(), more.end());
        return out;
      });
}

std::vector<RunRecord> run_demo1d(const ExperimentSpec& spec) {
  if (spec.experiment != ExperimentKind::demo1d) throw ConfigError("spec is not a demo1d spec");
  spec.validate();
  std::filesystem::create_directories(spec.output_directory);
  const auto cells = grid(spec, {"sine"});
  return run_cells(
      spec, cells,
      [&](const Cell& cell) {
        const CellData data = prepare(spec, sine_source(spec, cell.seed), cell);
        const Predictor model = fit_with_retries(spec, cell, data.train);
        RunRecord r = base_record(spec, cell);
        fill_metrics(r, evaluate(model.predict(data.test.features), data.test.targets.column(0),
                                 {spec.interval_alpha}));

        constexpr std::size_t kGrid = 200;
        Tensor2 xs(kGrid, 1);
        for (std::size_t i = 0; i < kGrid; ++i) {
          xs(i, 0) = spec.sine_x_min + (spec.sine_x_max - spec.sine_x_min) *
                                           static_cast<double>(i) / (kGrid - 1);
        }
        const std::string fig = std::string(family_name(cell.method)) + "_eta" +
                                format_number(cell.eta) + "_seed" + std::to_string(cell.seed);
        write_fit_plot(std::filesystem::path(spec.output_directory) / ("demo1d_" + fig + ".svg"),
                       "demo1d " + fig, data.train, xs, model.predict(xs));
        return std::vector<RunRecord>{r};
      },
      [&](const Cell& cell, const std::string& why) { return single_failure(spec, cell, why); });
}

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec) {
  switch (spec.experiment) {
    case ExperimentKind::breakaway: return run_breakaway(spec);
    case ExperimentKind::regression: return run_regression_bench(spec);
    case ExperimentKind::attack: return run_attack(spec);
    case ExperimentKind::ood: return run_ood(spec);
    case ExperimentKind::demo1d: return run_demo1d(spec);
  }
  throw ConfigError("unknown experiment kind");
}

}  // namespace ruq
