#include "ruq/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>

#include "ruq/errors.hpp"
#include "ruq/rng.hpp"

namespace ruq {

std::size_t Dataset::outlier_count() const {
  return static_cast<std::size_t>(std::count(outlier_mask.begin(), outlier_mask.end(), true));
}

void Dataset::validate() const {
  if (targets.rows() != features.rows() || outlier_mask.size() != features.rows()) {
    throw InvalidInput("Dataset '" + name + "': features, targets and mask row counts disagree");
  }
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset out;
  out.features = features.gather_rows(rows);
  out.targets = targets.gather_rows(rows);
  out.outlier_mask.reserve(rows.size());
  for (std::size_t r : rows) out.outlier_mask.push_back(outlier_mask[r]);
  out.name = name;
  return out;
}

Dataset Dataset::clean_rows() const {
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < size(); ++r) {
    if (!outlier_mask[r]) keep.push_back(r);
  }
  return subset(keep);
}

void SineConfig::validate() const {
  if (n == 0) throw ConfigError("sine: n must be positive");
  if (!(x_min < x_max)) throw ConfigError("sine: x_min must be < x_max");
  if (!(sigma_lo > 0.0 && sigma_lo <= sigma_hi)) {
    throw ConfigError("sine: need 0 < sigma_lo <= sigma_hi");
  }
}

double SineConfig::noise_sigma(double x) const {
  return sigma_lo + (sigma_hi - sigma_lo) * (x - x_min) / (x_max - x_min);
}

void OutlierSpec::validate() const {
  if (!(eta >= 0.0 && eta <= 0.5)) {
    throw ConfigError("outlier fraction eta must lie in [0, 0.5], got " + std::to_string(eta));
  }
  if (!(uniform_margin >= 0.0)) throw ConfigError("uniform_margin must be >= 0");
}

std::string outlier_model_name(OutlierModel m) {
  return m == OutlierModel::uniform_y ? "uniform_y" : "sensor_dropout";
}

OutlierModel parse_outlier_model(const std::string& name) {
  if (name == "uniform_y") return OutlierModel::uniform_y;
  if (name == "sensor_dropout") return OutlierModel::sensor_dropout;
  throw ConfigError("unknown outlier model '" + name + "' (expected uniform_y or sensor_dropout)");
}

Dataset gen_sine(const SineConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  Dataset d;
  d.name = "sine";
  d.features = Tensor2(cfg.n, 1);
  d.targets = Tensor2(cfg.n, 1);
  d.outlier_mask.assign(cfg.n, false);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const double x = rng.uniform(cfg.x_min, cfg.x_max);
    d.features(i, 0) = x;
    d.targets(i, 0) = cfg.amplitude * std::sin(x) + rng.normal(0.0, cfg.noise_sigma(x));
  }
  return d;
}

void TabularConfig::validate() const {
  if (n < 2) throw ConfigError("tabular generator needs n >= 2");
  if (features < 4) throw ConfigError("tabular generator needs at least 4 features");
  if (!(noise_sigma > 0.0)) throw ConfigError("tabular noise_sigma must be > 0");
}

Dataset gen_tabular(const TabularConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  Dataset d;
  d.name = "synthetic";
  d.features = Tensor2(cfg.n, cfg.features);
  d.targets = Tensor2(cfg.n, 1);
  d.outlier_mask.assign(cfg.n, false);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    auto x = d.features.row(i);
    for (double& v : x) v = rng.uniform(-2.0, 2.0);
    const double f = std::sin(x[0]) + 0.5 * x[1] - 0.25 * x[2] * x[2] + 0.3 * x[1] * x[3];
    d.targets(i, 0) = f + rng.normal(0.0, cfg.noise_sigma);
  }
  return d;
}

Dataset inject_outliers(const Dataset& data, const OutlierSpec& spec, std::uint64_t seed) {
  spec.validate();
  data.validate();
  if (data.outlier_count() != 0) {
    throw ConfigError("inject_outliers: dataset '" + data.name + "' already contains outliers");
  }
  const std::size_t n = data.size();
  const auto count = static_cast<std::size_t>(std::llround(spec.eta * static_cast<double>(n)));
  Dataset out = data;
  if (count == 0) return out;

  double y_min = data.targets(0, 0);
  double y_max = y_min;
  for (double y : data.targets.values()) {
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  const double range = y_max - y_min;
  const double lo = y_min - spec.uniform_margin * range;
  const double hi = y_max + spec.uniform_margin * range;

  // Partial Fisher-Yates: the first `count` slots are a uniform sample without replacement.
  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.index(n - i));
    std::swap(order[i], order[j]);
  }
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t r = order[i];
    out.targets(r, 0) = spec.model == OutlierModel::uniform_y ? rng.uniform(lo, hi) : 0.0;
    out.outlier_mask[r] = true;
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

bool parse_double(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::string& target_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open CSV file '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) {
    throw ParseError("CSV file '" + path.string() + "' is empty", 1);
  }
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = split_commas(line);
  std::vector<std::string> names(header.begin(), header.end());
  const auto target_it = std::find(names.begin(), names.end(), target_column);
  if (target_it == names.end()) {
    throw ParseError("CSV file '" + path.string() + "' has no column named '" + target_column +
                         "'",
                     1);
  }
  const std::size_t target_index = static_cast<std::size_t>(target_it - names.begin());
  const std::size_t width = names.size();

  std::vector<double> features;
  std::vector<double> targets;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != width) {
      throw ParseError("CSV file '" + path.string() + "' row " + std::to_string(row) + " has " +
                           std::to_string(cells.size()) + " cells, header has " +
                           std::to_string(width),
                       row);
    }
    for (std::size_t c = 0; c < width; ++c) {
      double v;
      if (!parse_double(cells[c], v)) {
        throw ParseError("CSV file '" + path.string() + "' row " + std::to_string(row) +
                             " column " + std::to_string(c + 1) + " ('" + names[c] +
                             "'): non-numeric value '" + std::string(cells[c]) + "'",
                         row, c + 1);
      }
      (c == target_index ? targets : features).push_back(v);
    }
  }
  if (targets.empty()) throw ParseError("CSV file '" + path.string() + "' has no data rows", 1);

  Dataset d;
  const std::size_t n = targets.size();
  d.features = Tensor2(n, width - 1, std::move(features));
  d.targets = Tensor2(n, 1, std::move(targets));
  d.outlier_mask.assign(n, false);
  d.name = path.stem().string();
  return d;
}

void write_csv(const std::filesystem::path& path, const Dataset& data,
               const std::vector<std::string>& feature_names, const std::string& target_name) {
  if (feature_names.size() != data.features.cols()) {
    throw InvalidInput("write_csv: feature name count does not match feature columns");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("write_csv: cannot open '" + path.string() + "'");
  for (const auto& n : feature_names) out << n << ',';
  out << target_name << '\n';
  char buf[32];
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < data.features.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", data.features(r, c));
      out << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", data.targets(r, 0));
    out << buf << '\n';
  }
}

std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction, std::uint64_t seed) {
  data.validate();
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("split: test_fraction must lie in (0, 1)");
  }
  const std::size_t n = data.size();
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  if (n_test == 0 || n_test >= n) {
    throw ConfigError("split: test_fraction " + std::to_string(test_fraction) + " of " +
                      std::to_string(n) + " rows leaves an empty side");
  }
  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[static_cast<std::size_t>(rng.index(i + 1))]);
  }
  std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  return {data.subset(train), data.subset(test)};
}

namespace {

std::pair<double, double> mean_std(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size());
  double sd = std::sqrt(var);
  if (!(sd > 1e-12 * std::max(1.0, std::fabs(mean)))) sd = 1.0;
  return {mean, sd};
}

}  // namespace

Standardizer Standardizer::fit(const Dataset& train) {
  train.validate();
  if (train.size() == 0) throw ConfigError("Standardizer::fit: empty dataset");
  Standardizer s;
  for (std::size_t c = 0; c < train.features.cols(); ++c) {
    const auto [m, sd] = mean_std(train.features.column(c));
    s.feature_mean_.push_back(m);
    s.feature_std_.push_back(sd);
  }
  const auto [m, sd] = mean_std(train.targets.column(0));
  s.target_mean_ = m;
  s.target_std_ = sd;
  return s;
}

Tensor2 Standardizer::apply_features(const Tensor2& features) const {
  if (features.cols() != feature_mean_.size()) {
    throw InvalidInput("Standardizer: feature width mismatch");
  }
  Tensor2 out = features;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      out(r, c) = (out(r, c) - feature_mean_[c]) / feature_std_[c];
    }
  }
  return out;
}

Tensor2 Standardizer::invert_features(const Tensor2& features) const {
  if (features.cols() != feature_mean_.size()) {
    throw InvalidInput("Standardizer: feature width mismatch");
  }
  Tensor2 out = features;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      out(r, c) = feature_mean_[c] + feature_std_[c] * out(r, c);
    }
  }
  return out;
}

Dataset Standardizer::apply(const Dataset& data) const {
  Dataset out = data;
  out.features = apply_features(data.features);
  for (double& y : out.targets.values()) y = apply_target(y);
  return out;
}

Dataset Standardizer::invert(const Dataset& data) const {
  Dataset out = data;
  out.features = invert_features(data.features);
  for (double& y : out.targets.values()) y = invert_target(y);
  return out;
}

}  // namespace ruq
