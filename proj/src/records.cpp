#include "ruq/records.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "ruq/errors.hpp"
#include "ruq/rng.hpp"

namespace ruq {

namespace {

std::string key_string(const std::string& experiment, const std::string& method,
                       const std::string& dataset, double eta, std::uint64_t seed,
                       std::optional<double> epsilon) {
  return experiment + "|" + method + "|" + dataset + "|" + format_number(eta) + "|" +
         std::to_string(seed) + "|" + (epsilon ? format_number(*epsilon) : std::string());
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double to_double(const std::string& s, std::size_t row, std::size_t col) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("records: row " + std::to_string(row) + " column " + std::to_string(col) +
                         ": '" + s + "' is not a number",
                     row, col);
  }
  return v;
}

std::uint64_t to_u64(const std::string& s, std::size_t row, std::size_t col) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("records: row " + std::to_string(row) + " column " + std::to_string(col) +
                         ": '" + s + "' is not an unsigned integer",
                     row, col);
  }
  return v;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string make_run_id(const std::string& experiment, const std::string& method,
                        const std::string& dataset, double eta, std::uint64_t seed,
                        std::optional<double> epsilon) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(
                    hash_key(key_string(experiment, method, dataset, eta, seed, epsilon))));
  return buf;
}

void sort_records(std::vector<RunRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    const double ea = a.epsilon.value_or(-1.0);
    const double eb = b.epsilon.value_or(-1.0);
    return std::tie(a.experiment, a.method, a.dataset, a.eta, a.seed, ea) <
           std::tie(b.experiment, b.method, b.dataset, b.eta, b.seed, eb);
  });
}

void check_unique_keys(const std::vector<RunRecord>& records) {
  std::set<std::string> seen;
  for (const auto& r : records) {
    const auto key = key_string(r.experiment, r.method, r.dataset, r.eta, r.seed, r.epsilon);
    if (!seen.insert(key).second) throw ConfigError("duplicate record key " + key);
  }
}

void write_records_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    out << r.run_id << ',' << r.experiment << ',' << r.method << ',' << r.dataset << ','
        << format_number(r.eta) << ',' << r.seed << ','
        << (r.epsilon ? format_number(*r.epsilon) : std::string()) << ',';
    if (r.failed) {
      out << std::string(7, ',');
    } else {
      for (double v : {r.rmse, r.mean_nll, r.mean_interval_score, r.calibration_error,
                       r.entropy_median, r.entropy_q1, r.entropy_q3}) {
        out << format_number(v) << ',';
      }
    }
    out << r.wall_ms << '\n';
  }
}

void write_calibration_csv(const std::filesystem::path& path,
                           const std::vector<RunRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << "run_id,level,observed\n";
  for (const auto& r : records) {
    for (std::size_t j = 0; j < r.calibration_levels.size(); ++j) {
      out << r.run_id << ',' << format_number(r.calibration_levels[j]) << ','
          << format_number(r.calibration_observed[j]) << '\n';
    }
  }
}

void write_failures_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records) {
  const bool any = std::any_of(records.begin(), records.end(), [](const auto& r) { return r.failed; });
  if (!any) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << "run_id,diagnostic\n";
  for (const auto& r : records) {
    if (!r.failed) continue;
    std::string msg = r.diagnostic;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    out << r.run_id << ',' << msg << '\n';
  }
}

std::vector<RunRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open records file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader) {
    throw ParseError("records file '" + path.string() + "' has an unexpected header", 1);
  }
  std::vector<RunRecord> records;
  std::map<std::string, std::size_t> by_id;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto c = split_row(line);
    if (c.size() != 15) {
      throw ParseError("records: row " + std::to_string(row) + " has " + std::to_string(c.size()) +
                           " fields, expected 15",
                       row);
    }
    RunRecord r;
    r.run_id = c[0];
    r.experiment = c[1];
    r.method = c[2];
    r.dataset = c[3];
    r.eta = to_double(c[4], row, 5);
    r.seed = to_u64(c[5], row, 6);
    if (!c[6].empty()) r.epsilon = to_double(c[6], row, 7);
    if (c[7].empty()) {
      r.failed = true;
    } else {
      double* fields[] = {&r.rmse,           &r.mean_nll,   &r.mean_interval_score,
                          &r.calibration_error, &r.entropy_median, &r.entropy_q1,
                          &r.entropy_q3};
      for (std::size_t k = 0; k < 7; ++k) *fields[k] = to_double(c[7 + k], row, 8 + k);
    }
    r.wall_ms = static_cast<std::int64_t>(to_u64(c[14], row, 15));
    by_id[r.run_id] = records.size();
    records.push_back(std::move(r));
  }

  const auto cal_path = path.parent_path() / "calibration.csv";
  std::ifstream cal(cal_path, std::ios::binary);
  if (cal && std::getline(cal, line)) {
    row = 1;
    while (std::getline(cal, line)) {
      ++row;
      if (line.empty()) continue;
      const auto c = split_row(line);
      if (c.size() != 3) throw ParseError("calibration.csv: malformed row " + std::to_string(row), row);
      const auto it = by_id.find(c[0]);
      if (it == by_id.end()) continue;
      records[it->second].calibration_levels.push_back(to_double(c[1], row, 2));
      records[it->second].calibration_observed.push_back(to_double(c[2], row, 3));
    }
  }
  return records;
}

}  // namespace ruq
