#include "ruq/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "ruq/errors.hpp"
#include "ruq/metrics.hpp"
#include "ruq/svg.hpp"

namespace ruq {

namespace {

using Key = std::tuple<std::string, std::string, double, double>;  // method, dataset, eta, eps

MetricSummary summarize_values(const std::vector<double>& v) {
  MetricSummary s;
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

bool is_ood(const std::string& dataset) {
  const std::string suffix = kOodSuffix;
  return dataset.size() > suffix.size() &&
         dataset.compare(dataset.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Methods in first-seen order of the sorted records (alphabetical).
std::vector<std::string> methods_of(const std::vector<RunRecord>& records) {
  std::set<std::string> s;
  for (const auto& r : records) s.insert(r.method);
  return {s.begin(), s.end()};
}

std::vector<std::string> datasets_of(const std::vector<RunRecord>& records) {
  std::set<std::string> s;
  for (const auto& r : records) s.insert(r.dataset);
  return {s.begin(), s.end()};
}

using Field = MetricSummary SummaryRow::*;

// One series per method of field-mean against eta (or epsilon), for one dataset.
svg::LinePlot sweep_plot(const std::vector<SummaryRow>& rows, const std::string& dataset,
                         Field field, bool over_epsilon, const std::string& title,
                         const std::string& x_label, const std::string& y_label) {
  svg::LinePlot plot{title, x_label, y_label, {}, {}, {}, false};
  std::map<std::string, svg::Series> by_method;
  for (const auto& row : rows) {
    if (row.dataset != dataset || row.n_runs == 0) continue;
    auto& s = by_method[row.method];
    s.label = row.method;
    s.x.push_back(over_epsilon ? row.epsilon.value_or(0.0) : row.eta);
    s.y.push_back((row.*field).mean);
  }
  for (auto& [_, s] : by_method) plot.series.push_back(std::move(s));
  return plot;
}

// Mean observed coverage per level over the baseline records of each method.
svg::LinePlot calibration_plot(const std::vector<RunRecord>& records, const std::string& title) {
  double eta0 = std::numeric_limits<double>::infinity();
  for (const auto& r : records) eta0 = std::min(eta0, r.eta);
  svg::LinePlot plot{title, "expected coverage", "observed coverage", {}, {}, {}, true};
  std::map<std::string, std::map<double, std::vector<double>>> acc;
  for (const auto& r : records) {
    if (r.failed || r.eta != eta0 || is_ood(r.dataset)) continue;
    if (r.epsilon && *r.epsilon != 0.0) continue;
    for (std::size_t j = 0; j < r.calibration_levels.size(); ++j) {
      acc[r.method][r.calibration_levels[j]].push_back(r.calibration_observed[j]);
    }
  }
  for (const auto& [method, levels] : acc) {
    svg::Series s{method, {}, {}, true, false};
    for (const auto& [level, obs] : levels) {
      s.x.push_back(level);
      s.y.push_back(summarize_values(obs).mean);
    }
    plot.series.push_back(std::move(s));
  }
  return plot;
}

svg::Box box_of(const std::string& label, const std::vector<const RunRecord*>& runs) {
  std::vector<double> q1, med, q3;
  for (const auto* r : runs) {
    q1.push_back(r->entropy_q1);
    med.push_back(r->entropy_median);
    q3.push_back(r->entropy_q3);
  }
  return {label, *std::min_element(q1.begin(), q1.end()), summarize_values(q1).mean,
          summarize_values(med).mean, summarize_values(q3).mean,
          *std::max_element(q3.begin(), q3.end())};
}

std::string safe_name(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) c = '_';
  }
  return out;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
  if (records.empty()) throw ConfigError("report: no records");
  const std::string& experiment = records.front().experiment;
  for (const auto& r : records) {
    if (r.experiment != experiment) {
      throw ConfigError("report: records mix experiment kinds '" + experiment + "' and '" +
                        r.experiment + "'");
    }
  }
  struct Acc {
    SummaryRow row;
    std::vector<double> v[7];
  };
  std::map<Key, Acc> groups;
  for (const auto& r : records) {
    const Key key{r.method, r.dataset, r.eta, r.epsilon.value_or(-1.0)};
    auto& g = groups[key];
    if (g.row.experiment.empty()) {
      g.row.experiment = r.experiment;
      g.row.method = r.method;
      g.row.dataset = r.dataset;
      g.row.eta = r.eta;
      g.row.epsilon = r.epsilon;
    }
    if (r.failed) {
      ++g.row.n_failed;
      continue;
    }
    ++g.row.n_runs;
    const double vals[] = {r.rmse,           r.mean_nll,   r.mean_interval_score, r.calibration_error,
                           r.entropy_median, r.entropy_q1, r.entropy_q3};
    for (int k = 0; k < 7; ++k) g.v[k].push_back(vals[k]);
  }
  std::vector<SummaryRow> rows;
  for (auto& [_, g] : groups) {
    Field fields[] = {&SummaryRow::rmse,           &SummaryRow::mean_nll,
                      &SummaryRow::mean_interval_score, &SummaryRow::calibration_error,
                      &SummaryRow::entropy_median, &SummaryRow::entropy_q1,
                      &SummaryRow::entropy_q3};
    for (int k = 0; k < 7; ++k) g.row.*fields[k] = summarize_values(g.v[k]);
    rows.push_back(std::move(g.row));
  }
  return rows;
}

std::vector<OodGap> ood_gaps(const std::vector<RunRecord>& records) {
  std::map<std::tuple<std::string, std::string, double, std::uint64_t>, const RunRecord*> id;
  for (const auto& r : records) {
    if (!r.failed && !is_ood(r.dataset)) id[{r.method, r.dataset, r.eta, r.seed}] = &r;
  }
  std::vector<OodGap> gaps;
  for (const auto& r : records) {
    if (r.failed || !is_ood(r.dataset)) continue;
    const std::string base = r.dataset.substr(0, r.dataset.size() - std::string(kOodSuffix).size());
    const auto it = id.find({r.method, base, r.eta, r.seed});
    if (it == id.end()) continue;
    gaps.push_back({r.method, base, r.eta, r.seed, it->second->entropy_median, r.entropy_median});
  }
  std::sort(gaps.begin(), gaps.end(), [](const OodGap& a, const OodGap& b) {
    return std::tie(a.method, a.dataset, a.eta, a.seed) < std::tie(b.method, b.dataset, b.eta, b.seed);
  });
  return gaps;
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << "experiment,method,dataset,eta,epsilon,n_runs,n_failed";
  for (const char* name : {"rmse", "mean_nll", "mean_interval_score", "calibration_error",
                           "entropy_median", "entropy_q1", "entropy_q3"}) {
    out << ',' << name << "_mean," << name << "_std";
  }
  out << '\n';
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.method << ',' << r.dataset << ',' << format_number(r.eta) << ','
        << (r.epsilon ? format_number(*r.epsilon) : std::string()) << ',' << r.n_runs << ','
        << r.n_failed;
    for (const auto* m : {&r.rmse, &r.mean_nll, &r.mean_interval_score, &r.calibration_error,
                          &r.entropy_median, &r.entropy_q1, &r.entropy_q3}) {
      if (r.n_runs == 0) {
        out << ",,";
      } else {
        out << ',' << format_number(m->mean) << ',' << format_number(m->std);
      }
    }
    out << '\n';
  }
}

ReportBundle emit_report(const std::vector<RunRecord>& records, const std::filesystem::path& out_dir) {
  ReportBundle bundle;
  bundle.summary = summarize(records);
  std::filesystem::create_directories(out_dir);
  write_summary_csv(out_dir / "summary.csv", bundle.summary);

  const std::string exp = records.front().experiment;
  auto emit = [&](const std::string& figure, const std::string& document) {
    const auto path = out_dir / (exp + "_" + figure + ".svg");
    svg::write(path, document);
    bundle.plots.push_back(path);
  };

  if (exp == "breakaway") {
    for (const auto& d : datasets_of(records)) {
      const std::string suffix = datasets_of(records).size() > 1 ? "_" + safe_name(d) : "";
      emit("rmse" + suffix, svg::render(sweep_plot(bundle.summary, d, &SummaryRow::rmse, false,
                                                   "RMSE vs outlier fraction (" + d + ")",
                                                   "outlier fraction", "test RMSE")));
      emit("interval_score" + suffix,
           svg::render(sweep_plot(bundle.summary, d, &SummaryRow::mean_interval_score, false,
                                  "Interval score vs outlier fraction (" + d + ")",
                                  "outlier fraction", "mean interval score")));
    }
  } else if (exp == "attack") {
    for (const auto& d : datasets_of(records)) {
      const std::string suffix = datasets_of(records).size() > 1 ? "_" + safe_name(d) : "";
      emit("rmse" + suffix, svg::render(sweep_plot(bundle.summary, d, &SummaryRow::rmse, true,
                                                   "RMSE vs FGSM epsilon (" + d + ")", "epsilon",
                                                   "test RMSE")));
      emit("entropy" + suffix,
           svg::render(sweep_plot(bundle.summary, d, &SummaryRow::entropy_median, true,
                                  "Median entropy vs FGSM epsilon (" + d + ")", "epsilon",
                                  "median predictive entropy (nats)")));
    }
  } else if (exp == "ood") {
    svg::BoxPlot plot{"Predictive entropy: in-distribution vs shifted", "entropy (nats)", {}};
    for (const auto& m : methods_of(records)) {
      for (const bool shifted : {false, true}) {
        std::vector<const RunRecord*> runs;
        for (const auto& r : records) {
          if (r.method == m && !r.failed && is_ood(r.dataset) == shifted) runs.push_back(&r);
        }
        if (!runs.empty()) plot.boxes.push_back(box_of(m + (shifted ? " OOD" : " ID"), runs));
      }
    }
    emit("entropy", svg::render(plot));

    std::ofstream out(out_dir / "ood_gaps.csv", std::ios::binary);
    if (!out) throw ConfigError("cannot write ood_gaps.csv");
    out << "method,dataset,eta,seed,id_entropy_median,ood_entropy_median,gap\n";
    for (const auto& g : ood_gaps(records)) {
      out << g.method << ',' << g.dataset << ',' << format_number(g.eta) << ',' << g.seed << ','
          << format_number(g.id_median) << ',' << format_number(g.ood_median) << ','
          << format_number(g.gap()) << '\n';
    }
  } else if (exp == "regression") {
    for (const auto& [field, figure, label] :
         {std::tuple{&RunRecord::rmse, "rmse", "test RMSE"},
          std::tuple{&RunRecord::mean_interval_score, "interval_score", "mean interval score"}}) {
      svg::BoxPlot plot{std::string("Tabular benchmark: ") + label, label, {}};
      for (const auto& d : datasets_of(records)) {
        for (const auto& m : methods_of(records)) {
          std::vector<double> v;
          for (const auto& r : records) {
            if (r.dataset == d && r.method == m && !r.failed) v.push_back(r.*field);
          }
          if (v.empty()) continue;
          const EntropyStats q = order_stats(v);
          plot.boxes.push_back({d + "/" + m, *std::min_element(v.begin(), v.end()), q.q1, q.median,
                                q.q3, *std::max_element(v.begin(), v.end())});
        }
      }
      emit(figure, svg::render(plot));
    }
  }
  emit("calibration", svg::render(calibration_plot(records, "Calibration (" + exp + ")")));
  return bundle;
}

void write_fit_plot(const std::filesystem::path& path, const std::string& title,
                    const Dataset& train, const Tensor2& xs,
                    const std::vector<PredictiveDistribution>& dists) {
  if (xs.cols() != 1 || train.features.cols() != 1) {
    throw InvalidInput("fit plot needs one input feature");
  }
  if (dists.size() != xs.rows()) throw InvalidInput("fit plot: prediction count mismatch");
  svg::LinePlot plot{title, "x", "y", {}, {}, {}, false};
  svg::Scatter pts;
  pts.x = train.features.column(0);
  pts.y = train.targets.column(0);
  pts.highlight = train.outlier_mask;
  plot.points.push_back(std::move(pts));
  svg::Band band;
  svg::Series mean{"predictive mean", {}, {}, false, false};
  for (std::size_t i = 0; i < xs.rows(); ++i) {
    const Moments m = predictive_moments(dists[i]);
    const double sd = std::sqrt(m.variance);
    band.x.push_back(xs(i, 0));
    band.lower.push_back(m.mean - 3.0 * sd);
    band.upper.push_back(m.mean + 3.0 * sd);
    mean.x.push_back(xs(i, 0));
    mean.y.push_back(m.mean);
  }
  plot.bands.push_back(std::move(band));
  plot.series.push_back(std::move(mean));
  svg::write(path, svg::render(plot));
}

}  // namespace ruq
