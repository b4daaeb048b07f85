// Acceptance suite: one PASS/FAIL line per criterion.
//
//   ruq_acceptance [criteria...] [--out DIR] [--threads N] [--reference records.csv]
//
// With no criteria listed every criterion runs. Exit status is 0 only if all selected pass.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ruq/adversarial.hpp"
#include "ruq/data.hpp"
#include "ruq/errors.hpp"
#include "ruq/experiment.hpp"
#include "ruq/likelihoods.hpp"
#include "ruq/metrics.hpp"
#include "ruq/model.hpp"
#include "ruq/records.hpp"
#include "ruq/report.hpp"
#include "ruq/rng.hpp"
#include "support/gradient_check.hpp"

using namespace ruq;
namespace fs = std::filesystem;

namespace {

struct Options {
  fs::path out = "acceptance_out";
  std::size_t threads = 1;
  std::string reference;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string num(double v) { return fmt("%.4g", v); }

// ---- 1 -------------------------------------------------------------------------------

Outcome gradients(const Options&) {
  std::string detail;
  bool pass = true;
  std::uint64_t seed = 100;
  for (Family fam : {Family::gaussian, Family::laplace, Family::evidential}) {
    const LossKind loss{fam, 0.01};
    const Network net = testing::random_net(3, 3, 12, head_width(fam), seed);
    const auto [x, y] = testing::standard_batch(16, 3, seed + 1);
    const auto s = testing::check_parameter_gradients(net, x, y, loss, 120, seed + 2);
    const bool ok = s.checked.size() >= 100 && s.worst < 1e-4;
    pass = pass && ok;
    detail += fmt("%s %zu coords worst %.2e; ", std::string(family_name(fam)).c_str(),
                  s.checked.size(), s.worst);
    seed += 10;
  }
  return {pass, detail};
}

// ---- 2 -------------------------------------------------------------------------------

double direct_interval_score(double l, double u, double y, double a) {
  double s = u - l;
  if (y < l) s += 2.0 / a * (l - y);
  if (y > u) s += 2.0 / a * (y - u);
  return s;
}

Outcome interval_oracle(const Options&) {
  Rng rng(5);
  std::size_t mismatches = 0;
  for (int i = 0; i < 100000; ++i) {
    double l = rng.uniform(-20, 20), u = rng.uniform(-20, 20);
    if (l > u) std::swap(l, u);
    const double y = rng.uniform(-30, 30);
    const double a = rng.uniform(1e-3, 0.999);
    if (interval_score(l, u, y, a) != direct_interval_score(l, u, y, a)) ++mismatches;
  }
  const double inside = interval_score(-1.96, 1.96, 0.0, 0.05);
  const double outside = interval_score(-1.96, 1.96, 3.0, 0.05);
  const bool worked = inside == direct_interval_score(-1.96, 1.96, 0.0, 0.05) &&
                      outside == direct_interval_score(-1.96, 1.96, 3.0, 0.05) &&
                      std::fabs(inside - 3.92) < 1e-12 && std::fabs(outside - 45.52) < 1e-12;
  return {mismatches == 0 && worked,
          fmt("%zu/100000 mismatches; worked values %.12g and %.12g", mismatches, inside, outside)};
}

// ---- 3 -------------------------------------------------------------------------------

Outcome laplace_properties(const Options&) {
  std::vector<std::string> broken;
  // Minimum at y = μ: every y ≠ μ scores higher.
  for (double s : {0.05, 0.5, 1.0, 4.0}) {
    for (double mu : {-2.0, 0.0, 3.0}) {
      const double at = laplace_nll(mu, mu, s);
      for (int i = -200; i <= 200; ++i) {
        if (i != 0 && !(laplace_nll(mu + 0.03 * i, mu, s) > at)) broken.push_back("min at mu");
      }
    }
  }
  // Strictly increasing in s at zero residual.
  for (int i = 0; i < 2000; ++i) {
    const double s = 1e-3 * std::pow(1.005, i);
    if (!(laplace_nll(0, 0, s * 1.005) > laplace_nll(0, 0, s))) broken.push_back("increase in s");
  }
  // Unique minimum over s at s = |y − μ|, increasing on either side.
  for (double r : {0.1, 1.0, 7.0}) {
    const double at = laplace_nll(r, 0, r);
    for (int i = 1; i <= 1000; ++i) {
      const double lo = r * (1.0 - i / 1001.0), hi = r * (1.0 + i / 100.0);
      if (!(laplace_nll(r, 0, lo) > at) || !(laplace_nll(r, 0, hi) > at)) broken.push_back("unique min");
      if (i > 1 && !(laplace_nll(r, 0, lo) > laplace_nll(r, 0, r * (1.0 - (i - 1) / 1001.0)))) {
        broken.push_back("decreasing below");
      }
      if (i > 1 && !(laplace_nll(r, 0, hi) > laplace_nll(r, 0, r * (1.0 + (i - 1) / 100.0)))) {
        broken.push_back("increasing above");
      }
    }
  }
  const double v = laplace_nll(0, 0, 1);
  if (v != std::log(2.0)) broken.push_back("ln2");
  std::string detail = fmt("nll(0,0,1) = %.17g; %zu violations", v, broken.size());
  if (!broken.empty()) detail += " (first: " + broken.front() + ")";
  return {broken.empty(), detail};
}

// ---- 4 -------------------------------------------------------------------------------

Outcome quantile_round_trips(const Options&) {
  Rng rng(8);
  std::map<std::string, std::vector<PredictiveDistribution>> cases;
  for (int k = 0; k < 5; ++k) {
    cases["gaussian"].push_back(GaussianParams{rng.uniform(-3, 3), rng.uniform(0.05, 3)});
    cases["laplace"].push_back(LaplaceParams{rng.uniform(-3, 3), rng.uniform(0.05, 3)});
    cases["evidential"].push_back(EvidentialParams{rng.uniform(-3, 3), rng.uniform(0.1, 5),
                                                   rng.uniform(1.05, 20), rng.uniform(0.1, 5)});
    EnsembleMixture m;
    for (int j = 0; j < 5; ++j) m.members.push_back({rng.uniform(-3, 3), rng.uniform(0.05, 2)});
    cases["ensemble"].push_back(m);
  }
  bool pass = true;
  std::string detail;
  for (const auto& [name, dists] : cases) {
    double worst = 0.0;
    for (const auto& d : dists) {
      for (int i = 1; i <= 99; ++i) {
        const double p = i / 100.0;
        worst = std::max(worst, std::fabs(cdf(d, quantile(d, p)) - p));
      }
    }
    pass = pass && worst < 1e-7;
    detail += fmt("%s %.1e; ", name.c_str(), worst);
  }
  const double q = quantile(GaussianParams{0, 1}, 0.975);
  pass = pass && std::fabs(q - 1.959964) < 1e-6;
  detail += fmt("gaussian q(0.975) = %.9f", q);
  return {pass, detail};
}

// ---- 5 -------------------------------------------------------------------------------

// Tolerance: 1% of the standard deviation for the mean (a relative check on a mean near zero
// is meaningless) and 1% relative for the variance.
Outcome ensemble_monte_carlo(const Options&) {
  Rng rng(2);
  double worst_mean = 0.0, worst_var = 0.0;
  for (int k = 0; k < 20; ++k) {
    EnsembleMixture m;
    const int M = 2 + static_cast<int>(rng.index(7));
    for (int j = 0; j < M; ++j) m.members.push_back({rng.uniform(-4, 4), rng.uniform(0.1, 2.5)});
    double sum = 0.0, sq = 0.0;
    const int draws = 1000000;
    for (int i = 0; i < draws; ++i) {
      const auto& c = m.members[rng.index(m.members.size())];
      const double v = rng.normal(c.mu, c.sigma);
      sum += v;
      sq += v * v;
    }
    const double mean = sum / draws;
    const double var = sq / draws - mean * mean;
    const Moments got = ensemble_moments(m);
    worst_mean = std::max(worst_mean, std::fabs(got.mean - mean) / std::sqrt(got.variance));
    worst_var = std::max(worst_var, std::fabs(got.variance - var) / got.variance);
  }
  return {worst_mean < 0.01 && worst_var < 0.01,
          fmt("worst |mean err|/sd %.2e, worst relative variance err %.2e", worst_mean, worst_var)};
}

// ---- 6 / 10 --------------------------------------------------------------------------

ExperimentSpec breakaway_spec(const Options& o) {
  ExperimentSpec s = ExperimentSpec::defaults(ExperimentKind::breakaway);
  s.seeds = {0, 1, 2, 3, 4};
  s.threads = o.threads;
  return s;
}

std::vector<RunRecord> run_and_save(const ExperimentSpec& spec, const fs::path& dir) {
  auto records = run_experiment(spec);
  fs::create_directories(dir);
  write_records_csv(dir / "records.csv", records);
  write_calibration_csv(dir / "calibration.csv", records);
  write_failures_csv(dir / "failures.csv", records);
  emit_report(records, dir);
  return records;
}

double median_of(std::vector<double> v) { return order_stats(std::move(v)).median; }

// Per-eta statistic of one metric over the successful seeds of a method.
std::vector<SweepPoint> sweep(const std::vector<RunRecord>& recs, const std::string& method,
                              double RunRecord::*field, bool use_median) {
  std::map<double, std::vector<double>> by_eta;
  for (const auto& r : recs) {
    if (r.method == method && !r.failed) by_eta[r.eta].push_back(r.*field);
  }
  std::vector<SweepPoint> out;
  for (auto& [eta, v] : by_eta) {
    double m = 0.0;
    if (use_median) {
      m = median_of(v);
    } else {
      for (double x : v) m += x;
      m /= static_cast<double>(v.size());
    }
    out.push_back({eta, m});
  }
  return out;
}

double at_eta(const std::vector<SweepPoint>& s, double eta) {
  for (const auto& p : s) {
    if (std::fabs(p.eta - eta) < 1e-12) return p.metric;
  }
  return NAN;
}

std::string breakaway_text(std::optional<double> b) { return b ? num(*b) : std::string("none"); }

Outcome breakaway_reproduction(const Options& o) {
  const auto recs = run_and_save(breakaway_spec(o), o.out / "criterion6");
  std::size_t failed = 0;
  for (const auto& r : recs) failed += r.failed;

  // (a) clean RMSE spread across methods, seed means.
  double lo = INFINITY, hi = 0.0;
  std::string clean;
  for (const char* m : {"gaussian", "laplace", "evidential", "ensemble"}) {
    const double v = at_eta(sweep(recs, m, &RunRecord::rmse, false), 0.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    clean += fmt("%s %.3f ", m, v);
  }
  const bool a = hi / lo <= 1.3;

  // (b) Gaussian RMSE breakaway on the seed-mean sweep.
  const auto g_rmse = sweep(recs, "gaussian", &RunRecord::rmse, false);
  const auto g_break = breakaway_point(g_rmse, 0.5);
  const bool b = g_break && *g_break <= 0.15 + 1e-12;

  // (c) median interval score over seeds at η = 0.2, 0.3.
  const auto g_is_med = sweep(recs, "gaussian", &RunRecord::mean_interval_score, true);
  const auto l_is_med = sweep(recs, "laplace", &RunRecord::mean_interval_score, true);
  const bool c = at_eta(l_is_med, 0.2) <= at_eta(g_is_med, 0.2) &&
                 at_eta(l_is_med, 0.3) <= at_eta(g_is_med, 0.3);

  // (d) interval-score breakaway on the seed-mean sweeps; "none" lies beyond the grid.
  const auto g_is = breakaway_point(sweep(recs, "gaussian", &RunRecord::mean_interval_score, false));
  const auto l_is = breakaway_point(sweep(recs, "laplace", &RunRecord::mean_interval_score, false));
  const bool d = g_is && (!l_is || *l_is > *g_is);

  std::string detail =
      fmt("(a) %s clean RMSE %sratio %.3f; ", a ? "ok" : "FAIL", clean.c_str(), hi / lo) +
      fmt("(b) %s gaussian RMSE breakaway %s; ", b ? "ok" : "FAIL", breakaway_text(g_break).c_str()) +
      fmt("(c) %s median IS laplace/gaussian eta0.2 %.3f/%.3f eta0.3 %.3f/%.3f; ", c ? "ok" : "FAIL",
          at_eta(l_is_med, 0.2), at_eta(g_is_med, 0.2), at_eta(l_is_med, 0.3),
          at_eta(g_is_med, 0.3)) +
      fmt("(d) %s IS breakaway laplace %s gaussian %s; ", d ? "ok" : "FAIL",
          breakaway_text(l_is).c_str(), breakaway_text(g_is).c_str()) +
      fmt("%zu records, %zu failed", recs.size(), failed);
  return {a && b && c && d, detail};
}

// records.csv with the wall_ms column removed.
std::vector<std::string> without_wall_ms(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line.substr(0, line.rfind(',')));
  return lines;
}

Outcome determinism(const Options& o) {
  fs::path reference = o.reference;
  if (reference.empty() || !fs::exists(reference)) {
    run_and_save(breakaway_spec(o), o.out / "criterion10_first");
    reference = o.out / "criterion10_first" / "records.csv";
  }
  run_and_save(breakaway_spec(o), o.out / "criterion10");
  const auto a = without_wall_ms(reference);
  const auto b = without_wall_ms(o.out / "criterion10" / "records.csv");
  std::size_t diff = a.size() == b.size() ? 0 : std::max(a.size(), b.size());
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) diff += a[i] != b[i];
  return {a.size() > 1 && diff == 0,
          fmt("%zu lines compared against %s, %zu differ", b.size(), reference.string().c_str(), diff)};
}

// ---- 7 -------------------------------------------------------------------------------

Outcome calibration_sanity(const Options&) {
  const ExperimentSpec s = ExperimentSpec::defaults(ExperimentKind::breakaway);
  FitConfig fc;
  fc.hidden_layers = s.hidden_layers;
  fc.hidden_width = s.hidden_width;
  fc.train.learning_rate = s.learning_rate;
  fc.train.batch_size = s.batch_size;
  fc.train.iterations = s.iterations;
  const Dataset train = gen_sine(s.sine(), 1);
  SineConfig big = s.sine();
  big.n = 10000;
  const Dataset test = gen_sine(big, 2);
  const Predictor model = fit_predictor(Family::gaussian, train, fc, 3);
  const MetricsReport m = evaluate(model.predict(test.features), test.targets.column(0));
  return {m.calibration_error < 0.10,
          fmt("calibration_error %.4f on %zu clean test points (rmse %.4f)", m.calibration_error,
              test.size(), m.rmse)};
}

// ---- 8 -------------------------------------------------------------------------------

Outcome adversarial_analog(const Options& o) {
  ExperimentSpec spec = ExperimentSpec::defaults(ExperimentKind::attack);
  spec.threads = o.threads;
  const auto recs = run_and_save(spec, o.out / "criterion8");

  std::size_t good_seeds = 0;
  std::string detail;
  for (std::uint64_t seed : spec.seeds) {
    bool rmse_up = true;
    std::string worse;
    for (Family f : spec.methods) {
      const std::string m(family_name(f));
      double r0 = NAN, r1 = NAN;
      for (const auto& r : recs) {
        if (r.method != m || r.seed != seed || r.failed) continue;
        if (*r.epsilon == 0.0) r0 = r.rmse;
        if (std::fabs(*r.epsilon - 0.10) < 1e-12) r1 = r.rmse;
      }
      if (!(r1 > r0)) {
        rmse_up = false;
        worse += m + " ";
      }
    }
    std::vector<double> eps, ent;
    for (const auto& r : recs) {
      if (r.method == "laplace" && r.seed == seed && !r.failed) {
        eps.push_back(*r.epsilon);
        ent.push_back(r.entropy_median);
      }
    }
    const double rho = eps.size() > 1 ? spearman(eps, ent) : NAN;
    const bool ok = rmse_up && rho > 0.8;
    good_seeds += ok;
    detail += fmt("seed %llu: rmse up %s%s, laplace entropy %.3f->%.3f spearman %.2f; ",
                  static_cast<unsigned long long>(seed), rmse_up ? "all" : "NOT for ",
                  worse.c_str(), ent.empty() ? NAN : ent.front(), ent.empty() ? NAN : ent.back(), rho);
  }
  detail += fmt("%zu/%zu seeds satisfy both parts", good_seeds, spec.seeds.size());
  return {good_seeds >= 2, detail};
}

// ---- 9 -------------------------------------------------------------------------------

Outcome ood_analog(const Options& o) {
  ExperimentSpec spec = ExperimentSpec::defaults(ExperimentKind::ood);
  spec.threads = o.threads;
  const auto recs = run_and_save(spec, o.out / "criterion9");
  std::size_t good = 0, total = 0;
  std::string detail;
  for (const auto& g : ood_gaps(recs)) {
    if (g.method != "laplace") continue;
    ++total;
    good += g.gap() > 0.1;
    detail += fmt("seed %llu gap %.3f (ID %.3f, OOD %.3f); ", static_cast<unsigned long long>(g.seed),
                  g.gap(), g.id_median, g.ood_median);
  }
  detail += fmt("%zu/%zu seeds with gap > 0.1", good, total);
  return {total == 3 && good == 3, detail};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome(const Options&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "gradient correctness", 30, gradients},
      {2, "interval score oracle", 5, interval_oracle},
      {3, "laplace NLL properties", 5, laplace_properties},
      {4, "quantile round trips", 30, quantile_round_trips},
      {5, "ensemble moments vs Monte Carlo", 60, ensemble_monte_carlo},
      {6, "breakaway reproduction", 2 * 3600, breakaway_reproduction},
      {7, "calibration sanity", 600, calibration_sanity},
      {8, "adversarial analog", 1800, adversarial_analog},
      {9, "OOD analog", 900, ood_analog},
      {10, "determinism", 0, determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  Options opt;
  std::vector<int> selected;
  std::string out = opt.out.string();
  app.add_option("criteria", selected, "criterion numbers to run (default: all)")
      ->check(CLI::Range(1, 10));
  app.add_option("--out", out, "directory for experiment artifacts");
  app.add_option("--threads", opt.threads, "worker threads for experiment grids")
      ->check(CLI::PositiveNumber);
  app.add_option("--reference", opt.reference,
                 "records.csv of an earlier criterion-6 run for the determinism check");
  CLI11_PARSE(app, argc, argv);
  opt.out = out;

  int failures = 0;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = c.run(opt);
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      r.pass = false;
      r.detail += fmt("; over the %.0f s budget", c.budget_s);
    }
    failures += !r.pass;
    std::printf("criterion %2d %s  %s (%.1f s): %s\n", c.id, r.pass ? "PASS" : "FAIL", c.name, secs,
                r.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
