// Command-line front end for the benchmark harness.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ruq/data.hpp"
#include "ruq/errors.hpp"
#include "ruq/experiment.hpp"
#include "ruq/records.hpp"
#include "ruq/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::size_t> seeds;
  std::string methods;
  std::optional<std::size_t> threads;
  std::vector<std::string> csv;
  std::string ood_csv;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seeds", f.seeds, "use seeds 0..n-1")->check(CLI::PositiveNumber);
  cmd->add_option("--methods", f.methods, "comma list of gaussian,laplace,evidential,ensemble");
  cmd->add_option("--threads", f.threads, "worker threads for grid cells")
      ->check(CLI::PositiveNumber);
}

ruq::ExperimentSpec build_spec(ruq::ExperimentKind kind, const CommonFlags& f) {
  auto spec = ruq::ExperimentSpec::defaults(kind);
  if (!f.config.empty()) {
    ruq::apply_config_file(spec, f.config);
    if (spec.experiment != kind) {
      throw ruq::ConfigError("config sets experiment = " + ruq::experiment_name(spec.experiment) +
                             " but the subcommand runs " + ruq::experiment_name(kind));
    }
  }
  if (!f.out.empty()) spec.output_directory = f.out;
  if (f.seeds) {
    spec.seeds.clear();
    for (std::size_t k = 0; k < *f.seeds; ++k) spec.seeds.push_back(k);
  }
  if (!f.methods.empty()) ruq::apply_config_value(spec, "methods", f.methods);
  if (f.threads) spec.threads = *f.threads;
  if (!f.csv.empty()) spec.csv_paths = f.csv;
  if (!f.ood_csv.empty()) spec.ood_csv = f.ood_csv;
  spec.validate();
  return spec;
}

int run(ruq::ExperimentKind kind, const CommonFlags& f) {
  const auto spec = build_spec(kind, f);
  const auto records = ruq::run_experiment(spec);
  const fs::path out = spec.output_directory;
  fs::create_directories(out);
  ruq::write_records_csv(out / "records.csv", records);
  ruq::write_calibration_csv(out / "calibration.csv", records);
  ruq::write_failures_csv(out / "failures.csv", records);
  if (records.empty()) {
    std::cerr << "no records produced\n";
    return kExitRuntime;
  }
  const auto bundle = ruq::emit_report(records, out);
  const auto failed = std::count_if(records.begin(), records.end(), [](const auto& r) { return r.failed; });
  std::cout << records.size() << " records, " << bundle.summary.size() << " summary rows, "
            << bundle.plots.size() << " plots written to " << out.string() << '\n';
  if (failed > 0) {
    std::cerr << failed << " cell(s) failed after retries; see " << (out / "failures.csv").string()
              << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int gen_data(const CommonFlags& f) {
  auto spec = ruq::ExperimentSpec::defaults(ruq::ExperimentKind::ood);
  if (!f.config.empty()) ruq::apply_config_file(spec, f.config);
  const fs::path out = f.out.empty() ? fs::path(spec.output_directory) : fs::path(f.out);
  fs::create_directories(out);
  const std::size_t n = f.seeds.value_or(1);
  for (std::size_t k = 0; k < n; ++k) {
    const std::string suffix = n > 1 ? "_seed" + std::to_string(k) : "";
    ruq::write_csv(out / ("sine" + suffix + ".csv"),
                   ruq::gen_sine(spec.sine(), ruq::cell_seed("gen-data", "", "", "sine", 0.0, k)),
                   {"x"}, "y");
    ruq::write_csv(out / ("sine_ood" + suffix + ".csv"),
                   ruq::gen_sine(spec.ood_sine(),
                                 ruq::cell_seed("gen-data", "", "", "sine-ood", 0.0, k)),
                   {"x"}, "y");
    ruq::TabularConfig tab;
    tab.n = spec.sine_n;
    ruq::write_csv(out / ("synthetic" + suffix + ".csv"),
                   ruq::gen_tabular(tab, ruq::cell_seed("gen-data", "", "", "synthetic", 0.0, k)),
                   {"x0", "x1", "x2", "x3"}, "y");
  }
  std::cout << "wrote " << 3 * n << " datasets to " << out.string() << '\n';
  return kExitOk;
}

int report(const std::string& records_path, const std::string& out_dir) {
  const auto records = ruq::read_records_csv(records_path);
  const fs::path out = out_dir.empty() ? fs::path(records_path).parent_path() : fs::path(out_dir);
  const auto bundle = ruq::emit_report(records, out);
  std::cout << bundle.summary.size() << " summary rows, " << bundle.plots.size()
            << " plots written to " << out.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust uncertainty-estimation regression benchmark"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* gen = app.add_subcommand("gen-data", "write sine, shifted sine and synthetic tabular CSVs");
  add_common(gen, flags);

  struct Bench {
    const char* name;
    const char* help;
    ruq::ExperimentKind kind;
  };
  const Bench benches[] = {
      {"bench-breakaway", "outlier-fraction sweep on the 1D sine benchmark",
       ruq::ExperimentKind::breakaway},
      {"bench-regression", "tabular CSV benchmark (random 90/10 splits)",
       ruq::ExperimentKind::regression},
      {"attack", "FGSM sweep over epsilon", ruq::ExperimentKind::attack},
      {"ood", "predictive entropy on in-distribution vs shifted inputs", ruq::ExperimentKind::ood},
      {"demo-1d", "1D fits with uncertainty bands", ruq::ExperimentKind::demo1d},
  };
  std::vector<std::pair<CLI::App*, ruq::ExperimentKind>> runners;
  for (const auto& b : benches) {
    auto* cmd = app.add_subcommand(b.name, b.help);
    add_common(cmd, flags);
    if (b.kind == ruq::ExperimentKind::regression || b.kind == ruq::ExperimentKind::ood) {
      cmd->add_option("--csv", flags.csv, "input CSV file(s)")->delimiter(',');
    }
    if (b.kind == ruq::ExperimentKind::ood) {
      cmd->add_option("--ood-csv", flags.ood_csv, "shifted-domain CSV");
    }
    runners.emplace_back(cmd, b.kind);
  }

  std::string records_path;
  std::string report_out;
  auto* rep = app.add_subcommand("report", "summary.csv and plots from an existing records.csv");
  rep->add_option("--records", records_path, "records.csv to read")->required();
  rep->add_option("--out", report_out, "output directory (defaults to the records directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (gen->parsed()) return gen_data(flags);
    if (rep->parsed()) return report(records_path, report_out);
    for (const auto& [cmd, kind] : runners) {
      if (cmd->parsed()) return run(kind, flags);
    }
  } catch (const ruq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ruq::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
