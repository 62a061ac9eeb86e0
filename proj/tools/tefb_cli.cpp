// tefb: train, compare and grid-search FF vs FF+FB networks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tefb/tefb.hpp"

namespace {

using tefb::ExperimentSpec;
using tefb::RunReport;
using tefb::Settings;

// Flags that map one-to-one onto spec-file keys.
const std::vector<std::pair<std::string, std::string>> kSettingFlags = {
    {"dataset", "Dataset CSV path, or xor"},
    {"schema", "Schema file for a CSV dataset"},
    {"mode", "ff, fffb or both"},
    {"eta", "Learning rate"},
    {"g", "Binarization threshold"},
    {"epochs", "Epoch cap per stage"},
    {"stage1-epochs", "Stage I epoch budget (default: the cap)"},
    {"target-acc", "Target accuracy in [0,1]"},
    {"runs", "Seeded runs per mode"},
    {"seed", "Master seed"},
    {"hidden", "Hidden layer sizes, comma separated"},
    {"te-interval", "Samples between te refreshes in Stage I (never = end of stage only)"},
    {"ablation", "fixed:<v>, scale01, layer:<f> or frozen[:<w>]"},
    {"split", "Training fraction of a CSV dataset"},
    {"stratified", "Stratify the split by class (true/false)"},
    {"out", "Report directory"},
    {"format", "Report formats: csv,json"},
    {"workers", "Parallel runs"},
    {"stage2", "fresh or continue"},
    {"accuracy", "training or validation"},
    {"warm-up", "Patterns skipped before recording series"},
    {"min-series", "Shortest series that yields a te estimate"},
};

struct CommonOptions {
  std::string spec_file;
  std::vector<std::optional<std::string>> values = std::vector<std::optional<std::string>>(kSettingFlags.size());

  void attach(CLI::App& app) {
    app.add_option("--spec", spec_file, "Spec file of key = value lines; flags override it")
        ->check(CLI::ExistingFile);
    for (std::size_t i = 0; i < kSettingFlags.size(); ++i) {
      app.add_option("--" + kSettingFlags[i].first, values[i], kSettingFlags[i].second);
    }
  }

  ExperimentSpec build() const {
    Settings settings;
    if (!spec_file.empty()) settings = tefb::load_settings(spec_file);
    for (std::size_t i = 0; i < kSettingFlags.size(); ++i) {
      if (values[i]) settings[kSettingFlags[i].first] = *values[i];
    }
    return tefb::build_spec(settings);
  }
};

void print_aggregates(const RunReport& report) {
  std::printf("dataset %s  train %zu  test %zu  clamped %zu\n", report.dataset_name.c_str(),
              report.train_samples, report.test_samples, report.clamped_values);
  for (const auto& a : report.aggregates) {
    std::printf("%-22s reached %zu/%zu  mean epochs %.1f  median %.1f  mean acc %.4f\n", a.mode.c_str(),
                a.reached, a.runs, a.mean_epochs, a.median_epochs, a.mean_accuracy);
  }
}

void emit(const RunReport& report) {
  if (report.spec.report_dir.empty()) return;
  for (const auto& path : tefb::emit_report(report, report.spec.report_dir, report.spec.formats)) {
    std::printf("wrote %s\n", path.c_str());
  }
}

void warn(const RunReport& report) {
  for (const auto& r : report.runs) {
    for (const auto& w : r.warnings) std::fprintf(stderr, "run %zu %s: %s\n", r.run + 1, r.mode.c_str(), w.c_str());
  }
}

// A single run, with the option of dumping the FF+FB te matrix.
int cmd_train(ExperimentSpec spec, const std::string& dump_te) {
  spec.runs = 1;
  spec.validate();
  std::optional<tefb::Dataset> raw;
  if (spec.dataset != "xor") raw = tefb::detail::load_experiment_dataset(spec);
  const std::uint64_t seed = tefb::derive_seed(spec.train.seed, tefb::seed_stream::run, 0);
  tefb::TrainConfig cfg = spec.train;
  cfg.seed = seed;
  const auto prep = tefb::detail::prepare_run(spec, raw, seed);

  RunReport report;
  report.spec = spec;
  report.dataset_name = raw ? raw->name : "xor";
  report.train_samples = prep.data.train.epoch_size();
  report.test_samples = prep.data.validation ? prep.data.validation->size() : 0;
  report.clamped_values = prep.clamped;
  std::optional<tefb::TeMatrix> te;
  if (spec.mode == tefb::Mode::ablation) {
    const auto ab = tefb::run_ablation(prep.sizes, prep.data, cfg);
    report.runs.push_back(tefb::detail::make_record(0, seed, "ablation:" + tefb::to_string(cfg.ablation), ab.stage2,
                                                    ab.stage1 ? &*ab.stage1 : nullptr));
    te = ab.stage2.te_snapshot;
  }
  if (spec.mode == tefb::Mode::fffb || spec.mode == tefb::Mode::both) {
    const auto fb = tefb::train_fffb(prep.sizes, prep.data, cfg);
    report.runs.push_back(tefb::detail::make_record(0, seed, "fffb", fb.stage2, &*fb.stage1));
    te = fb.stage2.te_snapshot;
  }
  if (spec.mode == tefb::Mode::ff || spec.mode == tefb::Mode::both) {
    const auto ff = tefb::train_ff(tefb::baseline_network(prep.sizes, cfg), prep.data, cfg);
    report.runs.push_back(tefb::detail::make_record(0, seed, "ff", ff, nullptr));
  }
  report.aggregates = tefb::aggregate_runs(report.runs);
  warn(report);
  print_aggregates(report);
  emit(report);
  if (!dump_te.empty()) {
    if (!te) throw tefb::ConfigError("--dump-te needs an fffb or ablation run");
    std::ofstream out(dump_te);
    if (!out) throw tefb::IngestError("cannot write " + dump_te);
    tefb::write_te_csv(out, *te);
    std::printf("wrote %s\n", dump_te.c_str());
  }
  return 0;
}

int cmd_experiment(const ExperimentSpec& spec) {
  const RunReport report = tefb::run_experiment(spec);
  warn(report);
  print_aggregates(report);
  emit(report);
  return 0;
}

int cmd_grid(const ExperimentSpec& spec, const std::vector<double>& eta_grid, const std::vector<double>& g_grid) {
  const auto result = tefb::grid_search(spec, eta_grid, g_grid);
  tefb::write_grid_csv(std::cout, result);
  std::printf("best eta %g  best g %g\n", result.best_eta, result.best_g);
  if (!spec.report_dir.empty()) {
    std::filesystem::create_directories(spec.report_dir);
    const std::string path = (std::filesystem::path(spec.report_dir) / "grid.csv").string();
    std::ofstream out(path);
    if (!out) throw tefb::IngestError("cannot write " + path);
    tefb::write_grid_csv(out, result);
    std::printf("wrote %s\n", path.c_str());
  }
  return 0;
}

// One ablation experiment per kind, sharing every other setting.
int cmd_ablate(const ExperimentSpec& base, const std::vector<std::string>& kinds) {
  const std::string root = base.report_dir;
  for (const auto& kind : kinds) {
    ExperimentSpec spec = base;
    spec.mode = tefb::Mode::ablation;
    spec.train.ablation = tefb::parse_ablation(kind);
    if (!root.empty()) spec.report_dir = (std::filesystem::path(root) / tefb::to_string(spec.train.ablation)).string();
    const RunReport report = tefb::run_experiment(spec);
    warn(report);
    print_aggregates(report);
    emit(report);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer-entropy feedback training for feedforward networks"};
  app.require_subcommand(1);

  CommonOptions train_opts, exp_opts, grid_opts, ablate_opts;
  std::string dump_te;
  std::vector<double> eta_grid{0.01, 0.025, 0.05, 0.1, 0.2, 0.5};
  std::vector<double> g_grid{0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<std::string> kinds{"fixed:0", "fixed:1", "scale01", "layer:0.5", "frozen"};

  auto* train = app.add_subcommand("train", "One seeded run");
  train_opts.attach(*train);
  train->add_option("--dump-te", dump_te, "Write the final te matrix as CSV");

  auto* experiment = app.add_subcommand("experiment", "Seeded runs of FF and/or FF+FB with a report");
  exp_opts.attach(*experiment);

  auto* grid = app.add_subcommand("grid", "Two-phase grid search over eta, then g");
  grid_opts.attach(*grid);
  grid->add_option("--eta-grid", eta_grid, "Learning rates for phase 1")->delimiter(',');
  grid->add_option("--g-grid", g_grid, "Thresholds for phase 2")->delimiter(',');

  auto* ablate = app.add_subcommand("ablate", "Ablation sweep, one experiment per kind");
  ablate_opts.attach(*ablate);
  ablate->add_option("--kinds", kinds, "Ablation kinds to sweep")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return cmd_train(train_opts.build(), dump_te);
    if (*experiment) return cmd_experiment(exp_opts.build());
    if (*grid) return cmd_grid(grid_opts.build(), eta_grid, g_grid);
    if (*ablate) {
      ExperimentSpec spec = ablate_opts.build();
      return cmd_ablate(spec, kinds);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
