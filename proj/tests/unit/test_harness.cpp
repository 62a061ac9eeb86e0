#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tefb/harness/experiment.hpp"
#include "tefb/harness/grid.hpp"
#include "tefb/harness/report.hpp"
#include "tefb/harness/spec_file.hpp"

using namespace tefb;

namespace {

const std::string kDataDir = TEFB_DATA_DIR;

ExperimentSpec small_xor(std::size_t runs) {
  ExperimentSpec spec;
  spec.runs = runs;
  spec.train.eta = 0.2;
  spec.train.max_epochs = 30;
  spec.train.seed = 42;
  return spec;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunRecord record(std::size_t run, std::size_t epochs, bool reached, std::vector<double> trace) {
  RunRecord r;
  r.run = run;
  r.mode = "ff";
  r.epochs = epochs;
  r.reached = reached;
  r.trace = std::move(trace);
  r.final_accuracy = r.trace.back();
  return r;
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Harness, AggregatesUseCapAndLastAccuracy) {
  const std::vector<RunRecord> runs{record(0, 10, true, {0.5, 1.0}), record(1, 300, false, {0.75}),
                                    record(2, 20, true, {1.0})};
  const auto agg = aggregate_runs(runs);
  ASSERT_EQ(agg.size(), 1u);
  EXPECT_EQ(agg[0].runs, 3u);
  EXPECT_EQ(agg[0].reached, 2u);
  EXPECT_DOUBLE_EQ(agg[0].mean_epochs, 110.0);
  EXPECT_EQ(agg[0].median_epochs, 20.0);
  EXPECT_DOUBLE_EQ(agg[0].mean_accuracy, 2.75 / 3.0);
}

TEST(Harness, ExperimentAggregatesAreRecomputable) {
  const RunReport report = run_experiment(small_xor(4));
  ASSERT_EQ(report.runs.size(), 8u);
  EXPECT_EQ(report.aggregates, aggregate_runs(report.runs));
  for (const auto& r : report.runs) {
    EXPECT_EQ(r.trace.size(), r.epochs);
    EXPECT_EQ(r.final_accuracy, r.trace.back());
    if (r.mode == "fffb") {
      EXPECT_TRUE(r.stage1_epochs.has_value());
      EXPECT_EQ(r.te_summary.size(), 2u);
    }
  }
}

TEST(Harness, SingleRunIsReproducible) {
  const RunReport a = run_experiment(small_xor(1));
  const RunReport b = run_experiment(small_xor(1));
  EXPECT_EQ(render_json(a), render_json(b));
}

TEST(Harness, WorkersDoNotChangeResults) {
  ExperimentSpec spec = small_xor(5);
  const std::string serial = render_json(run_experiment(spec));
  spec.workers = 3;
  RunReport parallel = run_experiment(spec);
  parallel.spec.workers = 1;
  EXPECT_EQ(render_json(parallel), serial);
}

TEST(Harness, JsonRoundTripIsByteEqual) {
  ExperimentSpec spec = small_xor(2);
  spec.train.stage1_epochs = 7;
  spec.train.te_recompute_interval = 5;
  const RunReport report = run_experiment(spec);
  const std::string text = render_json(report);
  const RunReport back = report_from_json(Json::parse(text));
  EXPECT_EQ(render_json(back), text);
}

TEST(Harness, JsonEchoesConfig) {
  const Json j = report_to_json(run_experiment(small_xor(1)));
  EXPECT_EQ(j["config"]["stage2"], "fresh");
  EXPECT_EQ(j["config"]["split"], 0.7);
  EXPECT_EQ(j["config"]["eta"], 0.2);
  EXPECT_EQ(j["config"]["master_seed"], 42u);
}

TEST(Harness, EmitWritesAllFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "tefb_emit_test";
  std::filesystem::remove_all(dir);
  ExperimentSpec spec = small_xor(3);
  const RunReport report = run_experiment(spec);
  const auto written = emit_report(report, dir.string(), {"csv", "json"});
  EXPECT_EQ(written.size(), 4u);
  const std::string epochs = slurp(dir / "epochs.csv");
  EXPECT_EQ(epochs.substr(0, epochs.find('\n')), "run,ff_fb_epochs,ff_epochs");
  EXPECT_EQ(line_count(epochs), 4u);
  const std::string trace = slurp(dir / "trace.csv");
  EXPECT_EQ(trace.substr(0, trace.find('\n')), "run,epoch,mode,accuracy");
  std::size_t rows = 0;
  for (const auto& r : report.runs) rows += r.trace.size();
  EXPECT_EQ(line_count(trace), rows + 1);
  EXPECT_LE(rows, spec.runs * spec.train.max_epochs * 2);
  EXPECT_EQ(slurp(dir / "report.json"), render_json(report));
  std::filesystem::remove_all(dir);
}

TEST(Harness, EmitRejectsEmptyTrace) {
  RunReport report;
  report.runs.push_back({});
  report.aggregates = aggregate_runs(report.runs);
  std::ostringstream out;
  EXPECT_THROW(write_trace_csv(out, report), ConfigError);
  EXPECT_THROW(emit_report(RunReport{}, "/tmp/tefb_unused", {"csv"}), ConfigError);
}

TEST(Harness, CsvExperimentSplitsPerRun) {
  ExperimentSpec spec;
  spec.dataset = kDataDir + "/uci/iris.data";
  spec.schema = kDataDir + "/schemas/iris.schema";
  spec.runs = 2;
  spec.mode = Mode::ff;
  spec.hidden = {4};
  spec.train.max_epochs = 5;
  spec.train.target_accuracy = 0.9;
  spec.train.accuracy_kind = AccuracyKind::validation;
  const RunReport report = run_experiment(spec);
  EXPECT_EQ(report.dataset_name, "iris");
  EXPECT_EQ(report.train_samples, 105u);
  EXPECT_EQ(report.test_samples, 45u);
  EXPECT_EQ(report.runs.size(), 2u);
}

TEST(Harness, XorNeedsTrainingAccuracy) {
  ExperimentSpec spec = small_xor(1);
  spec.train.accuracy_kind = AccuracyKind::validation;
  EXPECT_THROW(run_experiment(spec), ConfigError);
}

TEST(Harness, SpecFileAndOverrides) {
  std::istringstream file("# xor defaults\neta = 0.05\ng = 0.6\nhidden = 3, 2\nruns = 4\nte-interval = never\n");
  Settings s = parse_settings(file);
  s["eta"] = "0.1";  // a command-line flag wins
  const ExperimentSpec spec = build_spec(s);
  EXPECT_EQ(spec.train.eta, 0.1);
  EXPECT_EQ(spec.train.g, 0.6);
  EXPECT_EQ(spec.hidden, (std::vector<std::size_t>{3, 2}));
  EXPECT_EQ(spec.runs, 4u);
  EXPECT_EQ(spec.train.te_recompute_interval, 0u);
  EXPECT_EQ(spec.train.accuracy_kind, AccuracyKind::training);
}

TEST(Harness, SpecFileErrors) {
  std::istringstream bad("eta 0.1\n");
  EXPECT_THROW(parse_settings(bad), ConfigError);
  ExperimentSpec spec;
  EXPECT_THROW(apply_setting(spec, "colour", "red"), ConfigError);
  EXPECT_THROW(apply_setting(spec, "runs", "two"), ConfigError);
  EXPECT_THROW(apply_setting(spec, "format", "xml"), ConfigError);
}

TEST(Harness, CsvDatasetDefaultsToValidationAndAblationMode) {
  const ExperimentSpec spec = build_spec({{"dataset", "x.csv"}, {"schema", "x.schema"}, {"ablation", "scale01"}});
  EXPECT_EQ(spec.train.accuracy_kind, AccuracyKind::validation);
  EXPECT_EQ(spec.mode, Mode::ablation);
}

TEST(Harness, ShippedConfigsParse) {
  for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::path(kDataDir).parent_path() / "configs")) {
    EXPECT_NO_THROW(build_spec(load_settings(entry.path().string())).train.validate()) << entry.path();
  }
}

TEST(Grid, SinglePointGrid) {
  const GridResult r = grid_search(small_xor(2), {0.3}, {0.6});
  EXPECT_EQ(r.best_eta, 0.3);
  EXPECT_EQ(r.best_g, 0.6);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].phase, 1);
  EXPECT_EQ(r.rows[1].phase, 2);
  EXPECT_EQ(r.rows[0].ff.runs, 2u);
  EXPECT_EQ(r.rows[1].fffb.runs, 2u);
}

TEST(Grid, RankingPrefersFewerEpochsThenAccuracyThenSmallerValue) {
  ModeAggregate fast{"ff", 10, 10, 20.0, 20.0, 0.9};
  ModeAggregate slow{"ff", 10, 10, 30.0, 30.0, 1.0};
  ModeAggregate fast_better{"ff", 10, 10, 20.0, 20.0, 0.95};
  EXPECT_TRUE(detail::ranks_before(fast, 0.5, slow, 0.1));
  EXPECT_TRUE(detail::ranks_before(fast_better, 0.5, fast, 0.1));
  EXPECT_TRUE(detail::ranks_before(fast, 0.1, fast, 0.5));
  EXPECT_THROW(grid_search(small_xor(1), {}, {0.5}), ConfigError);
}
