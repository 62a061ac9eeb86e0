#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "tefb/core/errors.hpp"
#include "tefb/core/rng.hpp"
#include "tefb/data/csv.hpp"
#include "tefb/data/split.hpp"
#include "tefb/data/xor.hpp"
#include "tefb/train/trainer.hpp"

namespace tefb {

enum class Mode { ff, fffb, both, ablation };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::ff: return "ff";
    case Mode::fffb: return "fffb";
    case Mode::both: return "both";
    case Mode::ablation: return "ablation";
  }
  return "?";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "ff") return Mode::ff;
  if (s == "fffb" || s == "ff_fb" || s == "ff+fb") return Mode::fffb;
  if (s == "both") return Mode::both;
  if (s == "ablation") return Mode::ablation;
  throw ConfigError("unknown mode '" + s + "' (expected ff, fffb, both)");
}

/// Everything needed to reproduce an experiment. `train.seed` is the
/// master seed; run r trains with derive_seed(master, run, r).
struct ExperimentSpec {
  std::string dataset = "xor";  // "xor" or a CSV path
  std::string schema;           // schema file for CSV datasets
  std::size_t runs = 10;
  Mode mode = Mode::both;
  TrainConfig train;
  std::vector<std::size_t> hidden{2};
  double split = 0.7;
  bool stratified = true;
  std::string report_dir;
  std::vector<std::string> formats{"csv", "json"};
  std::size_t workers = 1;

  void validate() const {
    if (runs < 1) throw ConfigError("runs must be at least 1");
    if (hidden.empty()) throw ConfigError("at least one hidden layer size is required");
    for (std::size_t h : hidden) {
      if (h == 0) throw ConfigError("hidden layer sizes must be positive");
    }
    if (dataset != "xor" && schema.empty()) throw ConfigError("CSV datasets need a --schema");
    if (mode == Mode::ablation && train.ablation.kind == Ablation::Kind::none) {
      throw ConfigError("ablation mode needs an --ablation kind");
    }
    if (workers < 1) throw ConfigError("workers must be at least 1");
    train.validate();
  }
};

struct LayerTeSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// One training run of one mode.
struct RunRecord {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::string mode;
  std::size_t epochs = 0;  // epochs to target, or the cap
  bool reached = false;
  double final_accuracy = 0.0;
  std::vector<double> trace;
  std::optional<std::size_t> stage1_epochs;
  std::vector<LayerTeSummary> te_summary;
  std::vector<std::string> warnings;
};

/// Averages over the runs of one mode. A run that misses the target
/// contributes the epoch cap and its last recorded accuracy.
struct ModeAggregate {
  std::string mode;
  std::size_t runs = 0;
  std::size_t reached = 0;
  double mean_epochs = 0.0;
  double median_epochs = 0.0;
  double mean_accuracy = 0.0;

  friend bool operator==(const ModeAggregate&, const ModeAggregate&) = default;
};

struct RunReport {
  ExperimentSpec spec;
  std::string dataset_name;
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
  std::size_t clamped_values = 0;
  std::vector<RunRecord> runs;
  std::vector<ModeAggregate> aggregates;
};

inline std::vector<LayerTeSummary> summarize_te(const TeMatrix& te) {
  std::vector<LayerTeSummary> out;
  for (const auto& block : te.blocks) {
    LayerTeSummary s;
    if (block.size() > 0) {
      const auto v = block.values();
      s.min = *std::min_element(v.begin(), v.end());
      s.max = *std::max_element(v.begin(), v.end());
      double sum = 0.0;
      for (double x : v) sum += x;
      s.mean = sum / static_cast<double>(v.size());
    }
    out.push_back(s);
  }
  return out;
}

/// Recomputes per-mode aggregates from the run rows, modes in first-seen
/// order.
inline std::vector<ModeAggregate> aggregate_runs(const std::vector<RunRecord>& runs) {
  std::vector<ModeAggregate> out;
  std::vector<std::vector<double>> epochs;
  for (const auto& r : runs) {
    auto it = std::find_if(out.begin(), out.end(), [&](const ModeAggregate& a) { return a.mode == r.mode; });
    if (it == out.end()) {
      out.push_back({r.mode});
      epochs.emplace_back();
      it = out.end() - 1;
    }
    auto& e = epochs[static_cast<std::size_t>(it - out.begin())];
    ++it->runs;
    it->reached += r.reached ? 1 : 0;
    it->mean_epochs += static_cast<double>(r.epochs);
    it->mean_accuracy += r.final_accuracy;
    e.push_back(static_cast<double>(r.epochs));
  }
  for (std::size_t m = 0; m < out.size(); ++m) {
    auto& a = out[m];
    a.mean_epochs /= static_cast<double>(a.runs);
    a.mean_accuracy /= static_cast<double>(a.runs);
    auto& e = epochs[m];
    std::sort(e.begin(), e.end());
    const std::size_t n = e.size();
    a.median_epochs = n % 2 == 1 ? e[n / 2] : 0.5 * (e[n / 2 - 1] + e[n / 2]);
  }
  return out;
}

inline const ModeAggregate* find_aggregate(const RunReport& report, const std::string& mode) {
  for (const auto& a : report.aggregates) {
    if (a.mode == mode) return &a;
  }
  return nullptr;
}

namespace detail {

/// Raw dataset for a CSV spec, loaded once per experiment.
inline Dataset load_experiment_dataset(const ExperimentSpec& spec) {
  return load_csv(spec.dataset, load_schema(spec.schema));
}

inline RunRecord make_record(std::size_t run, std::uint64_t seed, std::string mode,
                             const StageOutcome& outcome, const StageOutcome* stage1) {
  RunRecord rec;
  rec.run = run;
  rec.seed = seed;
  rec.mode = std::move(mode);
  rec.epochs = outcome.epochs_run;
  rec.reached = outcome.reached_target;
  rec.final_accuracy = outcome.accuracy_trace.empty() ? 0.0 : outcome.accuracy_trace.back();
  rec.trace = outcome.accuracy_trace;
  rec.te_summary = summarize_te(outcome.te_snapshot);
  rec.warnings = outcome.warnings;
  if (stage1) {
    rec.stage1_epochs = stage1->epochs_run;
    rec.warnings.insert(rec.warnings.end(), stage1->warnings.begin(), stage1->warnings.end());
  }
  return rec;
}

struct PreparedRun {
  TrainData data;
  std::vector<std::size_t> sizes;
  std::size_t clamped = 0;
};

struct RunMeta {
  std::size_t clamped = 0;
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
};

inline PreparedRun prepare_run(const ExperimentSpec& spec, const std::optional<Dataset>& raw,
                               std::uint64_t seed) {
  if (!raw) {
    const Dataset table = xor_table();
    return {TrainData{xor_training_set(), std::nullopt},
            topology(table.feature_count(), spec.hidden, table.class_count), 0};
  }
  SplitResult parts = split(*raw, {spec.split, seed, spec.stratified});
  auto sizes = topology(raw->feature_count(), spec.hidden, raw->class_count);
  const std::size_t clamped = parts.clamped;
  return {TrainData{TrainingSet::shuffled(std::move(parts.train)), std::move(parts.test)},
          std::move(sizes), clamped};
}

inline std::vector<RunRecord> execute_run(const ExperimentSpec& spec,
                                          const std::optional<Dataset>& raw, std::size_t run,
                                          RunMeta& meta) {
  const std::uint64_t seed = derive_seed(spec.train.seed, seed_stream::run, run);
  TrainConfig cfg = spec.train;
  cfg.seed = seed;
  const PreparedRun prep = prepare_run(spec, raw, seed);
  meta.clamped = prep.clamped;
  meta.train_samples = prep.data.train.epoch_size();
  meta.test_samples = prep.data.validation ? prep.data.validation->size() : 0;
  std::vector<RunRecord> out;
  if (spec.mode == Mode::fffb || spec.mode == Mode::both) {
    const auto fb = train_fffb(prep.sizes, prep.data, cfg);
    out.push_back(make_record(run, seed, "fffb", fb.stage2, &*fb.stage1));
  }
  if (spec.mode == Mode::ff || spec.mode == Mode::both) {
    const auto ff = train_ff(baseline_network(prep.sizes, cfg), prep.data, cfg);
    out.push_back(make_record(run, seed, "ff", ff, nullptr));
  }
  if (spec.mode == Mode::ablation) {
    const auto ab = run_ablation(prep.sizes, prep.data, cfg);
    out.push_back(make_record(run, seed, "ablation:" + to_string(cfg.ablation), ab.stage2,
                              ab.stage1 ? &*ab.stage1 : nullptr));
  }
  return out;
}

}  // namespace detail

/// Runs every seeded run of an experiment and assembles the report. Runs may
/// execute on `spec.workers` threads; the result does not depend on it.
inline RunReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  RunReport report;
  report.spec = spec;
  std::optional<Dataset> raw;
  if (spec.dataset != "xor") raw = detail::load_experiment_dataset(spec);
  report.dataset_name = raw ? raw->name : "xor";
  if (!raw && spec.train.accuracy_kind != AccuracyKind::training) {
    throw ConfigError("xor experiments measure training accuracy");
  }

  std::vector<std::vector<RunRecord>> per_run(spec.runs);
  std::vector<detail::RunMeta> meta(spec.runs);
  if (spec.workers <= 1) {
    for (std::size_t r = 0; r < spec.runs; ++r) per_run[r] = detail::execute_run(spec, raw, r, meta[r]);
  } else {
    for (std::size_t start = 0; start < spec.runs; start += spec.workers) {
      std::vector<std::future<std::vector<RunRecord>>> batch;
      const std::size_t end = std::min(spec.runs, start + spec.workers);
      for (std::size_t r = start; r < end; ++r) {
        batch.push_back(std::async(std::launch::async, [&, r] {
          return detail::execute_run(spec, raw, r, meta[r]);
        }));
      }
      for (std::size_t r = start; r < end; ++r) per_run[r] = batch[r - start].get();
    }
  }
  for (auto& records : per_run) {
    for (auto& rec : records) report.runs.push_back(std::move(rec));
  }
  for (const auto& m : meta) report.clamped_values += m.clamped;
  report.train_samples = meta.front().train_samples;
  report.test_samples = meta.front().test_samples;
  report.aggregates = aggregate_runs(report.runs);
  return report;
}

}  // namespace tefb
