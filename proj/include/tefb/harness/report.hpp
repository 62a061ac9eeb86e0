#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tefb/core/errors.hpp"
#include "tefb/harness/experiment.hpp"

namespace tefb {

using Json = nlohmann::json;

inline Json spec_to_json(const ExperimentSpec& spec) {
  const TrainConfig& t = spec.train;
  Json j;
  j["dataset"] = spec.dataset;
  j["schema"] = spec.schema;
  j["runs"] = spec.runs;
  j["mode"] = to_string(spec.mode);
  j["hidden"] = spec.hidden;
  j["split"] = spec.split;
  j["stratified"] = spec.stratified;
  j["formats"] = spec.formats;
  j["workers"] = spec.workers;
  j["eta"] = t.eta;
  j["g"] = t.g;
  j["max_epochs"] = t.max_epochs;
  j["stage1_epochs"] = t.stage1_epochs ? Json(*t.stage1_epochs) : Json(nullptr);
  j["target_accuracy"] = t.target_accuracy;
  j["accuracy_kind"] = to_string(t.accuracy_kind);
  j["te_recompute_interval"] = t.te_recompute_interval;
  j["master_seed"] = t.seed;
  j["ablation"] = to_string(t.ablation);
  j["stage2"] = t.stage2_fresh ? "fresh" : "continue";
  j["warm_up"] = t.warm_up;
  j["min_series_len"] = t.min_series_len;
  j["log_base"] = t.log_base;
  return j;
}

inline ExperimentSpec spec_from_json(const Json& j) {
  ExperimentSpec spec;
  TrainConfig& t = spec.train;
  spec.dataset = j.at("dataset").get<std::string>();
  spec.schema = j.at("schema").get<std::string>();
  spec.runs = j.at("runs").get<std::size_t>();
  spec.mode = parse_mode(j.at("mode").get<std::string>());
  spec.hidden = j.at("hidden").get<std::vector<std::size_t>>();
  spec.split = j.at("split").get<double>();
  spec.stratified = j.at("stratified").get<bool>();
  spec.formats = j.at("formats").get<std::vector<std::string>>();
  spec.workers = j.at("workers").get<std::size_t>();
  t.eta = j.at("eta").get<double>();
  t.g = j.at("g").get<double>();
  t.max_epochs = j.at("max_epochs").get<std::size_t>();
  if (!j.at("stage1_epochs").is_null()) t.stage1_epochs = j.at("stage1_epochs").get<std::size_t>();
  t.target_accuracy = j.at("target_accuracy").get<double>();
  t.accuracy_kind = j.at("accuracy_kind").get<std::string>() == "training" ? AccuracyKind::training
                                                                          : AccuracyKind::validation;
  t.te_recompute_interval = j.at("te_recompute_interval").get<std::size_t>();
  t.seed = j.at("master_seed").get<std::uint64_t>();
  t.ablation = parse_ablation(j.at("ablation").get<std::string>());
  t.stage2_fresh = j.at("stage2").get<std::string>() == "fresh";
  t.warm_up = j.at("warm_up").get<std::size_t>();
  t.min_series_len = j.at("min_series_len").get<std::size_t>();
  t.log_base = j.at("log_base").get<double>();
  return spec;
}

inline Json report_to_json(const RunReport& report) {
  Json j;
  j["config"] = spec_to_json(report.spec);
  j["dataset_name"] = report.dataset_name;
  j["train_samples"] = report.train_samples;
  j["test_samples"] = report.test_samples;
  j["clamped_values"] = report.clamped_values;
  Json runs = Json::array();
  for (const auto& r : report.runs) {
    Json jr;
    jr["run"] = r.run;
    jr["seed"] = r.seed;
    jr["mode"] = r.mode;
    jr["epochs"] = r.epochs;
    jr["reached"] = r.reached;
    jr["final_accuracy"] = r.final_accuracy;
    jr["trace"] = r.trace;
    jr["stage1_epochs"] = r.stage1_epochs ? Json(*r.stage1_epochs) : Json(nullptr);
    Json te = Json::array();
    for (const auto& s : r.te_summary) te.push_back({{"min", s.min}, {"max", s.max}, {"mean", s.mean}});
    jr["te_summary"] = te;
    jr["warnings"] = r.warnings;
    runs.push_back(std::move(jr));
  }
  j["runs"] = std::move(runs);
  Json aggs = Json::array();
  for (const auto& a : report.aggregates) {
    aggs.push_back({{"mode", a.mode},
                    {"runs", a.runs},
                    {"reached", a.reached},
                    {"mean_epochs", a.mean_epochs},
                    {"median_epochs", a.median_epochs},
                    {"mean_accuracy", a.mean_accuracy}});
  }
  j["aggregates"] = std::move(aggs);
  return j;
}

inline RunReport report_from_json(const Json& j) {
  RunReport report;
  report.spec = spec_from_json(j.at("config"));
  report.dataset_name = j.at("dataset_name").get<std::string>();
  report.train_samples = j.at("train_samples").get<std::size_t>();
  report.test_samples = j.at("test_samples").get<std::size_t>();
  report.clamped_values = j.at("clamped_values").get<std::size_t>();
  for (const auto& jr : j.at("runs")) {
    RunRecord r;
    r.run = jr.at("run").get<std::size_t>();
    r.seed = jr.at("seed").get<std::uint64_t>();
    r.mode = jr.at("mode").get<std::string>();
    r.epochs = jr.at("epochs").get<std::size_t>();
    r.reached = jr.at("reached").get<bool>();
    r.final_accuracy = jr.at("final_accuracy").get<double>();
    r.trace = jr.at("trace").get<std::vector<double>>();
    if (!jr.at("stage1_epochs").is_null()) r.stage1_epochs = jr.at("stage1_epochs").get<std::size_t>();
    for (const auto& s : jr.at("te_summary")) {
      r.te_summary.push_back({s.at("min").get<double>(), s.at("max").get<double>(), s.at("mean").get<double>()});
    }
    r.warnings = jr.at("warnings").get<std::vector<std::string>>();
    report.runs.push_back(std::move(r));
  }
  for (const auto& ja : j.at("aggregates")) {
    ModeAggregate a;
    a.mode = ja.at("mode").get<std::string>();
    a.runs = ja.at("runs").get<std::size_t>();
    a.reached = ja.at("reached").get<std::size_t>();
    a.mean_epochs = ja.at("mean_epochs").get<double>();
    a.median_epochs = ja.at("median_epochs").get<double>();
    a.mean_accuracy = ja.at("mean_accuracy").get<double>();
    report.aggregates.push_back(a);
  }
  return report;
}

/// Canonical JSON text: sorted keys, two-space indent, trailing newline.
inline std::string render_json(const RunReport& report) { return report_to_json(report).dump(2) + "\n"; }

/// run,epoch,mode,accuracy with 1-based epochs, one row per trace entry.
inline void write_trace_csv(std::ostream& out, const RunReport& report) {
  out << "run,epoch,mode,accuracy\n";
  const auto precision = out.precision(10);
  for (const auto& r : report.runs) {
    if (r.trace.empty()) throw ConfigError("run " + std::to_string(r.run) + " has an empty accuracy trace");
    for (std::size_t e = 0; e < r.trace.size(); ++e) {
      out << r.run + 1 << ',' << e + 1 << ',' << r.mode << ',' << r.trace[e] << '\n';
    }
  }
  out.precision(precision);
}

/// Epochs-to-target per run, one column per mode (the layout of a
/// per-run comparison table).
inline void write_epochs_csv(std::ostream& out, const RunReport& report) {
  std::vector<std::string> modes;
  for (const auto& a : report.aggregates) modes.push_back(a.mode);
  out << "run";
  for (const auto& m : modes) out << ',' << (m == "fffb" ? "ff_fb" : m) << "_epochs";
  out << '\n';
  for (std::size_t run = 0; run < report.spec.runs; ++run) {
    out << run + 1;
    for (const auto& m : modes) {
      out << ',';
      for (const auto& r : report.runs) {
        if (r.run == run && r.mode == m) out << r.epochs;
      }
    }
    out << '\n';
  }
}

/// Per-mode averages with the cap substitution for missed targets.
inline void write_summary_csv(std::ostream& out, const RunReport& report) {
  out << "dataset,mode,target_accuracy,max_epochs,runs,reached,mean_accuracy,mean_epochs,median_epochs\n";
  const auto precision = out.precision(10);
  for (const auto& a : report.aggregates) {
    out << report.dataset_name << ',' << a.mode << ',' << report.spec.train.target_accuracy << ','
        << report.spec.train.max_epochs << ',' << a.runs << ',' << a.reached << ','
        << a.mean_accuracy << ',' << a.mean_epochs << ',' << a.median_epochs << '\n';
  }
  out.precision(precision);
}

/// Writes trace.csv, epochs.csv and summary.csv and/or report.json into
/// `dir`, creating it if needed. Returns the paths written.
inline std::vector<std::string> emit_report(const RunReport& report, const std::string& dir,
                                            const std::vector<std::string>& formats) {
  if (report.runs.empty()) throw ConfigError("report has no runs");
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> written;
  auto open = [&](const std::string& name) {
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream out(path);
    if (!out) throw IngestError("cannot write " + path);
    written.push_back(path);
    return out;
  };
  for (const auto& f : formats) {
    if (f == "csv") {
      auto trace = open("trace.csv");
      write_trace_csv(trace, report);
      auto epochs = open("epochs.csv");
      write_epochs_csv(epochs, report);
      auto summary = open("summary.csv");
      write_summary_csv(summary, report);
    } else if (f == "json") {
      auto json = open("report.json");
      json << render_json(report);
    } else {
      throw ConfigError("unknown report format '" + f + "'");
    }
  }
  return written;
}

}  // namespace tefb
