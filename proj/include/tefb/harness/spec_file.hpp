#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tefb/core/errors.hpp"
#include "tefb/data/csv.hpp"
#include "tefb/harness/experiment.hpp"

namespace tefb {

/// Settings keyed by long flag name without the dashes ("eta",
/// "target-acc", ...). Spec files and command-line flags both reduce to
/// this, so a flag overrides a file value by simply being applied later.
using Settings = std::map<std::string, std::string>;

/// `key = value` lines; `#` starts a comment.
inline Settings parse_settings(std::istream& in) {
  Settings out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("spec line " + std::to_string(line_no) + ": expected key = value");
    }
    out[detail::trim(std::string_view(line).substr(0, eq))] =
        detail::trim(std::string_view(line).substr(eq + 1));
  }
  return out;
}

inline Settings load_settings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spec file " + path);
  return parse_settings(in);
}

namespace detail {

inline double to_real(const std::string& key, const std::string& v) {
  const auto d = parse_double(v);
  if (!d) throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
  return *d;
}

inline std::size_t to_count(const std::string& key, const std::string& v) {
  const auto d = parse_double(v);
  if (!d || *d < 0 || *d != static_cast<double>(static_cast<std::size_t>(*d))) {
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + v + "'");
  }
  return static_cast<std::size_t>(*d);
}

inline std::uint64_t to_seed(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  std::uint64_t s = 0;
  if (!(in >> s) || !in.eof()) throw ConfigError("'" + key + "' expects an unsigned integer, got '" + v + "'");
  return s;
}

}  // namespace detail

/// Applies one setting to a spec; unknown keys are an error.
inline void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value) {
  using namespace detail;
  TrainConfig& t = spec.train;
  if (key == "dataset") {
    spec.dataset = value;
  } else if (key == "schema") {
    spec.schema = value;
  } else if (key == "mode") {
    spec.mode = parse_mode(value);
  } else if (key == "eta") {
    t.eta = to_real(key, value);
  } else if (key == "g") {
    t.g = to_real(key, value);
  } else if (key == "epochs") {
    t.max_epochs = to_count(key, value);
  } else if (key == "stage1-epochs") {
    t.stage1_epochs = to_count(key, value);
  } else if (key == "target-acc") {
    t.target_accuracy = to_real(key, value);
  } else if (key == "runs") {
    spec.runs = to_count(key, value);
  } else if (key == "seed") {
    t.seed = to_seed(key, value);
  } else if (key == "hidden") {
    spec.hidden.clear();
    for (const auto& h : split_list(value)) spec.hidden.push_back(to_count(key, h));
  } else if (key == "te-interval") {
    t.te_recompute_interval = (value == "inf" || value == "never") ? 0 : to_count(key, value);
  } else if (key == "ablation") {
    t.ablation = parse_ablation(value);
  } else if (key == "split") {
    spec.split = to_real(key, value);
  } else if (key == "stratified") {
    spec.stratified = parse_bool(value, key);
  } else if (key == "out") {
    spec.report_dir = value;
  } else if (key == "format") {
    spec.formats = split_list(value);
    for (const auto& f : spec.formats) {
      if (f != "csv" && f != "json") throw ConfigError("unknown report format '" + f + "'");
    }
  } else if (key == "workers") {
    spec.workers = to_count(key, value);
  } else if (key == "stage2") {
    if (value != "fresh" && value != "continue") {
      throw ConfigError("'stage2' expects fresh or continue, got '" + value + "'");
    }
    t.stage2_fresh = value == "fresh";
  } else if (key == "accuracy") {
    if (value != "training" && value != "validation") {
      throw ConfigError("'accuracy' expects training or validation, got '" + value + "'");
    }
    t.accuracy_kind = value == "training" ? AccuracyKind::training : AccuracyKind::validation;
  } else if (key == "warm-up") {
    t.warm_up = to_count(key, value);
  } else if (key == "min-series") {
    t.min_series_len = to_count(key, value);
  } else {
    throw ConfigError("unknown setting '" + key + "'");
  }
}

/// Spec from defaults plus settings. CSV datasets default to validation
/// accuracy unless the settings say otherwise; an ablation kind forces
/// ablation mode.
inline ExperimentSpec build_spec(const Settings& settings) {
  ExperimentSpec spec;
  for (const auto& [key, value] : settings) apply_setting(spec, key, value);
  if (spec.train.ablation.kind != Ablation::Kind::none) spec.mode = Mode::ablation;
  if (spec.dataset != "xor" && !settings.count("accuracy")) {
    spec.train.accuracy_kind = AccuracyKind::validation;
  }
  return spec;
}

}  // namespace tefb
