#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>

#include "tefb/core/errors.hpp"
#include "tefb/te/series_store.hpp"

namespace tefb {

enum class AccuracyKind { training, validation };

/// Control experiments on the te feedback.
struct Ablation {
  enum class Kind {
    none,
    fixed_te,        // every te entry replaced by `value`
    scale_te_unit,   // Stage-I te min-max rescaled into [0, 1]
    layer_scaled,    // te of weight layer l (1-based) multiplied by value^l
    frozen_weights,  // Stage-II weights all set to `value`, te as the only asymmetry
  };
  Kind kind = Kind::none;
  double value = 0.0;

  friend bool operator==(const Ablation&, const Ablation&) = default;
};

/// Parses `none`, `fixed:<v>`, `scale01`, `layer:<f>`, `frozen` or
/// `frozen:<w>`.
inline Ablation parse_ablation(const std::string& text) {
  auto number_after = [&](std::size_t colon) {
    const std::string rest = text.substr(colon + 1);
    std::istringstream in(rest);
    double v = 0.0;
    if (!(in >> v) || !in.eof()) throw ConfigError("bad ablation value in '" + text + "'");
    return v;
  };
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if (head == "none" && colon == std::string::npos) return {};
  if (head == "scale01" && colon == std::string::npos) return {Ablation::Kind::scale_te_unit, 0.0};
  if (head == "fixed" && colon != std::string::npos) return {Ablation::Kind::fixed_te, number_after(colon)};
  if (head == "layer" && colon != std::string::npos) return {Ablation::Kind::layer_scaled, number_after(colon)};
  if (head == "frozen") {
    return {Ablation::Kind::frozen_weights, colon == std::string::npos ? 0.1 : number_after(colon)};
  }
  throw ConfigError("unknown ablation '" + text + "' (expected fixed:<v>, scale01, layer:<f>, frozen[:<w>])");
}

inline std::string to_string(const Ablation& a) {
  std::ostringstream out;
  switch (a.kind) {
    case Ablation::Kind::none: return "none";
    case Ablation::Kind::fixed_te: out << "fixed:" << a.value; break;
    case Ablation::Kind::scale_te_unit: return "scale01";
    case Ablation::Kind::layer_scaled: out << "layer:" << a.value; break;
    case Ablation::Kind::frozen_weights: out << "frozen:" << a.value; break;
  }
  return out.str();
}

inline std::string to_string(AccuracyKind k) {
  return k == AccuracyKind::training ? "training" : "validation";
}

struct TrainConfig {
  double eta = 0.025;
  std::size_t max_epochs = 300;
  /// Stage-I epoch budget; max_epochs when unset.
  std::optional<std::size_t> stage1_epochs;
  double g = 0.7;
  double target_accuracy = 1.0;
  AccuracyKind accuracy_kind = AccuracyKind::training;
  /// Samples between te refreshes in Stage I; 0 never refreshes, so the
  /// te snapshot is computed once when Stage I ends.
  std::size_t te_recompute_interval = 1;
  std::uint64_t seed = 0;
  Ablation ablation;
  /// Stage II starts from freshly initialised weights (true) or continues
  /// from the Stage-I network (false).
  bool stage2_fresh = true;
  std::size_t warm_up = 10;
  std::size_t min_series_len = 10;
  double log_base = 2.0;

  TeConfig te_config() const {
    TeConfig c;
    c.g = g;
    c.warm_up = warm_up;
    c.min_series_len = min_series_len;
    c.log_base = log_base;
    return c;
  }

  void validate() const {
    if (!(eta > 0.0)) throw ConfigError("eta must be positive");
    if (!(g > 0.0 && g < 1.0)) throw ConfigError("g must lie in (0, 1)");
    if (max_epochs < 1) throw ConfigError("max_epochs must be at least 1");
    if (stage1_epochs && *stage1_epochs < 1) throw ConfigError("stage1_epochs must be at least 1");
    if (!(target_accuracy > 0.0 && target_accuracy <= 1.0)) {
      throw ConfigError("target accuracy must lie in (0, 1]");
    }
    te_config().validate();
  }
};

}  // namespace tefb
