#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "tefb/core/errors.hpp"
#include "tefb/core/network.hpp"
#include "tefb/core/rng.hpp"
#include "tefb/core/te_matrix.hpp"
#include "tefb/data/dataset.hpp"
#include "tefb/data/training_set.hpp"
#include "tefb/te/series_store.hpp"
#include "tefb/train/config.hpp"

namespace tefb {

/// Training rows plus the held-out rows used when accuracy_kind is
/// validation.
struct TrainData {
  TrainingSet train;
  std::optional<Dataset> validation;
};

struct StageOutcome {
  std::size_t epochs_run = 0;
  bool reached_target = false;
  std::vector<double> accuracy_trace;
  TeMatrix te_snapshot;
  Network final_network;
  std::vector<std::string> warnings;
};

/// Both stages of a feedback run. stage1 is empty for ablations that skip
/// te estimation.
struct FffbOutcome {
  std::optional<StageOutcome> stage1;
  StageOutcome stage2;
};

struct TrainHooks {
  /// Called after every weight update with the number of updates so far.
  std::function<void(std::size_t step, const Network&)> on_step;
};

/// Output units for a class count: one sigmoid unit for two classes,
/// one per class otherwise.
inline std::size_t output_units(std::size_t class_count) {
  return class_count <= 2 ? 1 : class_count;
}

inline std::vector<std::size_t> topology(std::size_t inputs, const std::vector<std::size_t>& hidden,
                                         std::size_t class_count) {
  std::vector<std::size_t> sizes{inputs};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(output_units(class_count));
  return sizes;
}

/// Starting weights for Stage I.
inline Network initial_network(const std::vector<std::size_t>& sizes, const TrainConfig& cfg) {
  return init_network(sizes, derive_seed(cfg.seed, seed_stream::init));
}

/// Starting weights for Stage II and for the FF baseline; sharing them
/// makes the te factor the only difference between the two runs.
inline Network baseline_network(const std::vector<std::size_t>& sizes, const TrainConfig& cfg) {
  return init_network(sizes, derive_seed(cfg.seed, seed_stream::stage2_init));
}

/// Fraction of `rows` whose predicted class equals the label.
inline double evaluate_accuracy(const Network& net, const Dataset& data,
                                std::span<const std::size_t> rows) {
  if (rows.empty()) throw ConfigError("cannot evaluate accuracy on an empty set");
  std::size_t correct = 0;
  for (std::size_t r : rows) {
    const auto rec = forward(net, data.sample(r));
    if (predict_class(rec.prediction()) == data.labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

inline double evaluate_accuracy(const Network& net, const Dataset& data) {
  std::vector<std::size_t> rows(data.size());
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
  return evaluate_accuracy(net, data, rows);
}

namespace detail {

inline constexpr std::uint64_t kStage1Order = 1;
inline constexpr std::uint64_t kStage2Order = 2;

struct StagePlan {
  std::uint64_t order_seed;
  std::size_t epochs;
  bool estimate_te;               // Stage I: record series and refresh te
  const TeMatrix* fixed_te;       // Stage II: frozen snapshot (nullptr = plain SGD)
};

inline void check_compatible(const Network& net, const TrainData& data, const TrainConfig& cfg) {
  cfg.validate();
  const Dataset& d = data.train.data();
  if (d.feature_count() != net.input_size()) {
    std::ostringstream msg;
    msg << "dataset has " << d.feature_count() << " features, network expects " << net.input_size();
    throw ShapeError(msg.str());
  }
  if (output_units(d.class_count) != net.output_size()) {
    std::ostringstream msg;
    msg << "dataset has " << d.class_count << " classes, network has " << net.output_size()
        << " outputs";
    throw ShapeError(msg.str());
  }
  if (cfg.accuracy_kind == AccuracyKind::validation) {
    if (!data.validation || data.validation->size() == 0) {
      throw ConfigError("validation accuracy requested but no validation set given");
    }
    if (data.validation->feature_count() != net.input_size()) {
      throw ShapeError("validation set width does not match network");
    }
  }
}

inline StageOutcome run_stage(Network net, const TrainData& data, const TrainConfig& cfg,
                              const StagePlan& plan, const TrainHooks& hooks) {
  check_compatible(net, data, cfg);
  const Dataset& train = data.train.data();
  StageOutcome outcome;
  {
    const auto counts = train.class_counts();
    const auto present = std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; });
    if (present < 2) outcome.warnings.push_back("training data has a single class; accuracy is degenerate");
  }

  const TeConfig te_cfg = cfg.te_config();
  std::optional<SeriesStore> store;
  if (plan.estimate_te) store.emplace(net.layer_sizes, cfg.warm_up);
  TeMatrix live_te = TeMatrix::zeros(net.layer_sizes);
  bool live_ready = false;

  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < plan.epochs; ++epoch) {
    const auto order = data.train.epoch_order(plan.order_seed, epoch);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const std::size_t row = order[pos];
      const auto y = encode_target(train.labels[row], net.output_size());
      const auto rec = forward(net, train.sample(row));
      if (store) store->record_step(rec, cfg.g);
      const auto grads = backward(net, rec, y);
      if (store && cfg.te_recompute_interval > 0 && (step + 1) % cfg.te_recompute_interval == 0) {
        live_ready = refresh_te_matrix(*store, te_cfg, live_te) || live_ready;
      }
      const TeMatrix* te = store ? (live_ready ? &live_te : nullptr) : plan.fixed_te;
      try {
        apply_update(net, grads, cfg.eta, te);
      } catch (const NumericalError& e) {
        std::ostringstream msg;
        msg << e.what() << " (epoch " << epoch + 1 << ", sample " << pos + 1 << ")";
        throw NumericalError(msg.str());
      }
      ++step;
      if (hooks.on_step) hooks.on_step(step, net);
    }
    const double acc = cfg.accuracy_kind == AccuracyKind::training
                           ? evaluate_accuracy(net, train, order)
                           : evaluate_accuracy(net, *data.validation);
    outcome.accuracy_trace.push_back(acc);
    outcome.epochs_run = epoch + 1;
    if (acc >= cfg.target_accuracy) {
      outcome.reached_target = true;
      break;
    }
  }

  if (store) {
    auto final_te = compute_te_matrix(*store, te_cfg);
    if (final_te) {
      outcome.te_snapshot = std::move(*final_te);
    } else {
      outcome.te_snapshot = TeMatrix::zeros(net.layer_sizes);
      outcome.warnings.push_back("activation series too short for te; snapshot is all zeros");
    }
  } else if (plan.fixed_te) {
    outcome.te_snapshot = *plan.fixed_te;
  } else {
    outcome.te_snapshot = TeMatrix::zeros(net.layer_sizes);
  }
  outcome.final_network = std::move(net);
  return outcome;
}

}  // namespace detail

/// Stage I: online training that records binarized activations and
/// refreshes te every cfg.te_recompute_interval samples once the series are
/// long enough (plain updates before that). The returned snapshot holds the
/// te computed from the complete series.
inline StageOutcome train_stage1(Network net, const TrainData& data, const TrainConfig& cfg,
                                 const TrainHooks& hooks = {}) {
  const std::size_t epochs = cfg.stage1_epochs.value_or(cfg.max_epochs);
  return detail::run_stage(std::move(net), data, cfg,
                           {derive_seed(cfg.seed, seed_stream::shuffle, detail::kStage1Order),
                            epochs, true, nullptr},
                           hooks);
}

/// Stage II: online training where every weight step is scaled by the fixed
/// (1 - te) snapshot. No series are recorded.
inline StageOutcome train_stage2(Network net, const TrainData& data, const TrainConfig& cfg,
                                 const TeMatrix& te, const TrainHooks& hooks = {}) {
  check_te_shape(te, net.weights);
  return detail::run_stage(std::move(net), data, cfg,
                           {derive_seed(cfg.seed, seed_stream::shuffle, detail::kStage2Order),
                            cfg.max_epochs, false, &te},
                           hooks);
}

/// Standard online backpropagation with the same sample order as Stage II.
inline StageOutcome train_ff(Network net, const TrainData& data, const TrainConfig& cfg,
                             const TrainHooks& hooks = {}) {
  return detail::run_stage(std::move(net), data, cfg,
                           {derive_seed(cfg.seed, seed_stream::shuffle, detail::kStage2Order),
                            cfg.max_epochs, false, nullptr},
                           hooks);
}

/// Full feedback run: Stage I from initial_network(), then Stage II from
/// either baseline_network() or the Stage-I weights.
inline FffbOutcome train_fffb(const std::vector<std::size_t>& sizes, const TrainData& data,
                              const TrainConfig& cfg) {
  FffbOutcome out;
  out.stage1 = train_stage1(initial_network(sizes, cfg), data, cfg);
  Network start = cfg.stage2_fresh ? baseline_network(sizes, cfg) : out.stage1->final_network;
  out.stage2 = train_stage2(std::move(start), data, cfg, out.stage1->te_snapshot);
  return out;
}

/// Min-max rescale of every entry into [0, 1]; all zeros when te is flat.
inline TeMatrix scale_te_unit(const TeMatrix& te) {
  const double lo = te.min();
  const double hi = te.max();
  TeMatrix out = te;
  for (auto& block : out.blocks) {
    for (double& v : block.values()) v = hi > lo ? (v - lo) / (hi - lo) : 0.0;
  }
  return out;
}

/// Multiplies the te of weight layer l (1-based) by factor^l.
inline TeMatrix layer_scale_te(const TeMatrix& te, double factor) {
  TeMatrix out = te;
  double scale = 1.0;
  for (auto& block : out.blocks) {
    scale *= factor;
    for (double& v : block.values()) v *= scale;
  }
  return out;
}

/// Control experiments. fixed_te skips Stage I; the others run Stage I,
/// transform its snapshot (or the Stage-II starting weights) and run
/// Stage II.
inline FffbOutcome run_ablation(const std::vector<std::size_t>& sizes, const TrainData& data,
                                const TrainConfig& cfg) {
  using Kind = Ablation::Kind;
  const Ablation& ab = cfg.ablation;
  if (ab.kind == Kind::none) throw ConfigError("run_ablation needs an ablation mode");
  if (!std::isfinite(ab.value)) throw ConfigError("ablation value must be finite");
  if (ab.kind == Kind::layer_scaled && ab.value < 0.0) {
    throw ConfigError("layer scaling factor must be non-negative");
  }
  FffbOutcome out;
  if (ab.kind == Kind::fixed_te) {
    const TeMatrix te = TeMatrix::filled(sizes, ab.value);
    out.stage2 = train_stage2(baseline_network(sizes, cfg), data, cfg, te);
    return out;
  }
  out.stage1 = train_stage1(initial_network(sizes, cfg), data, cfg);
  Network start = cfg.stage2_fresh ? baseline_network(sizes, cfg) : out.stage1->final_network;
  TeMatrix te = out.stage1->te_snapshot;
  switch (ab.kind) {
    case Kind::scale_te_unit:
      te = scale_te_unit(te);
      break;
    case Kind::layer_scaled:
      te = layer_scale_te(te, ab.value);
      break;
    case Kind::frozen_weights:
      for (auto& w : start.weights) std::fill(w.values().begin(), w.values().end(), ab.value);
      for (auto& b : start.biases) std::fill(b.begin(), b.end(), 0.0);
      break;
    default:
      break;
  }
  out.stage2 = train_stage2(std::move(start), data, cfg, te);
  return out;
}

}  // namespace tefb
