#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "tefb/core/errors.hpp"
#include "tefb/core/rng.hpp"
#include "tefb/data/dataset.hpp"

namespace tefb {

/// A dataset plus the rule that decides which rows an epoch presents, and
/// in what order: a fresh permutation of all rows, or a fixed number of
/// draws with replacement.
class TrainingSet {
 public:
  static TrainingSet shuffled(Dataset data) {
    if (data.size() == 0) throw ConfigError("training set is empty");
    return TrainingSet(std::move(data), 0);
  }
  static TrainingSet resampled(Dataset pool, std::size_t per_epoch) {
    if (pool.size() == 0) throw ConfigError("training pool is empty");
    if (per_epoch == 0) throw ConfigError("an epoch needs at least one sample");
    return TrainingSet(std::move(pool), per_epoch);
  }

  const Dataset& data() const noexcept { return data_; }
  bool is_resampled() const noexcept { return per_epoch_ > 0; }
  std::size_t epoch_size() const noexcept { return per_epoch_ > 0 ? per_epoch_ : data_.size(); }

  /// Row indices into data() for one epoch, deterministic per
  /// (order_seed, epoch).
  std::vector<std::size_t> epoch_order(std::uint64_t order_seed, std::size_t epoch) const {
    Rng rng(derive_seed(order_seed, seed_stream::shuffle, epoch));
    std::vector<std::size_t> order;
    if (per_epoch_ > 0) {
      std::uniform_int_distribution<std::size_t> pick(0, data_.size() - 1);
      order.resize(per_epoch_);
      for (auto& idx : order) idx = pick(rng);
    } else {
      order.resize(data_.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), rng);
    }
    return order;
  }

 private:
  TrainingSet(Dataset data, std::size_t per_epoch) : data_(std::move(data)), per_epoch_(per_epoch) {
    data_.validate();
  }

  Dataset data_;
  std::size_t per_epoch_;
};

}  // namespace tefb
