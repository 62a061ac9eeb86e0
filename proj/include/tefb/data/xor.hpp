#pragma once

#include <cstdint>

#include "tefb/core/rng.hpp"
#include "tefb/data/dataset.hpp"
#include "tefb/data/training_set.hpp"

namespace tefb {

/// The two-input XOR truth table.
inline Dataset xor_table() {
  Dataset d;
  d.name = "xor";
  d.class_count = 2;
  d.class_names = {"0", "1"};
  d.features = Matrix(4, 2);
  const double rows[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (std::size_t r = 0; r < 4; ++r) {
    d.features(r, 0) = rows[r][0];
    d.features(r, 1) = rows[r][1];
  }
  d.labels = {0, 1, 1, 0};
  d.feature_ranges = {{0, 1}, {0, 1}};
  return d;
}

inline constexpr std::size_t kXorEpochSamples = 200;

/// XOR training set: each epoch draws 200 rows of the truth table
/// uniformly with replacement.
inline TrainingSet xor_training_set() {
  return TrainingSet::resampled(xor_table(), kXorEpochSamples);
}

/// The 200 rows presented in epoch `epoch_index` for a given order seed.
inline Dataset xor_epoch(std::uint64_t seed, std::size_t epoch_index) {
  const TrainingSet set = xor_training_set();
  const auto order = set.epoch_order(seed, epoch_index);
  return set.data().subset(order);
}

}  // namespace tefb
