#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "tefb/core/errors.hpp"
#include "tefb/core/rng.hpp"
#include "tefb/data/dataset.hpp"

namespace tefb {

struct SplitSpec {
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct SplitResult {
  Dataset train;
  Dataset test;
  /// Test values that fell outside the training ranges and were clamped.
  std::size_t clamped = 0;
};

/// Seeded train/test partition of a raw dataset. Scaling ranges are fitted
/// on the training rows only and then applied to both parts.
inline SplitResult split(const Dataset& raw, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie in (0, 1)");
  }
  raw.validate();
  Rng rng(derive_seed(spec.seed, seed_stream::split));
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  auto take = [&](std::vector<std::size_t> rows) {
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto n_train = static_cast<std::size_t>(std::llround(rows.size() * spec.train_fraction));
    train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + n_train);
    test_rows.insert(test_rows.end(), rows.begin() + n_train, rows.end());
  };
  if (spec.stratified) {
    std::vector<std::vector<std::size_t>> by_class(raw.class_count);
    for (std::size_t r = 0; r < raw.size(); ++r) by_class[raw.labels[r]].push_back(r);
    for (std::size_t c = 0; c < by_class.size(); ++c) {
      if (by_class[c].empty()) continue;
      if (by_class[c].size() < 2) {
        std::ostringstream msg;
        msg << "class " << c << " has a single sample; cannot stratify";
        throw ConfigError(msg.str());
      }
      take(std::move(by_class[c]));
    }
  } else {
    std::vector<std::size_t> all(raw.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    take(std::move(all));
  }
  if (train_rows.empty() || test_rows.empty()) throw ConfigError("split leaves an empty partition");
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());

  SplitResult out{raw.subset(train_rows), raw.subset(test_rows), 0};
  const auto scaler = MinMaxScaler::fit(out.train.features);
  scaler.transform(out.train.features);
  out.clamped = scaler.transform(out.test.features);
  out.train.feature_ranges = scaler.ranges;
  out.test.feature_ranges = scaler.ranges;
  return out;
}

}  // namespace tefb
