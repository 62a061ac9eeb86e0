#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "tefb/core/errors.hpp"
#include "tefb/core/matrix.hpp"

namespace tefb {

struct FeatureRange {
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const FeatureRange&, const FeatureRange&) = default;
};

/// Labelled samples, one row per sample. Immutable once built; training
/// code only reads it.
struct Dataset {
  std::string name;
  Matrix features;
  std::vector<std::size_t> labels;
  std::size_t class_count = 0;
  std::vector<std::string> class_names;
  std::vector<FeatureRange> feature_ranges;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t feature_count() const noexcept { return features.cols(); }
  std::span<const double> sample(std::size_t row) const { return features.row(row); }

  std::vector<std::size_t> class_counts() const {
    std::vector<std::size_t> counts(class_count, 0);
    for (std::size_t y : labels) ++counts[y];
    return counts;
  }

  /// Rows `rows`, in that order. Keeps the class vocabulary and ranges.
  Dataset subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.name = name;
    out.class_count = class_count;
    out.class_names = class_names;
    out.feature_ranges = feature_ranges;
    out.features = Matrix(rows.size(), feature_count());
    out.labels.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto src = features.row(rows[r]);
      std::copy(src.begin(), src.end(), out.features.row(r).begin());
      out.labels.push_back(labels[rows[r]]);
    }
    return out;
  }

  void validate() const {
    if (features.rows() != labels.size()) throw ShapeError("feature rows and labels differ in count");
    if (class_count == 0) throw ShapeError("dataset has no classes");
    for (std::size_t y : labels) {
      if (y >= class_count) {
        std::ostringstream msg;
        msg << "label " << y << " outside [0, " << class_count << ")";
        throw ShapeError(msg.str());
      }
    }
  }
};

/// Min-max scaling of each column to [0, 1]. Constant columns map to 0.
struct MinMaxScaler {
  std::vector<FeatureRange> ranges;

  static MinMaxScaler fit(const Matrix& features) {
    MinMaxScaler scaler;
    scaler.ranges.resize(features.cols());
    for (std::size_t c = 0; c < features.cols(); ++c) {
      FeatureRange r{features.rows() ? features(0, c) : 0.0, features.rows() ? features(0, c) : 0.0};
      for (std::size_t row = 1; row < features.rows(); ++row) {
        r.min = std::min(r.min, features(row, c));
        r.max = std::max(r.max, features(row, c));
      }
      scaler.ranges[c] = r;
    }
    return scaler;
  }

  /// Scales in place and clamps into [0, 1]; returns how many values were
  /// clamped (non-zero only for data outside the fitted ranges).
  std::size_t transform(Matrix& features) const {
    if (features.cols() != ranges.size()) throw ShapeError("scaler fitted on a different width");
    std::size_t clamped = 0;
    for (std::size_t row = 0; row < features.rows(); ++row) {
      for (std::size_t c = 0; c < features.cols(); ++c) {
        const double span = ranges[c].max - ranges[c].min;
        double v = span > 0.0 ? (features(row, c) - ranges[c].min) / span : 0.0;
        if (v < 0.0 || v > 1.0) {
          v = std::clamp(v, 0.0, 1.0);
          ++clamped;
        }
        features(row, c) = v;
      }
    }
    return clamped;
  }

  void inverse_transform(Matrix& features) const {
    if (features.cols() != ranges.size()) throw ShapeError("scaler fitted on a different width");
    for (std::size_t row = 0; row < features.rows(); ++row)
      for (std::size_t c = 0; c < features.cols(); ++c)
        features(row, c) = ranges[c].min + features(row, c) * (ranges[c].max - ranges[c].min);
  }
};

/// Copy of `data` scaled to [0, 1] with its own column ranges.
inline Dataset normalize(const Dataset& data) {
  Dataset out = data;
  const auto scaler = MinMaxScaler::fit(out.features);
  scaler.transform(out.features);
  out.feature_ranges = scaler.ranges;
  return out;
}

}  // namespace tefb
