#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "tefb/core/errors.hpp"
#include "tefb/core/network.hpp"
#include "tefb/core/te_matrix.hpp"
#include "tefb/te/binary_series.hpp"
#include "tefb/te/estimator.hpp"

namespace tefb {

struct TeConfig {
  std::size_t k = 1;
  std::size_t l = 1;
  double log_base = 2.0;
  double g = 0.7;
  std::size_t warm_up = 10;
  std::size_t min_series_len = 10;

  void validate() const {
    if (k < 1 || l < 1) throw ConfigError("te history lengths must be at least 1");
    if (!(log_base > 1.0)) throw ConfigError("te log base must exceed 1");
    if (!(g > 0.0 && g < 1.0)) throw ConfigError("binarization threshold g must lie in (0, 1)");
    if (min_series_len < 2) throw ConfigError("min_series_len must be at least 2");
  }
};

/// Binary activation history of every neuron, input layer included, plus a
/// running lag-one histogram for every connected pair. The histograms make
/// a te refresh O(pairs) instead of O(pairs * length); they always equal
/// what estimate_te_lag1 would count from the stored series.
class SeriesStore {
 public:
  explicit SeriesStore(std::vector<std::size_t> layer_sizes, std::size_t warm_up = 10);

  /// Skips the call while warm-up remains, otherwise appends one aligned
  /// symbol per neuron.
  void record_step(const ActivationRecord& rec, double g);

  std::size_t length() const noexcept { return length_; }
  std::size_t warm_up_remaining() const noexcept { return warm_up_remaining_; }
  const std::vector<std::size_t>& layer_sizes() const noexcept { return layer_sizes_; }

  const BinarySeries& series(std::size_t layer, std::size_t neuron) const {
    return series_.at(layer).at(neuron);
  }

  /// Histogram for the connection neuron `src` of layer `layer` ->
  /// neuron `dst` of layer `layer + 1`.
  const Lag1Counts& pair_counts(std::size_t layer, std::size_t src, std::size_t dst) const {
    return counts_.at(layer).at(src * layer_sizes_[layer + 1] + dst);
  }

 private:
  std::vector<std::size_t> layer_sizes_;
  std::size_t warm_up_remaining_;
  std::size_t length_ = 0;
  std::vector<std::vector<BinarySeries>> series_;
  std::vector<std::vector<Lag1Counts>> counts_;
};

inline SeriesStore::SeriesStore(std::vector<std::size_t> layer_sizes, std::size_t warm_up)
    : layer_sizes_(std::move(layer_sizes)), warm_up_remaining_(warm_up) {
  validate_layer_sizes(layer_sizes_);
  for (std::size_t n : layer_sizes_) series_.emplace_back(n);
  for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
    counts_.emplace_back(layer_sizes_[l] * layer_sizes_[l + 1], Lag1Counts{});
  }
}

inline void SeriesStore::record_step(const ActivationRecord& rec, double g) {
  if (rec.outputs.size() != layer_sizes_.size()) {
    throw ShapeError("activation record depth does not match series store");
  }
  for (std::size_t l = 0; l < layer_sizes_.size(); ++l) {
    if (rec.outputs[l].size() != layer_sizes_[l]) {
      std::ostringstream msg;
      msg << "activation record layer " << l << " has " << rec.outputs[l].size()
          << " neurons, store expects " << layer_sizes_[l];
      throw ShapeError(msg.str());
    }
  }
  if (warm_up_remaining_ > 0) {
    --warm_up_remaining_;
    return;
  }
  for (std::size_t l = 0; l < layer_sizes_.size(); ++l) {
    for (std::size_t n = 0; n < layer_sizes_[l]; ++n) {
      series_[l][n].push_back(binarize(rec.outputs[l][n], g) == 1);
    }
  }
  ++length_;
  if (length_ < 2) return;
  const std::size_t now = length_ - 1;
  for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
    const std::size_t dst_count = layer_sizes_[l + 1];
    for (std::size_t i = 0; i < layer_sizes_[l]; ++i) {
      const unsigned src_prev = series_[l][i][now - 1];
      for (std::size_t j = 0; j < dst_count; ++j) {
        const BinarySeries& dst = series_[l + 1][j];
        ++counts_[l][i * dst_count + j][dst[now] + 2u * dst[now - 1] + 4u * src_prev];
      }
    }
  }
}

/// Recomputes `out` in place from the store's histograms. Returns false,
/// leaving `out` untouched, while the series are shorter than
/// config.min_series_len.
inline bool refresh_te_matrix(const SeriesStore& store, const TeConfig& config, TeMatrix& out) {
  if (store.length() < config.min_series_len) return false;
  if (out.blocks.size() + 1 != store.layer_sizes().size()) {
    out = TeMatrix::zeros(store.layer_sizes());
  }
  for (std::size_t l = 0; l < out.blocks.size(); ++l) {
    Matrix& block = out.blocks[l];
    for (std::size_t i = 0; i < block.rows(); ++i)
      for (std::size_t j = 0; j < block.cols(); ++j)
        block(i, j) = plugin_te(store.pair_counts(l, i, j), config.log_base);
  }
  return true;
}

/// Lag-one te for every connected pair, or nullopt while the series are
/// shorter than config.min_series_len (callers then use te = 0).
inline std::optional<TeMatrix> compute_te_matrix(const SeriesStore& store, const TeConfig& config) {
  TeMatrix te = TeMatrix::zeros(store.layer_sizes());
  if (!refresh_te_matrix(store, config, te)) return std::nullopt;
  return te;
}

/// One row per connection: layer (index of the target layer), i (source),
/// j (target), te.
inline void write_te_csv(std::ostream& out, const TeMatrix& te) {
  out << "layer,i,j,te\n";
  const auto precision = out.precision(17);
  for (std::size_t l = 0; l < te.blocks.size(); ++l)
    for (std::size_t i = 0; i < te.blocks[l].rows(); ++i)
      for (std::size_t j = 0; j < te.blocks[l].cols(); ++j)
        out << l + 1 << ',' << i << ',' << j << ',' << te.blocks[l](i, j) << '\n';
  out.precision(precision);
}

/// One row per neuron: layer, neuron, then the symbol string.
inline void write_series_csv(std::ostream& out, const SeriesStore& store) {
  out << "layer,neuron,symbols\n";
  for (std::size_t l = 0; l < store.layer_sizes().size(); ++l) {
    for (std::size_t n = 0; n < store.layer_sizes()[l]; ++n) {
      out << l << ',' << n << ',';
      for (std::uint8_t s : store.series(l, n).values()) out << char('0' + s);
      out << '\n';
    }
  }
}

}  // namespace tefb
