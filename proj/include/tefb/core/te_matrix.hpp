#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

#include "tefb/core/errors.hpp"
#include "tefb/core/matrix.hpp"

namespace tefb {

/// Per-connection transfer entropy, laid out exactly like the weights:
/// block l, entry (i, j) holds te from neuron i of layer l to neuron j of
/// layer l + 1, i.e. the factor applied to weight (l, i, j).
struct TeMatrix {
  std::vector<Matrix> blocks;

  static TeMatrix filled(const std::vector<std::size_t>& layer_sizes, double value) {
    TeMatrix te;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
      te.blocks.emplace_back(layer_sizes[l], layer_sizes[l + 1], value);
    }
    return te;
  }
  static TeMatrix zeros(const std::vector<std::size_t>& layer_sizes) {
    return filled(layer_sizes, 0.0);
  }

  double operator()(std::size_t layer, std::size_t src, std::size_t dst) const {
    return blocks[layer](src, dst);
  }

  double min() const;
  double max() const;

  friend bool operator==(const TeMatrix&, const TeMatrix&) = default;
};

inline double TeMatrix::min() const {
  double m = INFINITY;
  for (const auto& b : blocks)
    for (double v : b.values()) m = std::min(m, v);
  return m;
}

inline double TeMatrix::max() const {
  double m = -INFINITY;
  for (const auto& b : blocks)
    for (double v : b.values()) m = std::max(m, v);
  return m;
}

/// Throws ShapeError unless `te` has one block per weight matrix with the
/// same shape.
inline void check_te_shape(const TeMatrix& te, const std::vector<Matrix>& weights) {
  if (te.blocks.size() != weights.size()) {
    std::ostringstream msg;
    msg << "te matrix has " << te.blocks.size() << " layers, network has " << weights.size();
    throw ShapeError(msg.str());
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (!te.blocks[l].same_shape(weights[l])) {
      std::ostringstream msg;
      msg << "te block " << l << " is " << te.blocks[l].rows() << "x" << te.blocks[l].cols()
          << ", weights are " << weights[l].rows() << "x" << weights[l].cols();
      throw ShapeError(msg.str());
    }
  }
}

}  // namespace tefb
