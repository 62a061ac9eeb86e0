#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <sstream>
#include <vector>

#include "tefb/core/errors.hpp"
#include "tefb/core/matrix.hpp"
#include "tefb/core/rng.hpp"
#include "tefb/core/te_matrix.hpp"

namespace tefb {

/// Fully connected sigmoid MLP. Layer 0 is the input layer; weights[l] maps
/// layer l to layer l + 1 and has shape size(l) x size(l + 1).
struct Network {
  std::vector<std::size_t> layer_sizes;
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  std::size_t input_size() const { return layer_sizes.front(); }
  std::size_t output_size() const { return layer_sizes.back(); }
  std::size_t weight_layers() const { return weights.size(); }

  friend bool operator==(const Network&, const Network&) = default;
};

/// Per-layer values from one forward pass. Index 0 is the input layer, whose
/// pre-activations and outputs are both the raw input vector.
struct ActivationRecord {
  std::vector<std::vector<double>> pre_activations;
  std::vector<std::vector<double>> outputs;

  std::span<const double> prediction() const { return outputs.back(); }
};

/// Partial derivatives of the per-sample loss, shaped like the network.
struct GradientSet {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline void validate_layer_sizes(const std::vector<std::size_t>& sizes) {
  if (sizes.size() < 2) throw ConfigError("network needs at least an input and an output layer");
  for (std::size_t s : sizes) {
    if (s == 0) throw ConfigError("layer sizes must be positive");
  }
}

/// Weights ~ N(0, 0.1^2), biases 0. Deterministic for a given seed.
inline Network init_network(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed) {
  validate_layer_sizes(layer_sizes);
  Network net;
  net.layer_sizes = layer_sizes;
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 0.1);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    Matrix w(layer_sizes[l], layer_sizes[l + 1]);
    for (double& v : w.values()) v = normal(rng);
    net.weights.push_back(std::move(w));
    net.biases.emplace_back(layer_sizes[l + 1], 0.0);
  }
  return net;
}

inline ActivationRecord forward(const Network& net, std::span<const double> x) {
  if (x.size() != net.input_size()) {
    std::ostringstream msg;
    msg << "input has " << x.size() << " features, network expects " << net.input_size();
    throw ShapeError(msg.str());
  }
  ActivationRecord rec;
  rec.pre_activations.reserve(net.layer_sizes.size());
  rec.outputs.reserve(net.layer_sizes.size());
  rec.pre_activations.emplace_back(x.begin(), x.end());
  rec.outputs.emplace_back(x.begin(), x.end());
  for (std::size_t l = 0; l < net.weight_layers(); ++l) {
    const Matrix& w = net.weights[l];
    const auto& prev = rec.outputs[l];
    std::vector<double> z(net.biases[l]);
    for (std::size_t i = 0; i < w.rows(); ++i) {
      const double a = prev[i];
      const auto wr = w.row(i);
      for (std::size_t j = 0; j < w.cols(); ++j) z[j] += a * wr[j];
    }
    std::vector<double> out(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) out[j] = sigmoid(z[j]);
    rec.pre_activations.push_back(std::move(z));
    rec.outputs.push_back(std::move(out));
  }
  return rec;
}

/// Binary cross-entropy summed over output units, evaluated from the
/// pre-activations so saturated outputs stay finite.
inline double cross_entropy(const ActivationRecord& rec, std::span<const double> y) {
  const auto& z = rec.pre_activations.back();
  if (y.size() != z.size()) throw ShapeError("target size does not match output layer");
  double loss = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double softplus = std::max(z[k], 0.0) + std::log1p(std::exp(-std::abs(z[k])));
    loss += softplus - y[k] * z[k];
  }
  return loss;
}

inline double cross_entropy(const Network& net, std::span<const double> x,
                            std::span<const double> y) {
  return cross_entropy(forward(net, x), y);
}

/// Sigmoid + cross-entropy gradients for one sample. The output error is
/// a - y; hidden errors are back-propagated through sigma'(z) = a(1 - a).
inline GradientSet backward(const Network& net, const ActivationRecord& rec,
                            std::span<const double> y) {
  if (y.size() != net.output_size()) {
    std::ostringstream msg;
    msg << "target has " << y.size() << " entries, network has " << net.output_size()
        << " outputs";
    throw ShapeError(msg.str());
  }
  if (rec.outputs.size() != net.layer_sizes.size()) {
    throw ShapeError("activation record does not match network depth");
  }
  const std::size_t layers = net.weight_layers();
  GradientSet grads;
  grads.weights.resize(layers);
  grads.biases.resize(layers);

  std::vector<double> delta(net.output_size());
  const auto& out = rec.outputs.back();
  for (std::size_t k = 0; k < delta.size(); ++k) delta[k] = out[k] - y[k];

  for (std::size_t l = layers; l-- > 0;) {
    const Matrix& w = net.weights[l];
    const auto& prev = rec.outputs[l];
    Matrix g(w.rows(), w.cols());
    for (std::size_t i = 0; i < w.rows(); ++i) {
      auto gr = g.row(i);
      for (std::size_t j = 0; j < w.cols(); ++j) gr[j] = prev[i] * delta[j];
    }
    grads.weights[l] = std::move(g);
    grads.biases[l] = delta;
    if (l == 0) break;
    std::vector<double> next(w.rows(), 0.0);
    for (std::size_t i = 0; i < w.rows(); ++i) {
      const auto wr = w.row(i);
      double s = 0.0;
      for (std::size_t j = 0; j < w.cols(); ++j) s += wr[j] * delta[j];
      next[i] = s * prev[i] * (1.0 - prev[i]);
    }
    delta = std::move(next);
  }
  return grads;
}

namespace detail {

inline void check_gradient_shape(const Network& net, const GradientSet& grads) {
  if (grads.weights.size() != net.weights.size() || grads.biases.size() != net.biases.size()) {
    throw ShapeError("gradient set depth does not match network");
  }
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    if (!grads.weights[l].same_shape(net.weights[l]) ||
        grads.biases[l].size() != net.biases[l].size()) {
      throw ShapeError("gradient set shape does not match network");
    }
  }
}

[[noreturn]] inline void non_finite_update(const char* what, std::size_t l, std::size_t i,
                                           std::size_t j) {
  std::ostringstream msg;
  msg << "non-finite " << what << " update at layer " << l << ", pair (" << i << ", " << j << ")";
  throw NumericalError(msg.str());
}

}  // namespace detail

/// w <- w - eta * dC/dw * (1 - te) for every weight; biases take the plain
/// gradient step. Passing no te matrix is the standard update.
inline void apply_update(Network& net, const GradientSet& grads, double eta,
                         const TeMatrix* te = nullptr) {
  if (!(eta > 0.0)) throw ConfigError("learning rate must be positive");
  detail::check_gradient_shape(net, grads);
  if (te != nullptr) check_te_shape(*te, net.weights);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    Matrix& w = net.weights[l];
    const Matrix& g = grads.weights[l];
    for (std::size_t i = 0; i < w.rows(); ++i) {
      for (std::size_t j = 0; j < w.cols(); ++j) {
        double step = eta * g(i, j);
        if (te != nullptr) step *= 1.0 - te->blocks[l](i, j);
        const double updated = w(i, j) - step;
        if (!std::isfinite(updated)) detail::non_finite_update("weight", l, i, j);
        w(i, j) = updated;
      }
    }
    auto& b = net.biases[l];
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double updated = b[j] - eta * grads.biases[l][j];
      if (!std::isfinite(updated)) detail::non_finite_update("bias", l, 0, j);
      b[j] = updated;
    }
  }
}

inline void apply_update(Network& net, const GradientSet& grads, double eta, const TeMatrix& te) {
  apply_update(net, grads, eta, &te);
}

/// Central-difference estimate of the loss gradient, one parameter at a
/// time. Slow; meant for checking backward().
inline GradientSet finite_diff_gradient(const Network& net, std::span<const double> x,
                                        std::span<const double> y, double step) {
  if (!(step > 0.0)) throw ConfigError("finite difference step must be positive");
  if (y.size() != net.output_size()) throw ShapeError("target size does not match output layer");
  Network probe = net;
  GradientSet grads;
  auto central = [&](double& param) {
    const double saved = param;
    param = saved + step;
    const double up = cross_entropy(probe, x, y);
    param = saved - step;
    const double down = cross_entropy(probe, x, y);
    param = saved;
    return (up - down) / (2.0 * step);
  };
  for (std::size_t l = 0; l < probe.weights.size(); ++l) {
    Matrix g(probe.weights[l].rows(), probe.weights[l].cols());
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) = central(probe.weights[l](i, j));
    grads.weights.push_back(std::move(g));
    std::vector<double> gb(probe.biases[l].size());
    for (std::size_t j = 0; j < gb.size(); ++j) gb[j] = central(probe.biases[l][j]);
    grads.biases.push_back(std::move(gb));
  }
  return grads;
}

/// Target vector for a class label: a single 0/1 unit for one-output
/// networks, one-hot otherwise.
inline std::vector<double> encode_target(std::size_t label, std::size_t output_size) {
  if (output_size == 1) {
    if (label > 1) throw ShapeError("single-output network can only encode labels 0 and 1");
    return {static_cast<double>(label)};
  }
  if (label >= output_size) throw ShapeError("label outside output layer");
  std::vector<double> y(output_size, 0.0);
  y[label] = 1.0;
  return y;
}

/// Predicted class: argmax over outputs, or output > 0.5 for a single unit.
inline std::size_t predict_class(std::span<const double> outputs) {
  if (outputs.size() == 1) return outputs[0] > 0.5 ? 1 : 0;
  std::size_t best = 0;
  for (std::size_t k = 1; k < outputs.size(); ++k) {
    if (outputs[k] > outputs[best]) best = k;
  }
  return best;
}

}  // namespace tefb
