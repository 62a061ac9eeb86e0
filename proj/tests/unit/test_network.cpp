#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tefb/core/network.hpp"

using namespace tefb;

namespace {

Network hand_net() {
  Network net;
  net.layer_sizes = {2, 2, 1};
  net.weights = {Matrix(2, 2), Matrix(2, 1)};
  net.weights[0](0, 0) = 0.5;
  net.weights[0](0, 1) = -1.0;
  net.weights[0](1, 0) = 2.0;
  net.weights[0](1, 1) = 0.25;
  net.weights[1](0, 0) = 1.5;
  net.weights[1](1, 0) = -0.75;
  net.biases = {{0.1, -0.2}, {0.3}};
  return net;
}

Network random_net(std::mt19937_64& rng, std::vector<std::size_t> sizes, double scale) {
  Network net = init_network(sizes, rng());
  std::normal_distribution<double> n(0.0, scale);
  for (auto& w : net.weights)
    for (double& v : w.values()) v = n(rng);
  for (auto& b : net.biases)
    for (double& v : b) v = n(rng);
  return net;
}

void expect_close(double got, double want, double rel, double abs_floor) {
  EXPECT_LE(std::abs(got - want), std::max(abs_floor, rel * std::abs(want))) << got << " vs " << want;
}

}  // namespace

TEST(Network, InitShapesAndZeroBiases) {
  const Network net = init_network({2, 2, 1}, 7);
  ASSERT_EQ(net.weights.size(), 2u);
  EXPECT_EQ(net.weights[0].rows(), 2u);
  EXPECT_EQ(net.weights[0].cols(), 2u);
  EXPECT_EQ(net.weights[1].rows(), 2u);
  EXPECT_EQ(net.weights[1].cols(), 1u);
  for (const auto& b : net.biases)
    for (double v : b) EXPECT_EQ(v, 0.0);
}

TEST(Network, InitIsDeterministic) {
  EXPECT_EQ(init_network({2, 2, 1}, 7), init_network({2, 2, 1}, 7));
  EXPECT_NE(init_network({2, 2, 1}, 7), init_network({2, 2, 1}, 8));
}

TEST(Network, InitWeightStatistics) {
  const Network net = init_network({4, 8, 3}, 1);
  std::vector<double> all;
  for (const auto& w : net.weights) all.insert(all.end(), w.values().begin(), w.values().end());
  ASSERT_EQ(all.size(), 56u);
  double mean = 0;
  for (double v : all) mean += v;
  mean /= all.size();
  double var = 0;
  for (double v : all) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / (all.size() - 1));
  EXPECT_NEAR(mean, 0.0, 0.05);
  EXPECT_NEAR(sd, 0.1, 0.05);
}

TEST(Network, RejectsBadSizes) {
  EXPECT_THROW(init_network({3}, 1), ConfigError);
  EXPECT_THROW(init_network({3, 0, 1}, 1), ConfigError);
}

TEST(Network, ZeroWeightsGiveHalf) {
  Network net = init_network({3, 4, 2}, 1);
  for (auto& w : net.weights) std::fill(w.values().begin(), w.values().end(), 0.0);
  const std::vector<double> x{0.3, -2.0, 7.0};
  const auto rec = forward(net, x);
  for (double o : rec.prediction()) EXPECT_EQ(o, 0.5);
}

TEST(Network, SingleNeuronAtZero) {
  Network net = init_network({1, 1}, 1);
  net.weights[0](0, 0) = 1.0;
  const std::vector<double> x{0.0};
  EXPECT_EQ(forward(net, x).prediction()[0], 0.5);
}

TEST(Network, ForwardMatchesHandChain) {
  const Network net = hand_net();
  const std::vector<double> x{1.0, 0.0};
  // hidden: sigma(0.5 + 0.1), sigma(-1.0 - 0.2); output: sigma(1.5 h0 - 0.75 h1 + 0.3)
  const double h0 = 1.0 / (1.0 + std::exp(-0.6));
  const double h1 = 1.0 / (1.0 + std::exp(1.2));
  const double out = 1.0 / (1.0 + std::exp(-(1.5 * h0 - 0.75 * h1 + 0.3)));
  const auto rec = forward(net, x);
  EXPECT_NEAR(rec.outputs[1][0], h0, 1e-15);
  EXPECT_NEAR(rec.outputs[1][1], h1, 1e-15);
  EXPECT_NEAR(rec.prediction()[0], out, 1e-15);
  EXPECT_EQ(rec.outputs[0], x);
}

TEST(Network, ForwardRejectsWrongWidth) {
  const Network net = hand_net();
  const std::vector<double> x{1.0, 0.0, 2.0};
  EXPECT_THROW(forward(net, x), ShapeError);
}

TEST(Network, PerfectPredictionHasZeroGradient) {
  // A saturated output equal to the target in floating point.
  Network net = init_network({1, 1}, 1);
  net.weights[0](0, 0) = 0.0;
  net.biases[0][0] = 800.0;
  const std::vector<double> x{1.0}, y{1.0};
  const auto rec = forward(net, x);
  ASSERT_EQ(rec.prediction()[0], 1.0);
  const auto g = backward(net, rec, y);
  EXPECT_EQ(g.weights[0](0, 0), 0.0);
  EXPECT_EQ(g.biases[0][0], 0.0);
}

TEST(Network, SingleWeightGradientMatchesFiniteDifference) {
  Network net = init_network({1, 1}, 1);
  net.weights[0](0, 0) = 0.8;
  net.biases[0][0] = -0.3;
  const std::vector<double> x{1.7}, y{1.0};
  const auto g = backward(net, forward(net, x), y);
  const auto fd = finite_diff_gradient(net, x, y, 1e-5);
  expect_close(g.weights[0](0, 0), fd.weights[0](0, 0), 1e-6, 1e-9);
  // Hand value: (sigma(0.8*1.7 - 0.3) - 1) * 1.7
  const double a = 1.0 / (1.0 + std::exp(-(0.8 * 1.7 - 0.3)));
  EXPECT_NEAR(g.weights[0](0, 0), (a - 1.0) * 1.7, 1e-15);
}

TEST(Network, LinearToyFiniteDifferenceIsExact) {
  // Bias-only gradient of the loss at z = w x + b is a - y; the loss is
  // smooth so central differences err by O(step^2).
  Network net = init_network({1, 1}, 1);
  net.weights[0](0, 0) = 0.0;
  const std::vector<double> x{0.0}, y{0.0};
  const double step = 1e-4;
  const auto fd = finite_diff_gradient(net, x, y, step);
  EXPECT_NEAR(fd.biases[0][0], 0.5, step * step);
  EXPECT_NEAR(fd.weights[0](0, 0), 0.0, step * step);
}

TEST(Network, ZeroGradientPointFiniteDifference) {
  Network net = init_network({1, 1}, 1);
  net.weights[0](0, 0) = 0.0;
  const std::vector<double> x{0.0}, y{0.5};
  const double step = 1e-4;
  const auto fd = finite_diff_gradient(net, x, y, step);
  EXPECT_NEAR(fd.biases[0][0], 0.0, step * step);
  EXPECT_NEAR(fd.weights[0](0, 0), 0.0, step * step);
}

TEST(Network, BackwardMatchesFiniteDifferenceOnRandomNets) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> width(1, 6), depth(2, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> sizes(depth(rng));
    for (auto& s : sizes) s = width(rng);
    const Network net = random_net(rng, sizes, 0.7);
    std::vector<double> x(sizes.front()), y(sizes.back());
    for (double& v : x) v = unit(rng);
    for (double& v : y) v = unit(rng) < 0.5 ? 0.0 : 1.0;
    const auto g = backward(net, forward(net, x), y);
    const auto fd = finite_diff_gradient(net, x, y, 1e-5);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      for (std::size_t k = 0; k < g.weights[l].size(); ++k)
        expect_close(g.weights[l].values()[k], fd.weights[l].values()[k], 1e-6, 1e-9);
      for (std::size_t j = 0; j < g.biases[l].size(); ++j) expect_close(g.biases[l][j], fd.biases[l][j], 1e-6, 1e-9);
    }
  }
}

TEST(Network, UpdateWithZeroTeIsPlainStep) {
  std::mt19937_64 rng(5);
  const Network start = random_net(rng, {3, 4, 2}, 0.5);
  const std::vector<double> x{0.1, 0.9, 0.4}, y{1.0, 0.0};
  const auto g = backward(start, forward(start, x), y);
  Network plain = start, with_te = start;
  apply_update(plain, g, 0.05);
  apply_update(with_te, g, 0.05, TeMatrix::zeros(start.layer_sizes));
  EXPECT_EQ(plain, with_te);
  for (std::size_t l = 0; l < start.weights.size(); ++l)
    for (std::size_t k = 0; k < start.weights[l].size(); ++k)
      EXPECT_EQ(plain.weights[l].values()[k], start.weights[l].values()[k] - 0.05 * g.weights[l].values()[k]);
}

TEST(Network, UpdateWithUnitTeFreezesThatWeight) {
  std::mt19937_64 rng(6);
  Network net = random_net(rng, {2, 2, 1}, 0.5);
  const Network start = net;
  const std::vector<double> x{0.2, 0.7}, y{1.0};
  const auto g = backward(net, forward(net, x), y);
  TeMatrix te = TeMatrix::zeros(net.layer_sizes);
  te.blocks[0](1, 0) = 1.0;
  apply_update(net, g, 0.1, te);
  EXPECT_EQ(net.weights[0](1, 0), start.weights[0](1, 0));
  EXPECT_NE(net.weights[0](0, 0), start.weights[0](0, 0));
  EXPECT_NE(net.biases[0][0], start.biases[0][0]);
}

TEST(Network, UpdateWithNegativeTeAmplifies) {
  Network net = init_network({1, 1}, 1);
  net.weights[0](0, 0) = 0.4;
  GradientSet g{{Matrix(1, 1)}, {{0.0}}};
  g.weights[0](0, 0) = 0.2;
  TeMatrix te = TeMatrix::zeros(net.layer_sizes);
  te.blocks[0](0, 0) = -0.5;
  apply_update(net, g, 0.1, te);
  EXPECT_NEAR(net.weights[0](0, 0) - 0.4, -0.03, 1e-15);
}

TEST(Network, UpdateErrors) {
  Network net = init_network({2, 1}, 1);
  GradientSet g{{Matrix(2, 1)}, {{0.0}}};
  EXPECT_THROW(apply_update(net, g, 0.0), ConfigError);
  EXPECT_THROW(apply_update(net, g, 0.1, TeMatrix::zeros({2, 2})), ShapeError);
  g.weights[0](0, 0) = std::numeric_limits<double>::infinity();
  try {
    apply_update(net, g, 0.1);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("layer 0"), std::string::npos);
  }
}

TEST(Network, SmallStepDoesNotIncreaseLoss) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Network net = random_net(rng, {3, 5, 2}, 1.0);
    std::vector<double> x{unit(rng), unit(rng), unit(rng)};
    std::vector<double> y{unit(rng) < 0.5 ? 0.0 : 1.0, unit(rng) < 0.5 ? 0.0 : 1.0};
    const double before = cross_entropy(net, x, y);
    apply_update(net, backward(net, forward(net, x), y), 1e-4, TeMatrix::zeros(net.layer_sizes));
    EXPECT_LE(cross_entropy(net, x, y), before);
  }
}

TEST(Network, UpdatePreservesShapes) {
  std::mt19937_64 rng(12);
  Network net = random_net(rng, {4, 3, 3}, 0.3);
  const Network start = net;
  const std::vector<double> x{0.1, 0.2, 0.3, 0.4};
  apply_update(net, backward(net, forward(net, x), encode_target(2, 3)), 0.1);
  EXPECT_EQ(net.layer_sizes, start.layer_sizes);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    EXPECT_TRUE(net.weights[l].same_shape(start.weights[l]));
    EXPECT_EQ(net.biases[l].size(), start.biases[l].size());
  }
}

TEST(Network, TargetsAndPrediction) {
  EXPECT_EQ(encode_target(1, 1), std::vector<double>{1.0});
  EXPECT_EQ(encode_target(2, 3), (std::vector<double>{0.0, 0.0, 1.0}));
  EXPECT_THROW(encode_target(2, 1), ShapeError);
  const std::vector<double> single{0.6}, multi{0.1, 0.7, 0.3};
  EXPECT_EQ(predict_class(single), 1u);
  EXPECT_EQ(predict_class(multi), 1u);
}
