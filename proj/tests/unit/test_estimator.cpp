#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracle.hpp"
#include "tefb/te/binary_series.hpp"
#include "tefb/te/estimator.hpp"

using namespace tefb;
using Bits = std::vector<std::uint8_t>;

namespace {

Bits bits_of(unsigned v, std::size_t len) {
  Bits out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = (v >> i) & 1u;
  return out;
}

Bits random_bits(std::mt19937_64& rng, std::size_t len) {
  Bits out(len);
  for (auto& b : out) b = rng() & 1u;
  return out;
}

}  // namespace

TEST(Binarize, StrictThreshold) {
  EXPECT_EQ(binarize(0.75, 0.7), 1);
  EXPECT_EQ(binarize(0.7, 0.7), 0);
  EXPECT_EQ(binarize(0.591780304, 0.53), 1);
  EXPECT_EQ(binarize(0.476430321, 0.53), 0);
}

TEST(BinarySeries, CoercesAndAppends) {
  BinarySeries s(Bits{0, 3, 1});
  s.push_back(true);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[1], 1);
  EXPECT_EQ(s[3], 1);
}

TEST(Estimator, MatchesOracleExhaustively) {
  for (std::size_t len = 2; len <= 8; ++len) {
    for (unsigned a = 0; a < (1u << len); ++a) {
      for (unsigned b = 0; b < (1u << len); ++b) {
        const Bits src = bits_of(a, len), dst = bits_of(b, len);
        const double te = estimate_te_lag1(src, dst);
        ASSERT_NEAR(te, oracle::te_lag1(src, dst), 1e-12) << "len " << len << " src " << a << " dst " << b;
        ASSERT_GE(te, -1e-12);
      }
    }
  }
}

TEST(Estimator, MatchesOracleOnRandomPairs) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> len(9, 64);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = len(rng);
    const Bits src = random_bits(rng, n), dst = random_bits(rng, n);
    const double te = estimate_te_lag1(src, dst);
    ASSERT_NEAR(te, oracle::te_lag1(src, dst), 1e-12);
    ASSERT_GE(te, -1e-12);
  }
}

TEST(Estimator, GeneralReducesToLag1Exactly) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> len(2, 64);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = len(rng);
    const Bits src = random_bits(rng, n), dst = random_bits(rng, n);
    ASSERT_EQ(estimate_te_general(src, dst, 1, 1), estimate_te_lag1(src, dst));
  }
}

TEST(Estimator, GeneralMatchesOracle) {
  std::mt19937_64 rng(8);
  for (std::size_t k = 1; k <= 3; ++k) {
    for (std::size_t l = 1; l <= 3; ++l) {
      for (int i = 0; i < 50; ++i) {
        const Bits src = random_bits(rng, 40), dst = random_bits(rng, 40);
        ASSERT_NEAR(estimate_te_general(src, dst, k, l), oracle::te_general(src, dst, k, l), 1e-12)
            << "k " << k << " l " << l;
      }
    }
  }
}

TEST(Estimator, ConstantSourceIsZero) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const Bits dst = random_bits(rng, 2 + rng() % 63);
    EXPECT_EQ(estimate_te_lag1(Bits(dst.size(), 0), dst), 0.0);
    EXPECT_EQ(estimate_te_lag1(Bits(dst.size(), 1), dst), 0.0);
  }
}

TEST(Estimator, ConstantDestinationIsZero) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 1000; ++i) {
    const Bits src = random_bits(rng, 2 + rng() % 63);
    EXPECT_EQ(estimate_te_lag1(src, Bits(src.size(), 1)), 0.0);
  }
}

TEST(Estimator, AsymmetryWitness) {
  const Bits a{0, 1, 1, 0, 1, 0, 0, 0, 1, 1};
  const Bits b{1, 0, 1, 1, 0, 1, 0, 0, 0, 1};
  const double ab = estimate_te_lag1(a, b), ba = estimate_te_lag1(b, a);
  EXPECT_NEAR(ab, oracle::te_lag1(a, b), 1e-12);
  EXPECT_NEAR(ba, oracle::te_lag1(b, a), 1e-12);
  EXPECT_GT(std::abs(ab - ba), 0.1);
}

TEST(Estimator, DelayedCopyApproachesOneBit) {
  Bits src(64), dst(64);
  for (std::size_t t = 0; t < 64; ++t) src[t] = (t % 4 == 1 || t % 4 == 2) ? 1 : 0;
  dst[0] = 0;
  for (std::size_t t = 1; t < 64; ++t) dst[t] = src[t - 1];
  const double te = estimate_te_lag1(src, dst);
  EXPECT_NEAR(te, oracle::te_lag1(src, dst), 1e-12);
  EXPECT_GT(te, 0.9);
  EXPECT_LE(te, 1.0 + 1e-12);
}

TEST(Estimator, FairCoinsStayBelowBound) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    const Bits src = random_bits(rng, 10000), dst = random_bits(rng, 10000);
    const double te = estimate_te_general(src, dst, 2, 2);
    EXPECT_NEAR(te, oracle::te_general(src, dst, 2, 2), 1e-12);
    EXPECT_LT(te, 0.02);
  }
}

TEST(Estimator, SelfPredictedPeriodicDestinationIsZero) {
  std::mt19937_64 rng(13);
  Bits dst(60);
  for (std::size_t t = 0; t < dst.size(); ++t) dst[t] = (t % 3 == 0) ? 1 : 0;
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(estimate_te_general(random_bits(rng, 60), dst, 2, 1), 0.0);
    EXPECT_EQ(estimate_te_general(random_bits(rng, 60), dst, 2, 2), 0.0);
  }
}

TEST(Estimator, OtherLogBaseScales) {
  std::mt19937_64 rng(21);
  const Bits src = random_bits(rng, 50), dst = random_bits(rng, 50);
  EXPECT_NEAR(estimate_te_lag1(src, dst, std::exp(1.0)), estimate_te_lag1(src, dst) * std::log(2.0), 1e-12);
}

TEST(Estimator, RejectsBadInput) {
  EXPECT_THROW(estimate_te_lag1(Bits{0, 1}, Bits{0, 1, 1}), EstimationError);
  EXPECT_THROW(estimate_te_lag1(Bits{0}, Bits{1}), EstimationError);
  EXPECT_THROW(estimate_te_lag1(Bits{0, 2}, Bits{1, 0}), EstimationError);
  EXPECT_THROW(estimate_te_lag1(Bits{0, 1}, Bits{1, 0}, 1.0), EstimationError);
  EXPECT_THROW(estimate_te_general(Bits{0, 1}, Bits{1, 0}, 2, 1), EstimationError);
  EXPECT_THROW(estimate_te_general(Bits{0, 1, 0}, Bits{1, 0, 1}, 0, 1), EstimationError);
}

TEST(Estimator, CountsOverloadMatchesSeries) {
  std::mt19937_64 rng(31);
  const Bits src = random_bits(rng, 30), dst = random_bits(rng, 30);
  Lag1Counts counts{};
  for (std::size_t t = 0; t + 1 < dst.size(); ++t) ++counts[dst[t + 1] + 2 * dst[t] + 4 * src[t]];
  EXPECT_EQ(plugin_te(counts, 2.0), estimate_te_lag1(src, dst));
}
