#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <sstream>
#include <vector>

#include "tefb/core/errors.hpp"

namespace tefb {

namespace detail {

inline void check_binary(std::span<const std::uint8_t> s, const char* which) {
  for (std::uint8_t v : s) {
    if (v > 1) {
      std::ostringstream msg;
      msg << which << " series contains non-binary symbol " << int(v);
      throw EstimationError(msg.str());
    }
  }
}

inline void check_log_base(double log_base) {
  if (!(log_base > 1.0) || !std::isfinite(log_base)) {
    throw EstimationError("log base must be a finite value greater than 1");
  }
}

}  // namespace detail

namespace detail {

// Shared summation for every plug-in estimate. `scratch` must hold
// 3 * target_states + target_states * source_states doubles.
inline double plugin_te_sum(const std::uint64_t* joint, std::size_t target_states,
                            std::size_t source_states, double log_base, double* scratch) {
  double* c_y = scratch;
  double* c_xy = c_y + target_states;
  double* c_yz = c_xy + 2 * target_states;
  std::fill(scratch, scratch + 3 * target_states + target_states * source_states, 0.0);
  double total = 0.0;
  for (std::size_t z = 0; z < source_states; ++z) {
    for (std::size_t y = 0; y < target_states; ++y) {
      for (std::size_t x = 0; x < 2; ++x) {
        const double c = static_cast<double>(joint[x + 2 * (y + target_states * z)]);
        c_y[y] += c;
        c_xy[x + 2 * y] += c;
        c_yz[y + target_states * z] += c;
        total += c;
      }
    }
  }
  if (total == 0.0) return 0.0;
  const double log_scale = std::log(log_base);
  double te = 0.0;
  for (std::size_t z = 0; z < source_states; ++z) {
    for (std::size_t y = 0; y < target_states; ++y) {
      for (std::size_t x = 0; x < 2; ++x) {
        const double c = static_cast<double>(joint[x + 2 * (y + target_states * z)]);
        if (c == 0.0) continue;
        const double ratio = (c * c_y[y]) / (c_xy[x + 2 * y] * c_yz[y + target_states * z]);
        te += (c / total) * std::log(ratio) / log_scale;
      }
    }
  }
  return te;
}

}  // namespace detail

/// Plug-in transfer entropy from a joint histogram of
/// (next target symbol, target history, source history).
///
/// `joint` is indexed by next + 2 * (target_hist + target_states * source_hist)
/// and holds raw counts. Every marginal is derived from the same histogram,
/// so the result is a conditional mutual information and never negative
/// beyond rounding. States with a zero count contribute nothing.
inline double plugin_te(std::span<const std::uint64_t> joint, std::size_t target_states,
                        std::size_t source_states, double log_base) {
  if (joint.size() != 2 * target_states * source_states) {
    throw EstimationError("joint histogram size does not match state counts");
  }
  std::vector<double> scratch(3 * target_states + target_states * source_states);
  return detail::plugin_te_sum(joint.data(), target_states, source_states, log_base,
                               scratch.data());
}

/// Joint histogram for lag-one TE, indexed next + 2 * dst_t + 4 * src_t.
using Lag1Counts = std::array<std::uint64_t, 8>;

inline double plugin_te(const Lag1Counts& counts, double log_base) {
  std::array<double, 10> scratch;
  return detail::plugin_te_sum(counts.data(), 2, 2, log_base, scratch.data());
}

/// Lag-one transfer entropy src -> dst over the p - 1 transitions
/// (dst[t+1], dst[t], src[t]).
inline double estimate_te_lag1(std::span<const std::uint8_t> src, std::span<const std::uint8_t> dst,
                               double log_base = 2.0) {
  if (src.size() != dst.size()) throw EstimationError("source and target lengths differ");
  if (src.size() < 2) throw EstimationError("transfer entropy needs at least two observations");
  detail::check_log_base(log_base);
  detail::check_binary(src, "source");
  detail::check_binary(dst, "target");
  Lag1Counts counts{};
  for (std::size_t t = 0; t + 1 < dst.size(); ++t) {
    ++counts[dst[t + 1] + 2u * dst[t] + 4u * src[t]];
  }
  return plugin_te(counts, log_base);
}

/// Transfer entropy src -> dst with a k-step target history and an l-step
/// source history, summed over every t where both delay vectors exist.
/// With k = l = 1 this is the same computation as estimate_te_lag1.
inline double estimate_te_general(std::span<const std::uint8_t> src,
                                  std::span<const std::uint8_t> dst, std::size_t k, std::size_t l,
                                  double log_base = 2.0) {
  if (k < 1 || l < 1) throw EstimationError("history lengths must be at least 1");
  if (k + l > 24) throw EstimationError("history lengths too large for a dense histogram");
  if (src.size() != dst.size()) throw EstimationError("source and target lengths differ");
  const std::size_t lead = std::max(k, l);
  if (src.size() < lead + 1) throw EstimationError("series too short for the requested histories");
  detail::check_log_base(log_base);
  detail::check_binary(src, "source");
  detail::check_binary(dst, "target");

  const std::size_t target_states = std::size_t{1} << k;
  const std::size_t source_states = std::size_t{1} << l;
  std::vector<std::uint64_t> joint(2 * target_states * source_states, 0);
  for (std::size_t t = lead - 1; t + 1 < dst.size(); ++t) {
    std::size_t y = 0;
    for (std::size_t m = 0; m < k; ++m) y |= std::size_t{dst[t - m]} << m;
    std::size_t z = 0;
    for (std::size_t m = 0; m < l; ++m) z |= std::size_t{src[t - m]} << m;
    ++joint[dst[t + 1] + 2 * (y + target_states * z)];
  }
  return plugin_te(joint, target_states, source_states, log_base);
}

}  // namespace tefb
