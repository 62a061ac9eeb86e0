#pragma once

// Reference implementations used only by the tests. They count joint states
// by direct enumeration and share no code with the library estimator.

#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

namespace oracle {

// te(src -> dst) with one step of history on each side, in bits.
inline double te_lag1(const std::vector<std::uint8_t>& src, const std::vector<std::uint8_t>& dst) {
  const std::size_t n = dst.size() - 1;
  double total = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int z = 0; z < 2; ++z) {
        double nxyz = 0, nxy = 0, nyz = 0, ny = 0;
        for (std::size_t t = 0; t < n; ++t) {
          const bool bx = dst[t + 1] == x, by = dst[t] == y, bz = src[t] == z;
          nxyz += bx && by && bz;
          nxy += bx && by;
          nyz += by && bz;
          ny += by;
        }
        if (nxyz == 0) continue;
        total += nxyz / static_cast<double>(n) * std::log2(nxyz * ny / (nxy * nyz));
      }
    }
  }
  return total;
}

// te with k destination and l source history steps, keyed by explicit
// history vectors.
inline double te_general(const std::vector<std::uint8_t>& src, const std::vector<std::uint8_t>& dst,
                         std::size_t k, std::size_t l) {
  using Hist = std::vector<std::uint8_t>;
  std::map<std::tuple<int, Hist, Hist>, double> nxyz;
  std::map<std::tuple<int, Hist>, double> nxy;
  std::map<std::tuple<Hist, Hist>, double> nyz;
  std::map<Hist, double> ny;
  const std::size_t start = std::max(k, l) - 1;
  double n = 0;
  for (std::size_t t = start; t + 1 < dst.size(); ++t) {
    Hist y(dst.begin() + static_cast<long>(t + 1 - k), dst.begin() + static_cast<long>(t + 1));
    Hist z(src.begin() + static_cast<long>(t + 1 - l), src.begin() + static_cast<long>(t + 1));
    const int x = dst[t + 1];
    nxyz[{x, y, z}] += 1;
    nxy[{x, y}] += 1;
    nyz[{y, z}] += 1;
    ny[y] += 1;
    n += 1;
  }
  double total = 0.0;
  for (const auto& [key, c] : nxyz) {
    const auto& [x, y, z] = key;
    total += c / n * std::log2(c * ny[y] / (nxy[{x, y}] * nyz[{y, z}]));
  }
  return total;
}

}  // namespace oracle
