#pragma once

#include <cstdint>
#include <random>

namespace tefb {

using Rng = std::mt19937_64;

/// Mixes a master seed with a stream tag and an index into an independent
/// child seed (splitmix64 finalizer). Used so every run, stage, and epoch
/// owns a reproducible RNG stream.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index = 0) noexcept {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1) + 0xBF58476D1CE4E5B9ULL * index;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream tags for derive_seed.
namespace seed_stream {
inline constexpr std::uint64_t init = 1;
inline constexpr std::uint64_t shuffle = 2;
inline constexpr std::uint64_t stage2_init = 3;
inline constexpr std::uint64_t run = 4;
inline constexpr std::uint64_t split = 5;
inline constexpr std::uint64_t xor_draw = 6;
}  // namespace seed_stream

}  // namespace tefb
