#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tefb {

/// Maps a sigmoid output to a symbol: 1 iff output > g.
constexpr std::uint8_t binarize(double output, double g) noexcept { return output > g ? 1 : 0; }

/// Append-only sequence of {0,1} symbols for one neuron.
class BinarySeries {
 public:
  BinarySeries() = default;
  explicit BinarySeries(std::vector<std::uint8_t> symbols);

  void push_back(bool symbol) { values_.push_back(symbol ? 1 : 0); }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::uint8_t operator[](std::size_t t) const noexcept { return values_[t]; }
  std::span<const std::uint8_t> values() const noexcept { return values_; }
  operator std::span<const std::uint8_t>() const noexcept { return values_; }

  friend bool operator==(const BinarySeries&, const BinarySeries&) = default;

 private:
  std::vector<std::uint8_t> values_;
};

inline BinarySeries::BinarySeries(std::vector<std::uint8_t> symbols) : values_(std::move(symbols)) {
  for (auto& s : values_) s = s != 0 ? 1 : 0;
}

}  // namespace tefb
