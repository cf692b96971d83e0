#pragma once

#include <cstdint>

namespace medianwalls::lab {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: the value at (seed, stream, index) is a pure
/// function of the triple, so a sample index fixes its random inputs no
/// matter how work is split.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t index = 0) noexcept
      : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL))), index_(index) {}

  static constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
    return CounterRng(seed, stream, index).next();
  }

  constexpr std::uint64_t next() noexcept { return mix64(key_ ^ mix64(index_++)); }

  /// Uniform in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform in [0, n); n must be positive.
  constexpr std::uint64_t below(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  [[nodiscard]] constexpr std::uint64_t index() const noexcept { return index_; }

 private:
  std::uint64_t key_;
  std::uint64_t index_;
};

}  // namespace medianwalls::lab
