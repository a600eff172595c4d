#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace sarsim {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Output depends only on (key, counter), so any draw can be produced
/// independently of the others and in any order.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Block operator()(Block counter) const;

  /// Four 32-bit words for the 128-bit counter (stream, index).
  Block block(std::uint64_t stream, std::uint64_t index) const {
    return (*this)({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)});
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform(std::uint64_t stream, std::uint64_t index) const;

  /// Two independent N(0, 1) draws via Box-Muller on one counter block.
  std::pair<double, double> normal_pair(std::uint64_t stream, std::uint64_t index) const;

 private:
  std::array<std::uint32_t, 2> key_;
};

/// Stream identifiers keep independent consumers of one seed apart.
namespace rng_stream {
inline constexpr std::uint64_t kSeaPhases = 0x5345'4150ULL;
inline constexpr std::uint64_t kSpeckle = 0x5350'4543ULL;
}  // namespace rng_stream

}  // namespace sarsim
