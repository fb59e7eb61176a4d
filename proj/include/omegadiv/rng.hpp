#pragma once

#include <cstdint>
#include <limits>

namespace omegadiv {

/// SplitMix64 stream keyed by (seed, path, stream). Each key gives an
/// independent-looking sequence, so results do not depend on scheduling.
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t path, std::uint64_t stream) {
    std::uint64_t s = mix(seed + kGolden);
    s = mix(s ^ (path * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
    state_ = mix(s ^ (stream * 0xAEF17502108EF2D9ULL + 0x2545F4914F6CDD1DULL));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += kGolden;
    return mix(state_);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace omegadiv
