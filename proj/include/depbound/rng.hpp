#pragma once

// Counter-based random number generation. Every draw is a pure function of
// (seed, stream, counter), so fragments regenerate bit-identically and
// parallel replications are order-independent.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace depbound::rng {

inline constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer (Stafford mix13).
inline constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// A keyed stream. Draws are indexed by a counter; sub() derives independent
// child streams (per replication, per time index, ...).
struct Key {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  [[nodiscard]] constexpr Key sub(std::uint64_t label) const noexcept {
    return Key{seed, mix(stream + golden * (label + 1))};
  }

  [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    const std::uint64_t base = mix(seed + golden) ^ mix(stream + 0xC2B2AE3D27D4EB4Full);
    return mix(base + golden * counter);
  }

  // Uniform on [0, 1).
  [[nodiscard]] double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a Box-Muller radius input.
  [[nodiscard]] double uniform_pos(std::uint64_t counter) const noexcept {
    return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal draw at index i. Consumes counters 2i and 2i+1.
  [[nodiscard]] double normal(std::uint64_t i) const noexcept {
    const double u1 = uniform_pos(2 * i);
    const double u2 = uniform(2 * i + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  [[nodiscard]] double rademacher(std::uint64_t counter) const noexcept {
    return (bits(counter) & 1ull) ? 1.0 : -1.0;
  }
};

}  // namespace depbound::rng
