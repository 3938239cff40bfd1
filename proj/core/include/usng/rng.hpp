#pragma once

#include <cstdint>
#include <random>

namespace usng {

struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

using Engine = std::mt19937_64;

/// Engine keyed by (seed, stream) through std::seed_seq, so distinct streams
/// give unrelated sequences.
Engine make_engine(RngSeed s);

/// Child stream for an independent unit of work (a replica, a pair batch).
/// Deterministic in (parent, index); children of different parents or
/// indices do not collide in practice (64-bit mixing).
RngSeed substream(RngSeed parent, std::uint64_t index);

/// Uniform double in the open interval (0, 1).
inline double uniform_open(Engine& eng) {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform integer in [0, n); n > 0.
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng);
}

}  // namespace usng
