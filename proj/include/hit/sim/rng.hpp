#pragma once

#include <cstdint>

namespace hit::sim {

/// Deterministic substream seed (splitmix64 finalizer over seed and stream id).
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

enum Stream : std::uint64_t { kTrackerStream = 1, kPushStream = 2, kHumanStream = 3, kObserveStream = 4, kReactStream = 5 };

}  // namespace hit::sim
