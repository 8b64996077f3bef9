#pragma once

// Worker-count policy and deterministic per-index random streams.

#include <cstdint>
#include <functional>
#include <random>

namespace qex {

/// Worker count from QEX_WORKERS (default 1, clamped to [1, 256]).
int default_workers();

/// Runs body(begin, end, worker) over a contiguous split of [0, n).
void parallel_for(std::uint64_t n, int workers,
                  const std::function<void(std::uint64_t, std::uint64_t, int)>& body);

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent engine for trajectory `index` under `seed`; the stream does
/// not depend on how trajectories are split across workers.
inline std::mt19937_64 trajectory_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(seed)), static_cast<std::uint32_t>(splitmix64(seed) >> 32),
                    static_cast<std::uint32_t>(splitmix64(seed ^ splitmix64(index))),
                    static_cast<std::uint32_t>(splitmix64(seed ^ splitmix64(index)) >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace qex
