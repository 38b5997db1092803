#pragma once

#include <cstdint>
#include <random>

namespace eclone {

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of sub-stream `stream` under `root`. Distinct streams of one root are
// statistically independent, so work split across threads stays
// reproducible regardless of scheduling.
constexpr std::uint64_t stream_seed(std::uint64_t root, std::uint64_t stream) {
  return splitmix64(splitmix64(root) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t root, std::uint64_t stream = 0) {
  return Engine(stream_seed(root, stream));
}

}  // namespace eclone
