#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace spatial {

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream key derived only from its coordinates, so adding a draw for one
// (tick, entity) never shifts the draws of another.
inline std::uint64_t counter_seed(std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (std::uint64_t c : coords) h = mix64(h ^ mix64(c));
  return h;
}

inline std::mt19937_64 counter_rng(std::initializer_list<std::uint64_t> coords) {
  return std::mt19937_64(counter_seed(coords));
}

}  // namespace spatial
