#pragma once

#include <cstdint>

namespace tbrova {

// splitmix64 finalizer; full-period mixer, good enough to decorrelate stream ids.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seed for an independent per-word stream; decode of word i is reproducible
// from (seed, i) alone no matter how words are distributed over workers.
inline uint64_t substream_seed(uint64_t seed, uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index + 0x51ed270b0a1cull));
}

}  // namespace tbrova
