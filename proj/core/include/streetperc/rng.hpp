#pragma once

#include <cstdint>
#include <random>

namespace streetperc {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to scramble seeds before they reach the engine
// so that structured inputs (master, i, j) do not produce correlated streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based child seed for one replication of one grid value. Depends
// only on (master_seed, value_index, rep_index), never on execution order,
// so sweeps are reproducible at any thread count.
constexpr std::uint64_t child_seed(std::uint64_t master_seed,
                                   std::uint64_t value_index,
                                   std::uint64_t rep_index) {
  std::uint64_t h = splitmix64(master_seed ^ 0x6a09e667f3bcc909ULL);
  h = splitmix64(h ^ splitmix64(value_index + 0x3c6ef372fe94f82bULL));
  h = splitmix64(h ^ splitmix64(rep_index + 0xa54ff53a5f1d36f1ULL));
  return h;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

// Uniform on [0, 1). Never returns 1.0, so a relay draw u < p at p = 1
// accepts every vertex.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::int64_t sample_poisson(Rng& rng, double mean);

}  // namespace streetperc
