#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace g2pia {

/// Deterministic helpers on top of std::mt19937_64. The standard pins the
/// engine's output sequence, so routing all bounded draws through these keeps
/// golden files stable across standard libraries (std::uniform_int_distribution
/// is implementation-defined).
inline uint64_t uniform_u64(std::mt19937_64& rng, uint64_t bound) {
  // Rejection sampling; unbiased.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

/// Uniform integer in [lo, hi], inclusive.
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform_u64(rng, static_cast<uint64_t>(hi - lo + 1)));
}

/// Uniform double in [0, 1).
inline double uniform_real(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

/// splitmix64 finalizer; used to derive independent per-example streams from
/// (campaign seed, example index).
inline uint64_t mix_seed(uint64_t seed, uint64_t salt) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over bytes; stable across platforms. Used by deterministic fixtures.
inline uint64_t stable_hash(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace g2pia
