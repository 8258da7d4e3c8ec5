#pragma once

// Deterministic random streams. Every consumer draws from its own stream,
// derived from the run seed and a (purpose, index) name, so adding a new
// consumer never shifts the numbers seen by existing ones.

#include <cstdint>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>

#include "cfr/error.hpp"

namespace cfr {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// FNV-1a; stable across platforms unlike std::hash.
inline std::uint64_t stable_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline Rng make_stream(std::uint64_t seed, std::string_view purpose, std::uint64_t index = 0) {
  std::uint64_t s = seed ^ stable_hash(purpose);
  s ^= splitmix64(s) + index * 0xD1B54A32D192ED03ull;
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s))};
  return Rng(seq);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Draws an index from a distribution; zero-probability entries are never
// returned.
inline int sample_index(std::span<const double> probs, Rng& rng) {
  const double u = uniform01(rng);
  double cum = 0.0;
  int last = -1;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    if (probs[a] <= 0.0) continue;
    cum += probs[a];
    last = static_cast<int>(a);
    if (u < cum) return last;
  }
  require(last >= 0, ErrorCode::kInvalidInput, "cannot sample from an all-zero distribution");
  return last;
}

inline std::string rng_state(const Rng& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

inline void set_rng_state(Rng& rng, const std::string& state) {
  std::istringstream is(state);
  is >> rng;
  require(!is.fail(), ErrorCode::kInvalidInput, "malformed random generator state");
}

}  // namespace cfr
