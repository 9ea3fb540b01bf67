#pragma once

#include <cstdint>
#include <random>

namespace delbandit {

inline constexpr const char* kGeneratorId = "mt19937_64";

// SplitMix64 step; used only to derive independent stream seeds from one
// run seed so the loss draw cannot collide with the action draw.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct SeedStreams {
  std::uint64_t env_seed = 0;
  std::uint64_t policy_seed = 0;
};

inline SeedStreams derive_streams(std::uint64_t run_seed) {
  std::uint64_t s = run_seed;
  SeedStreams out;
  out.env_seed = splitmix64(s);
  out.policy_seed = splitmix64(s);
  return out;
}

// 53-bit uniform in [0, 1). Avoids generate_canonical, whose output is not
// pinned down by the standard; this form is reproducible everywhere.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace delbandit
