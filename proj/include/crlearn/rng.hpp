#pragma once

#include <cstdint>
#include <random>

namespace crlearn {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent per-run streams from one
// master seed so ensembles do not depend on scheduling order.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class Stream : std::uint64_t { Topology = 1, Learner = 2, Channel = 3 };

inline Rng derive_rng(std::uint64_t master, std::uint64_t run_index, Stream stream) {
  std::uint64_t s = mix64(master);
  s = mix64(s ^ mix64(run_index + 0x632be59bd9b4e019ULL));
  s = mix64(s ^ static_cast<std::uint64_t>(stream));
  return Rng(s);
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace crlearn
