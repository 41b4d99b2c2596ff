#pragma once

#include <cstdint>
#include <random>

namespace slicesim {

using Rng = std::mt19937_64;

/// Independent stream per (run seed, entity, purpose) so that results do not
/// depend on the order in which entities draw.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t entity, std::uint64_t purpose) {
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return mix(mix(mix(seed) ^ entity) ^ (purpose * 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t entity, std::uint64_t purpose) {
  return Rng(stream_seed(seed, entity, purpose));
}

}  // namespace slicesim
