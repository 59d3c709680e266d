#pragma once

#include <cstdint>
#include <random>

namespace graphon_lab {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Child seed for item `index` of a batch driven by `master`:
//   mix64(master, index) = splitmix64(master ^ splitmix64(index))
constexpr std::uint64_t mix64(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

constexpr std::uint64_t mix64(std::uint64_t master, std::uint64_t a,
                              std::uint64_t b) {
  return mix64(mix64(master, a), b);
}

using Engine = std::mt19937_64;

// Uniform double in [0,1) from the top 53 bits.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace graphon_lab
