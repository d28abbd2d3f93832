#pragma once
// Seeded random streams. Every pipeline stage (archive seeding, parent
// selection, mutation, probe drawing, train/test splitting, bootstrap)
// draws from its own stream derived from (base seed, replication, stream
// name), so changing how much randomness one stage consumes cannot shift
// any other stage.
//
// Distributions are hand-rolled on top of mt19937_64 so that outputs are
// bit-identical across standard library implementations.

#include <cstdint>
#include <cmath>
#include <numbers>
#include <random>
#include <string_view>

namespace qds {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64_bytes(const void* data, std::size_t size,
                                   std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Stream seed for (base, replication, name).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t replication,
                                 std::string_view stream) {
  std::uint64_t state = base;
  splitmix64(state);
  state ^= 0x632be59bd9b4e019ULL + replication;
  splitmix64(state);
  state ^= fnv1a64(stream);
  return splitmix64(state);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform on {0, ..., n-1}. Modulo bias is negligible for the small n
  // used here and keeps the draw count fixed at one.
  int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double gaussian() {
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi_v<double> * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qds
