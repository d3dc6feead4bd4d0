#pragma once

// Seeded streams for start points and model sampling. Everything derives from
// std::mt19937_64 (bit-exact across standard libraries); doubles are built from
// the top 53 bits instead of going through std::uniform_real_distribution,
// whose output is implementation-defined.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

#include "condg/box.hpp"

namespace condg {

/// FNV-1a, used to fold names into seeds.
constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// splitmix64 finalizer; combines stream keys into a single seed.
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::initializer_list<std::uint64_t> keys) : engine_(fold(keys)) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Vector uniform_in(const BoxBounds& box) {
    Vector u(box.dim());
    for (int j = 0; j < box.dim(); ++j) u[j] = uniform();
    return box.from_unit(u);
  }

  std::uint64_t next() { return engine_(); }

 private:
  static std::uint64_t fold(std::initializer_list<std::uint64_t> keys) {
    std::uint64_t s = 0x6a09e667f3bcc909ULL;
    for (auto k : keys) s = mix_seed(s, k);
    return s;
  }

  std::mt19937_64 engine_;
};

}  // namespace condg
