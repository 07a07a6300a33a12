#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace blockmod {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a
/// master seed and a tuple of job coordinates.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = mix64(master);
  for (auto p : parts) h = mix64(h ^ mix64(p));
  return h;
}

/// Seedable generator with distribution helpers whose output depends only on
/// the 64-bit engine stream (std:: distributions are implementation-defined).
class Rng {
 public:
  using Engine = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_zero() { return 1.0 - uniform(); }

  /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t index(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard exponential variate.
  double exponential() { return -std::log(uniform_open_zero()); }

 private:
  Engine engine_;
};

}  // namespace blockmod
