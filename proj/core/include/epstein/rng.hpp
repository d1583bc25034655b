#pragma once

// Seedable, splittable random streams. A run has one master seed; trial i
// draws from the stream derive(master, i), so results never depend on how
// trials are scheduled across workers.

#include <cmath>
#include <cstdint>
#include <random>

namespace epstein {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  // Seed of the index-th child stream of `master`.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + 0x9e3779b97f4a7c15ULL * (index + 1));
  }
  Rng split(std::uint64_t index) const { return Rng(derive(seed_, index)); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }

  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // (0, 1], safe for log.
  double uniform_open0() { return 1.0 - uniform(); }
  // Inverse-CDF exponential.
  double exponential(double mean) { return -mean * std::log(uniform_open0()); }
  // Box-Muller; one normal per call keeps the stream position simple.
  double normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
    return r * std::cos(6.283185307179586 * uniform());
  }
  // Uniform integer in [0, bound), unbiased by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return x % bound;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace epstein
