#pragma once

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace seplim {

// Deterministic stream of randomness. A stream is identified by (seed, key):
// the engine is a std::mt19937_64 seeded with a SplitMix64 hash of the pair,
// and substream(id) derives an independent stream from the same seed. Same
// seed + same draw order reproduces bit-identical output on any platform
// (mt19937_64 output is pinned by the standard).
class rng_stream {
 public:
  explicit rng_stream(std::uint64_t seed, std::uint64_t key = 0);

  rng_stream substream(std::uint64_t id) const;

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in (0,1]; useful where log(u) or 1/u^2 must not blow up at 0.
  double next_open_double() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

  // Uniform in [0,1) with the full 64-bit mantissa of a long double.
  long double next_long_double() { return static_cast<long double>(engine_()) * 0x1.0p-64L; }

  bool coin() { return (engine_() >> 63) != 0; }

  // Unbiased uniform over {0, ..., n-1}.
  std::uint64_t below(std::uint64_t n);
  mpz_class below(const mpz_class& n);

  // Standard normal, Box-Muller with a cached spare.
  double gaussian();

  std::uint64_t seed() const { return seed_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t key_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace seplim
