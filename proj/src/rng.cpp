#include "seplim/rng.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace seplim {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_pair(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a;
  std::uint64_t h = splitmix64(s);
  s ^= b;
  h ^= splitmix64(s);
  return h;
}

}  // namespace

rng_stream::rng_stream(std::uint64_t seed, std::uint64_t key)
    : engine_(mix_pair(seed, key)), seed_(seed), key_(key) {}

rng_stream rng_stream::substream(std::uint64_t id) const {
  return rng_stream(seed_, mix_pair(key_ ^ 0x5851f42d4c957f2dULL, id));
}

std::uint64_t rng_stream::below(std::uint64_t n) {
  if (n == 0) return 0;
  // Rejection from the smallest power-of-two envelope keeps the draw unbiased.
  std::uint64_t mask = ~0ULL;
  if ((n & (n - 1)) == 0) return engine_() & (n - 1);
  int bits = 64 - __builtin_clzll(n);
  mask = (bits == 64) ? ~0ULL : ((1ULL << bits) - 1);
  for (;;) {
    std::uint64_t r = engine_() & mask;
    if (r < n) return r;
  }
}

mpz_class rng_stream::below(const mpz_class& n) {
  if (n <= 1) return 0;
  std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  std::size_t words = (bits + 63) / 64;
  int top_bits = static_cast<int>(bits - (words - 1) * 64);
  std::uint64_t top_mask = (top_bits == 64) ? ~0ULL : ((1ULL << top_bits) - 1);
  std::vector<std::uint64_t> buf(words);
  mpz_class r;
  for (;;) {
    for (std::size_t i = 0; i + 1 < words; ++i) buf[i] = engine_();
    buf[words - 1] = engine_() & top_mask;
    mpz_import(r.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
    if (r < n) return r;
  }
}

double rng_stream::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = next_open_double();
  double u2 = next_double();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

}  // namespace seplim
