#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "seplim/rng.hpp"

namespace seplim {

// Exact table of the number of separable permutations of [n] (the big
// Schroeder numbers shifted by one: 1, 2, 6, 22, 90, 394, ...). Values are
// 1-based and prefix-stable: s(n) does not depend on max_n. Immutable after
// construction, so concurrent readers need no locking.
class schroeder_table {
 public:
  static constexpr std::int64_t default_bound = 20000;

  // Builds s_1..s_n_max by the three-term recurrence
  //   (n+1) s_{n+1} = 3(2n-1) s_n - (n-2) s_{n-1},  n >= 2,
  // asserting exact divisibility at every step and cross-checking the
  // quadratic convolution s_n = 2 s_{n-1} + sum_{j=2}^{n-1} s_j s_{n-j}
  // for all n <= 64.
  static schroeder_table compute(std::int64_t n_max);

  // Text cache round-trip. First line: "sep-limit schroeder v1 <max_n>",
  // then one decimal integer per line. load() re-validates s_1, s_2 and the
  // convolution identity at 16 deterministic spot-check indices and throws
  // std::runtime_error on any mismatch or malformed content.
  static schroeder_table load(const std::string& path);
  void save(const std::string& path) const;

  std::int64_t max_n() const { return static_cast<std::int64_t>(values_.size()); }
  const mpz_class& s(std::int64_t n) const;

  // Natural log of s_n, accurate to a few ulp even for thousands of digits.
  double log_s(std::int64_t n) const;

 private:
  schroeder_table() = default;
  std::vector<mpz_class> values_;
};

// Generating function 0.5*(1 - z - sqrt(z^2 - 6z + 1)) on the closed disk
// |z| <= 3 - 2*sqrt(2). The radicand is computed in the factored form
// (z - rho)(z - 1/rho), which keeps it exactly on the right half plane for
// the whole disk (verified at runtime) and avoids cancellation at z = rho.
// Outside the disk: std::domain_error.
std::complex<double> gen_func_eval(std::complex<double> z);

// log of the n^{-3/2} rho^{-n} approximation of s_n; exact-table ratio
// against it. asymptotic_estimate overflows double for n >~ 400, the log
// form does not.
double asymptotic_log_estimate(std::int64_t n);
double asymptotic_estimate(std::int64_t n);
double asymptotic_ratio(const schroeder_table& table, std::int64_t n);

// First-block length law for a uniform decomposable element of size n:
//   P(len = 1) = 2 s_{n-1} / s_n,
//   P(len = j) = s_j s_{n-j} / s_n,   2 <= j <= n-1.
// The weights sum to exactly 1 by the convolution recurrence; the class
// keeps the cumulative big-integer numerators so sample() can invert an
// exact uniform draw over {0, ..., s_n - 1}.
class block_law {
 public:
  block_law(const schroeder_table& table, std::int64_t n);

  std::int64_t n() const { return n_; }
  const mpz_class& total() const { return total_; }
  mpq_class weight(std::int64_t j) const;
  mpq_class complement_weight(std::int64_t k) const;
  const mpz_class& cumulative(std::int64_t j) const;
  std::int64_t sample(rng_stream& rng) const;

 private:
  std::int64_t n_;
  mpz_class total_;
  std::vector<mpz_class> cum_;  // cum_[j-1] = sum of the first j numerators
};

}  // namespace seplim
