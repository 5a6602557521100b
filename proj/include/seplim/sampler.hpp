#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "seplim/perm.hpp"
#include "seplim/rng.hpp"
#include "seplim/schroeder.hpp"

namespace seplim {

enum class sep_class { all, indecomposable, skew_indecomposable };

// Brute force over S_n filtering 2413/3142 containment, then the class
// predicate. Deliberately independent of the separating-tree code so the two
// paths check each other. Guarded to n <= 10.
std::vector<permutation> enumerate_sep(std::int64_t n, sep_class c);

// Exact-uniform sampler over separable permutations of a class.
//
// The descent uses the bijections (for size >= 2)
//   ALL(n)       = INDEC(n) + SKEWINDEC(n)          (fair coin; equal halves)
//   INDEC(n)     = sum_k SKEWINDEC(k) x ALL(n-k)    (tau skew-sum rest)
//   SKEWINDEC(n) = sum_k INDEC(k) x ALL(n-k)        (tau direct-sum rest)
// where k follows the first-block law of size n in both cases; a drawn
// element then has probability exactly 2/s_n (or 1/s_n for ALL). The task
// stack is explicit, so very long permutations cannot overflow the C stack.
//
// sample() is the strict entry point and requires the table to cover n.
// sample_block() also serves the limit construction, whose piece lengths are
// unbounded: first-block draws for sizes beyond the table switch to a
// rejection sampler over long-double weights t_j t_{n-j} (t_j = s_j rho^j
// from exact table logs where covered, the j^{-3/2} asymptotic beyond), with
// proposals drawn near each end of the block since that is where the mass
// sits. The tiny weight error is an approximation far below Monte Carlo
// resolution at any feasible sample count, and each draw costs O(log) time
// regardless of length.
class sep_sampler {
 public:
  explicit sep_sampler(std::shared_ptr<const schroeder_table> table);

  const schroeder_table& table() const { return *table_; }

  permutation sample(std::int64_t n, sep_class c, rng_stream& rng) const;
  permutation sample_block(std::int64_t val_lo, std::int64_t len, sep_class c,
                           rng_stream& rng) const;

  // Builds the first-block laws for all sizes up to n (capped at the memo
  // bound; larger sizes always use an O(1)-memory exact walk) so later
  // concurrent sampling never contends on the memo lock.
  void prewarm(std::int64_t n) const;

 private:
  const block_law& law_for(std::int64_t len) const;
  std::int64_t draw_first_block(std::int64_t len, rng_stream& rng) const;
  std::int64_t draw_first_block_oversize(std::int64_t len, rng_stream& rng) const;
  long double cum_t(std::int64_t j) const;  // prefix sums of s_j rho^j

  std::shared_ptr<const schroeder_table> table_;
  mutable std::mutex mu_;
  mutable std::vector<std::unique_ptr<const block_law>> laws_;
  // published pointers let the hot path skip the lock once a law exists
  mutable std::vector<std::atomic<const block_law*>> ready_;
  // immutable after construction; backs the oversize rejection sampler
  std::vector<long double> tcum_;
};

}  // namespace seplim
