#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "seplim/perm.hpp"
#include "seplim/rng.hpp"
#include "seplim/sampler.hpp"
#include "seplim/schroeder.hpp"

namespace seplim {

// Coordinate value standing for infinity in N* sequences.
inline constexpr std::int64_t kInfCoord = std::numeric_limits<std::int64_t>::max();
// Default clamp for any single drawn component length; exceeding draws are
// clamped and flagged, never silently dropped.
inline constexpr std::int64_t kDefaultLengthCap = 100000;

// Component distributions of the limiting regenerative concatenation:
//   chi      fair coin for the piece kind
//   n_count  number of discard blocks per piece: P(0) = sqrt(2)/2,
//            P(j) = sqrt(2) rho^j
//   r_len    discard block length: P(k) = s_k rho^k / (sqrt(2)-1)
//   l_len    piece length: P(1) = 2 rho/(2-sqrt(2)), P(j) = s_j rho^j/(2-sqrt(2))
//   tilde_*  the N*-valued extensions with an atom at infinity
// with rho = 3 - 2 sqrt(2) throughout.
enum class component_law { chi, n_count, r_len, l_len, tilde_l, tilde_r };

// Pointwise pmf; pass kInfCoord for the atom at infinity. The exact table
// supplies s_j for the Schroeder-weighted laws, so j must stay within its
// bound for those. Accurate to ~1e-15 relative per term.
double pmf(component_law law, std::int64_t j, const schroeder_table& table);

// |total mass - 1| where the total combines exact partial sums over the table
// with the closed-form generating-function tail (and the infinity atom for
// the tilde laws). Checks the identity rho + s(rho) = 2 - sqrt(2) numerically.
double pmf_sum_gap(component_law law, const schroeder_table& table);

// Series value of E[n_count] = (1/2)^{3/2}.
double mean_n_count();

struct tilde_joint_report {
  double l_marginal_gap = 0;  // max atom gap, joint row sums vs the direct pmf
  double r_marginal_gap = 0;
  double l_total_gap = 0;  // |sum of the tilde_l law - 1|
  double r_total_gap = 0;
  double mass_at_inf_inf = 0;  // structurally zero
  double mass_at_1_inf = 0;    // = 2 rho
  bool ok = false;
};
tilde_joint_report joint_tilde_check(const schroeder_table& table);

// Samplers for the component laws. chi and n_count are closed-form; r_len and
// l_len invert a cumulative head table built from the exact recurrence that
// doubles on demand up to head_limit, then continue with the analytic
// k^{-3/2} tail (inverse-square transform of a uniform). Copy one suite per
// worker thread; prewarm() builds both heads fully so the consumed random
// stream no longer depends on growth history.
class law_suite {
 public:
  explicit law_suite(std::int64_t head_limit = 1 << 14);

  std::int64_t chi(rng_stream& rng);
  std::int64_t n_count(rng_stream& rng);
  double r_len(rng_stream& rng);
  double l_len(rng_stream& rng);
  double tilde_l(rng_stream& rng);  // returns double infinity for the inf atom
  double tilde_r(rng_stream& rng);
  double sample(component_law law, rng_stream& rng);

  void prewarm();

 private:
  struct heavy_tail {
    std::int64_t head_limit = 0;
    double first_atom_factor = 1.0;  // 2 for the piece-length law
    long double norm = 1.0L;
    std::int64_t built = 0;
    mpz_class s_prev, s_cur;
    std::vector<long double> cum;

    void grow(std::int64_t target);
    double draw(rng_stream& rng);
  };

  heavy_tail r_, l_;
};

// One piece of the regenerative concatenation.
struct limit_piece {
  std::int64_t discarded = 0;  // values dropped right before this piece
  bool is_perm = false;
  std::int64_t len = 0;
  std::optional<permutation> content;  // set iff is_perm
};

enum class prefix_mode { theorem, mechanism };

struct prefix_window {
  std::int64_t m = 0;
  prefix_mode mode = prefix_mode::theorem;
  std::int64_t length_cap = 0;
  bool truncated = false;
  std::int64_t frontier = 1;  // next unused integer after the last piece
  std::vector<std::int64_t> coords;
  std::vector<limit_piece> pieces;
};

// Lays down pieces until at least m coordinates exist.
//
// theorem mode draws chi, n_count, the r_len blocks and l_len independently
// for every piece. mechanism mode runs the four-state cycle chain instead:
// start from (p_{+F}, p_{-F}, p_{+I}, p_{-I}) =
// ((2-sqrt2)/2, (2-sqrt2)/2, (sqrt2-1)/2, (sqrt2-1)/2), move
// (+I) -> (-F) w.p. 2-sqrt2 else (-I), and (-I) -> (+F) w.p. 2-sqrt2 else
// (+I), discard one r_len block per (-I) arrival, and emit the piece on
// reaching (+F)/(-F). The two modes disagree about the joint law of (piece
// kind, discard count) and are kept side by side so experiments can measure
// the difference; perm pieces are uniform indecomposable blocks either way.
//
// Any single drawn length above cap clamps and sets the truncated flag.
prefix_window sample_limit_prefix(std::int64_t m, prefix_mode mode, std::int64_t cap,
                                  const sep_sampler& sampler, law_suite& laws,
                                  rng_stream& rng);

// One mechanism cycle without caps or piece materialization, for chain-level
// statistics: the (-I) arrival count per cycle has the n_count law and the
// piece kind is a fair coin.
struct cycle_outcome {
  bool perm_piece = false;
  std::int64_t arrivals = 0;
  double discard_sum = 0;
};
cycle_outcome run_mechanism_cycle(law_suite& laws, rng_stream& rng);

// First count coordinates of the embedding of a finite permutation over
// [1, n]: its values, then the identity continuation.
std::vector<std::int64_t> embed_finite(const permutation& p, std::int64_t count);

// Metric on N* = {1, 2, ...} u {inf}: d(i, j) = 2^{1-i} - 2^{1-j} for i < j.
double metric_nstar(std::int64_t i, std::int64_t j);

struct metric_bound {
  double value = 0;      // partial sum over the common prefix
  double tail_bound = 0;  // 2^{-m} bounds everything ignored
};
metric_bound metric_s(const prefix_window& a, const prefix_window& b);

// The two ratios readable off a window's piece bookkeeping: numbers appearing
// vs appearing-or-discarded, and integer coordinates vs all coordinates.
struct ratio_values {
  double appearing_vs_total = 0;
  bool undefined = false;  // 0/0, reported instead of a silent zero
  double integers_vs_coords = 0;
};
ratio_values ratio_stats(const prefix_window& w);

// Empirical total-variation comparison between the finite-n prefix law and
// the limit prefix law, bucketing every value above value_cap with infinity
// (the N* topology). Deterministic in (seed, reps) regardless of threads.
struct tv_report {
  prefix_mode mode = prefix_mode::mechanism;
  std::int64_t n = 0, m = 0, value_cap = 0, reps = 0;
  std::uint64_t seed = 0;
  std::int64_t length_cap = 0;
  std::vector<std::vector<std::int64_t>> finite_hist, limit_hist;  // [coord][bucket]
  std::vector<double> coord_tv, coord_tv_se;
  double joint_tv = 0, joint_tv_se = 0;
  bool joint_computed = false;
  std::int64_t limit_truncated = 0;  // windows that hit the length cap
  std::string warning;
};
tv_report compare_prefix_laws(std::int64_t n, std::int64_t m, std::int64_t value_cap,
                              std::int64_t reps, prefix_mode mode, const sep_sampler& sampler,
                              std::uint64_t seed, int threads = 1,
                              std::int64_t length_cap = kDefaultLengthCap);
std::string tv_report_json(const tv_report& r);

// Aggregate chain statistics over many mechanism cycles, threaded the same
// deterministic way.
struct cycle_report {
  std::int64_t cycles = 0;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> arrival_hist;  // index = per-cycle arrival count
  std::int64_t perm_pieces = 0;
  std::int64_t inf_pieces = 0;
};
cycle_report mechanism_cycle_stats(std::int64_t cycles, std::uint64_t seed, int threads = 1);

}  // namespace seplim
