#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "seplim/rng.hpp"

namespace seplim {

// Limit laws of the n^{-2}-scaled component sums. All three are one-sided
// stable with index 1/2; every evaluator in this header uses the
// E exp(-itX) sign convention, so values at t > 0 sit in the lower half
// plane. The kinds:
//   zl  sum of the n piece lengths
//   zr  sum of n discard-block lengths
//   z   sum of the surviving piece lengths, and equally the compound
//       discard sum over all pieces; both thinned sums share this law
enum class stable_kind { zl, zr, z };

// Coefficient c in exp(-c |t|^{1/2} (1 + i sgn t)): (1/2)^{3/4} for zl,
// (1/2)^{1/4} for zr, (1/2)^{7/4} for z.
double stable_scale(stable_kind kind);

// Closed-form limit characteristic function; exactly 1 at t = 0.
std::complex<double> stable_cf(stable_kind kind, double t);

// E exp(-it (sum of n iid piece lengths) / n^2), computed exactly: the
// per-factor CF is (2-sqrt2)/2 e^{-i theta} + (2+sqrt2)/2 s(rho e^{-i theta})
// with theta = t/n^2 and s the generating function, raised to the n-th
// power. The square-root branch inside s is the principal one, valid
// because the radicand stays on the right half plane on |z| = rho; leaving
// that half plane raises std::domain_error.
std::complex<double> exact_cf_l_sum(double t, std::int64_t n);

// E exp(-it (sum of n iid discard-block lengths) / n^2): the one-block CF
// psi = s(rho e^{-i theta})/(sqrt2 - 1) raised to the n-th power.
std::complex<double> exact_cf_r_sum(double t, std::int64_t n);

// Same for the compound discard sum: per factor, condition on the number
// of discard blocks, giving sqrt2/2 + sqrt2 q/(1-q) with q = rho psi and
// psi the one-block CF as above. Raises std::domain_error if the geometric
// series diverges (|q| >= 1, which no real t produces).
std::complex<double> exact_cf_compound(double t, std::int64_t n);

// E exp(-it A/n^2 - is B/n^2) where each piece contributes its length to A
// on heads and to B on tails of a fair coin: per factor the mixture
// (f(t/n^2) + f(s/n^2))/2 of piece-length factors, to the n-th power. As n
// grows this approaches stable_cf(z, t) * stable_cf(z, s), which is the
// asymptotic-independence statement for the two thinned sums.
std::complex<double> joint_cf(double t, double s, std::int64_t n);

// The thinned sums reach the z law by rescaling the argument of their base
// CFs. A fraction p of heavy half-stable terms scales the sum by p^2 and
// hence the CF coefficient by p, so the right rescaling is quadratic in the
// thinning mean: phi_zl(t/4) = phi_zr(t/8) = phi_z(t). The report records
// the sup gap of those identities over a t-grid next to the gaps of the
// linear-in-the-mean variants phi_zl(t/2) and phi_zr(t (1/2)^{3/2}), which
// stay bounded away from zero; a wrong exponent anywhere shows up in one
// side or the other.
struct scale_link_report {
  double quadratic_gap_l = 0;
  double quadratic_gap_r = 0;
  double linear_gap_l = 0;
  double linear_gap_r = 0;
  bool quadratic_consistent = false;
};
scale_link_report check_scale_links();

// One-sided stable-1/2 draw: scale divided by a squared standard normal.
// Its CF is exp(-sqrt(scale) |t|^{1/2} (1 + i sgn t)), so pass c*c to
// target coefficient c. Used as the independent oracle for the closed
// forms above.
double sample_levy(double scale, rng_stream& rng);

struct cf_point {
  std::complex<double> value;
  double se_re = 0;  // standard error of the real part
  double se_im = 0;
};

// Average of exp(-it x) over the sample, with per-part standard errors.
cf_point empirical_cf(const std::vector<double>& samples, double t);

// Which scaled sum a Monte Carlo replica accumulates.
enum class sum_kind { l_sum, chi_l_sum, r_compound };

// reps independent draws of (component sum)/n^2, each replica summing n iid
// factors of the requested kind. Deterministic in (kind, n, reps, seed)
// regardless of threads; distinct kinds use distinct streams even at equal
// seeds so their outputs can be compared as independent samples.
std::vector<double> mc_scaled_sums(sum_kind kind, std::int64_t n, std::int64_t reps,
                                   std::uint64_t seed, int threads = 1);

// The two ratios of Monte Carlo interest: numbers appearing vs appearing or
// discarded (discard), and integer coordinates vs all coordinates
// (infinity_blocks). Both converge to Z1/(Z1+Z2) with Z1, Z2 iid stable,
// which is the arcsine law.
enum class ratio_kind { discard, infinity_blocks };

struct ratio_summary {
  ratio_kind which = ratio_kind::discard;
  std::int64_t n = 0;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  double mean = 0;
  double ks_arcsine = 0;        // KS distance to Beta(1/2,1/2)
  std::int64_t undefined = 0;   // 0/0 replicas, excluded from the stats
  std::vector<std::int64_t> hist;  // 20 uniform bins over [0,1]
  std::vector<double> samples;     // defined ratios in replica order
};

// Each replica draws the n iid component factors and reports the requested
// ratio. Same determinism and stream-separation contract as
// mc_scaled_sums.
ratio_summary mc_ratio(ratio_kind which, std::int64_t n, std::int64_t reps,
                       std::uint64_t seed, int threads = 1);

std::string ratio_summary_json(const ratio_summary& r);

}  // namespace seplim
