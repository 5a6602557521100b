#include "seplim/stablelab.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "seplim/constants.hpp"
#include "seplim/limitlaw.hpp"
#include "seplim/schroeder.hpp"
#include "seplim/stats.hpp"

namespace seplim {

namespace {

// Distinct stream keys per experiment kind, so e.g. the discard and
// infinity ratio families are independent samples even under one seed.
constexpr std::uint64_t kSumStreamKey = 0x5ca1e5;
constexpr std::uint64_t kRatioStreamKey = 0x4a710;

// Per-factor CF of one piece length at angle theta = t/n^2. The theta = 0
// shortcut keeps t = 0 rows exactly 1 instead of within roundoff of it.
std::complex<double> l_factor(double theta) {
  if (theta == 0.0) return {1.0, 0.0};
  std::complex<double> unit = std::polar(1.0, -theta);
  return 0.5 * (2.0 - kSqrt2) * unit + 0.5 * (2.0 + kSqrt2) * gen_func_eval(kRho * unit);
}

std::complex<double> r_factor(double theta) {
  if (theta == 0.0) return {1.0, 0.0};
  return gen_func_eval(std::polar(kRho, -theta)) / (kSqrt2 - 1.0);
}

std::complex<double> compound_factor(double theta) {
  if (theta == 0.0) return {1.0, 0.0};
  std::complex<double> psi = r_factor(theta);
  std::complex<double> q = kRho * psi;
  if (std::abs(q) >= 1.0) {
    throw std::domain_error("exact_cf_compound: block-count geometric series diverges");
  }
  return 0.5 * kSqrt2 + kSqrt2 * q / (1.0 - q);
}

double checked_theta(double t, std::int64_t n, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": n must be >= 1");
  if (!std::isfinite(t)) throw std::domain_error(std::string(who) + ": t must be finite");
  return t / (static_cast<double>(n) * static_cast<double>(n));
}

std::complex<double> to_the_n(std::complex<double> f, std::int64_t n) {
  return std::pow(f, static_cast<double>(n));
}

// Round-robin replica split; worker(w, stride) owns replicas w, w+stride, ...
// Callers give each worker its own component-sampler state, so the only
// shared writes are to disjoint slots of preallocated result vectors.
void run_workers(int threads, const std::function<void(int, int)>& worker) {
  int t = std::max(1, threads);
  if (t == 1) {
    worker(0, 1);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(t));
  for (int w = 0; w < t; ++w) pool.emplace_back([&worker, w, t] { worker(w, t); });
  for (auto& th : pool) th.join();
}

}  // namespace

double stable_scale(stable_kind kind) {
  switch (kind) {
    case stable_kind::zl: return kHalfPow34;
    case stable_kind::zr: return kHalfPow14;
    case stable_kind::z: return kHalfPow74;
  }
  throw std::invalid_argument("stable_scale: unknown kind");
}

std::complex<double> stable_cf(stable_kind kind, double t) {
  if (!std::isfinite(t)) throw std::domain_error("stable_cf: t must be finite");
  if (t == 0.0) return {1.0, 0.0};
  double r = stable_scale(kind) * std::sqrt(std::fabs(t));
  return std::exp(std::complex<double>(-r, t > 0 ? -r : r));
}

std::complex<double> exact_cf_l_sum(double t, std::int64_t n) {
  return to_the_n(l_factor(checked_theta(t, n, "exact_cf_l_sum")), n);
}

std::complex<double> exact_cf_r_sum(double t, std::int64_t n) {
  return to_the_n(r_factor(checked_theta(t, n, "exact_cf_r_sum")), n);
}

std::complex<double> exact_cf_compound(double t, std::int64_t n) {
  return to_the_n(compound_factor(checked_theta(t, n, "exact_cf_compound")), n);
}

std::complex<double> joint_cf(double t, double s, std::int64_t n) {
  double theta_t = checked_theta(t, n, "joint_cf");
  double theta_s = checked_theta(s, n, "joint_cf");
  return to_the_n(0.5 * l_factor(theta_t) + 0.5 * l_factor(theta_s), n);
}

scale_link_report check_scale_links() {
  scale_link_report rep;
  const double chi_mean = 0.5;
  const double block_mean = std::pow(0.5, 1.5);
  for (double t : {0.25, 0.5, 1.0, 2.0, 4.0, -1.0, -3.0}) {
    std::complex<double> target = stable_cf(stable_kind::z, t);
    rep.quadratic_gap_l = std::max(
        rep.quadratic_gap_l, std::abs(stable_cf(stable_kind::zl, chi_mean * chi_mean * t) - target));
    rep.quadratic_gap_r = std::max(
        rep.quadratic_gap_r,
        std::abs(stable_cf(stable_kind::zr, block_mean * block_mean * t) - target));
    rep.linear_gap_l =
        std::max(rep.linear_gap_l, std::abs(stable_cf(stable_kind::zl, chi_mean * t) - target));
    rep.linear_gap_r =
        std::max(rep.linear_gap_r, std::abs(stable_cf(stable_kind::zr, block_mean * t) - target));
  }
  rep.quadratic_consistent = rep.quadratic_gap_l <= 1e-12 && rep.quadratic_gap_r <= 1e-12;
  return rep;
}

double sample_levy(double scale, rng_stream& rng) {
  if (!(scale > 0.0)) throw std::invalid_argument("sample_levy: scale must be positive");
  double g = rng.gaussian();
  while (g == 0.0) g = rng.gaussian();
  return scale / (g * g);
}

cf_point empirical_cf(const std::vector<double>& samples, double t) {
  if (samples.empty()) throw std::invalid_argument("empirical_cf: empty sample");
  double sum_c = 0, sum_s = 0, sum_c2 = 0, sum_s2 = 0;
  for (double x : samples) {
    double c = std::cos(t * x);
    double s = std::sin(t * x);
    sum_c += c;
    sum_c2 += c * c;
    sum_s += s;
    sum_s2 += s * s;
  }
  double count = static_cast<double>(samples.size());
  double mean_c = sum_c / count;
  double mean_s = sum_s / count;
  cf_point out;
  out.value = {mean_c, -mean_s};
  out.se_re = std::sqrt(std::max(0.0, sum_c2 / count - mean_c * mean_c) / count);
  out.se_im = std::sqrt(std::max(0.0, sum_s2 / count - mean_s * mean_s) / count);
  return out;
}

std::vector<double> mc_scaled_sums(sum_kind kind, std::int64_t n, std::int64_t reps,
                                   std::uint64_t seed, int threads) {
  if (n < 1 || reps < 1) {
    throw std::invalid_argument("mc_scaled_sums: n and reps must be >= 1");
  }
  law_suite proto;
  proto.prewarm();
  rng_stream base(seed, kSumStreamKey + static_cast<std::uint64_t>(kind));
  std::vector<double> out(static_cast<std::size_t>(reps));
  const double inv_n2 = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  run_workers(threads, [&](int w, int stride) {
    law_suite laws = proto;
    for (std::int64_t i = w; i < reps; i += stride) {
      rng_stream rng = base.substream(static_cast<std::uint64_t>(i));
      double sum = 0.0;
      for (std::int64_t k = 0; k < n; ++k) {
        switch (kind) {
          case sum_kind::l_sum:
            sum += laws.l_len(rng);
            break;
          case sum_kind::chi_l_sum: {
            bool keep = laws.chi(rng) == 1;
            double piece = laws.l_len(rng);
            if (keep) sum += piece;
            break;
          }
          case sum_kind::r_compound: {
            std::int64_t blocks = laws.n_count(rng);
            for (std::int64_t b = 0; b < blocks; ++b) sum += laws.r_len(rng);
            break;
          }
        }
      }
      out[static_cast<std::size_t>(i)] = sum * inv_n2;
    }
  });
  return out;
}

ratio_summary mc_ratio(ratio_kind which, std::int64_t n, std::int64_t reps, std::uint64_t seed,
                       int threads) {
  if (n < 1 || reps < 1) throw std::invalid_argument("mc_ratio: n and reps must be >= 1");
  law_suite proto;
  proto.prewarm();
  rng_stream base(seed, kRatioStreamKey + static_cast<std::uint64_t>(which));
  std::vector<double> raw(static_cast<std::size_t>(reps));
  run_workers(threads, [&](int w, int stride) {
    law_suite laws = proto;
    for (std::int64_t i = w; i < reps; i += stride) {
      rng_stream rng = base.substream(static_cast<std::uint64_t>(i));
      double appearing = 0.0;
      double other = 0.0;
      for (std::int64_t k = 0; k < n; ++k) {
        bool keep = laws.chi(rng) == 1;
        double piece = laws.l_len(rng);
        if (keep) appearing += piece;
        if (which == ratio_kind::infinity_blocks) {
          if (!keep) other += piece;
        } else {
          std::int64_t blocks = laws.n_count(rng);
          for (std::int64_t b = 0; b < blocks; ++b) other += laws.r_len(rng);
        }
      }
      double denom = appearing + other;
      raw[static_cast<std::size_t>(i)] =
          denom > 0.0 ? appearing / denom : std::numeric_limits<double>::quiet_NaN();
    }
  });

  ratio_summary s;
  s.which = which;
  s.n = n;
  s.reps = reps;
  s.seed = seed;
  s.hist.assign(20, 0);
  s.samples.reserve(raw.size());
  double total = 0.0;
  for (double v : raw) {
    if (std::isnan(v)) {
      ++s.undefined;
      continue;
    }
    s.samples.push_back(v);
    total += v;
    auto bin = static_cast<std::size_t>(std::min(19.0, v * 20.0));
    ++s.hist[bin];
  }
  if (!s.samples.empty()) {
    s.mean = total / static_cast<double>(s.samples.size());
    s.ks_arcsine = ks_statistic(s.samples, arcsine_cdf);
  }
  return s;
}

std::string ratio_summary_json(const ratio_summary& r) {
  nlohmann::json j;
  j["which"] = r.which == ratio_kind::discard ? "discard" : "infinity";
  j["n"] = r.n;
  j["reps"] = r.reps;
  j["seed"] = r.seed;
  j["kept"] = static_cast<std::int64_t>(r.samples.size());
  j["undefined"] = r.undefined;
  j["mean"] = r.mean;
  j["ks_arcsine"] = r.ks_arcsine;
  j["hist_bins"] = static_cast<std::int64_t>(r.hist.size());
  j["hist"] = r.hist;
  return j.dump(2);
}

}  // namespace seplim
