#include "seplim/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "seplim/constants.hpp"

namespace seplim {

std::vector<permutation> enumerate_sep(std::int64_t n, sep_class c) {
  if (n < 1 || n > 10) {
    throw std::invalid_argument("enumerate_sep: n must be in [1, 10]");
  }
  std::vector<std::int64_t> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  std::vector<permutation> out;
  do {
    permutation p(v);
    if (find_forbidden(p).has_value()) continue;
    if (c == sep_class::indecomposable && !indecomposable(p)) continue;
    if (c == sep_class::skew_indecomposable && !skew_indecomposable(p)) continue;
    out.push_back(std::move(p));
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

namespace {

// Cached block laws above this size would cost O(len^2) big-integer memory
// each; larger sizes use the two-pointer walk below instead.
constexpr std::int64_t kLawMemoBound = 512;

// Exact inversion without materializing cumulative sums: enumerate first-block
// lengths from both ends inward (1, len-1, 2, len-2, ...). The law piles its
// mass on short blocks at either end, so the walk stops after O(sqrt(len))
// steps on average while staying exactly uniform.
std::int64_t first_block_walk(const schroeder_table& t, std::int64_t len, rng_stream& rng) {
  const mpz_class u = rng.below(t.s(len));
  mpz_class acc = 0;
  for (std::int64_t lo = 1, hi = len - 1; lo <= hi; ++lo, --hi) {
    acc += lo == 1 ? mpz_class(2 * t.s(len - 1)) : mpz_class(t.s(lo) * t.s(len - lo));
    if (u < acc) return lo;
    if (lo != hi) {
      acc += t.s(hi) * t.s(len - hi);
      if (u < acc) return hi;
    }
  }
  throw std::logic_error("first_block_walk: weights failed to cover the draw");
}

}  // namespace

sep_sampler::sep_sampler(std::shared_ptr<const schroeder_table> table)
    : table_(std::move(table)) {
  if (!table_) throw std::invalid_argument("sep_sampler: null table");
  const auto slots = static_cast<std::size_t>(std::min(table_->max_n(), kLawMemoBound)) + 1;
  laws_.resize(slots);
  ready_ = std::vector<std::atomic<const block_law*>>(slots);
  // t_j = s_j rho^j prefix sums; the series total is the generating function
  // at rho, sqrt(2) - 1, which prices the analytic tail exactly
  const std::int64_t head = 1 << 14;
  tcum_.reserve(static_cast<std::size_t>(head));
  long double acc = 0.0L;
  for (std::int64_t j = 1; j <= head; ++j) {
    const double ls =
        j <= table_->max_n() ? table_->log_s(j) : asymptotic_log_estimate(j);
    acc += std::exp(static_cast<long double>(ls) + static_cast<long double>(j) * kLogRhoL);
    tcum_.push_back(acc);
  }
}

long double sep_sampler::cum_t(std::int64_t j) const {
  if (j <= 0) return 0.0L;
  if (j > static_cast<std::int64_t>(tcum_.size())) {
    // continuation tail: survival sqrt((K + 1/2) / (j + 1/2)) of the mass
    // beyond the cached head
    const long double total = kSqrt2L - 1.0L;
    const long double head = tcum_.back();
    const long double k = static_cast<long double>(tcum_.size());
    return total - (total - head) * std::sqrt((k + 0.5L) / (static_cast<long double>(j) + 0.5L));
  }
  return tcum_[static_cast<std::size_t>(j - 1)];
}

const block_law& sep_sampler::law_for(std::int64_t len) const {
  auto& slot = ready_[static_cast<std::size_t>(len)];
  if (const block_law* p = slot.load(std::memory_order_acquire)) return *p;
  std::lock_guard<std::mutex> lock(mu_);
  if (const block_law* p = slot.load(std::memory_order_relaxed)) return *p;
  auto built = std::make_unique<const block_law>(*table_, len);
  const block_law* raw = built.get();
  laws_[static_cast<std::size_t>(len)] = std::move(built);
  slot.store(raw, std::memory_order_release);
  return *raw;
}

void sep_sampler::prewarm(std::int64_t n) const {
  if (n > table_->max_n()) throw std::invalid_argument("sep_sampler: prewarm beyond table");
  for (std::int64_t len = 2; len <= std::min(n, kLawMemoBound); ++len) law_for(len);
}

std::int64_t sep_sampler::draw_first_block(std::int64_t len, rng_stream& rng) const {
  if (len <= std::min(table_->max_n(), kLawMemoBound)) return law_for(len).sample(rng);
  if (len <= table_->max_n()) return first_block_walk(*table_, len, rng);
  return draw_first_block_oversize(len, rng);
}

// Beyond the exact table the weights become t_j t_{len-j} (t_j = s_j rho^j,
// j = 1 doubled), each t off by at most O(1/j) through the asymptotic branch.
// Both factors are heavy-tailed, so propose j near one end or the other from
// the cached t-law and accept against the far factor; t_{len-j}/t_len stays
// below (1/2)^{-3/2} + slack on either half, so 4 bounds the ratio.
std::int64_t sep_sampler::draw_first_block_oversize(std::int64_t len, rng_stream& rng) const {
  const std::int64_t cache_n = static_cast<std::int64_t>(tcum_.size());
  const auto log_t = [&](std::int64_t m) -> long double {
    const double ls = m <= table_->max_n() ? table_->log_s(m) : asymptotic_log_estimate(m);
    return static_cast<long double>(ls) + static_cast<long double>(m) * kLogRhoL;
  };
  // truncated draw from the law proportional to t_j on [1, limit], with the
  // j = 1 atom doubled when asked (the direct/skew split does not halve it)
  const auto draw_t = [&](bool dbl_first, std::int64_t limit) -> std::int64_t {
    const long double s = cum_t(limit) + (dbl_first ? kRhoL : 0.0L);
    long double u = rng.next_long_double() * s;
    if (dbl_first) {
      if (u < 2.0L * kRhoL) return 1;
      u -= kRhoL;  // back into plain prefix-sum coordinates
    }
    const std::int64_t in_cache = std::min(limit, cache_n);
    const auto end = tcum_.begin() + in_cache;
    if (u < tcum_[static_cast<std::size_t>(in_cache - 1)])
      return (std::upper_bound(tcum_.begin(), end, u) - tcum_.begin()) + 1;
    if (limit <= cache_n) return limit;
    const long double k = static_cast<long double>(cache_n);
    const long double tail = kSqrt2L - 1.0L - tcum_.back();
    const long double v = 1.0L - (u - tcum_.back()) / tail;  // survival parameter
    const std::int64_t j = static_cast<std::int64_t>((k + 0.5L) / (v * v) + 0.5L);
    return std::clamp<std::int64_t>(j, cache_n + 1, limit);
  };

  const std::int64_t h = len / 2;
  const std::int64_t hi_top = len - 1 - h;  // high side proposes k = len - j
  const long double sl = cum_t(h) + kRhoL;
  const long double sr = cum_t(hi_top);
  const long double smax = std::max(sl, sr);
  const long double bound = 4.0L;
  const long double log_tn = log_t(len);
  for (;;) {
    std::int64_t j;
    long double accept;
    if (rng.coin()) {
      j = draw_t(true, h);
      accept = std::exp(log_t(len - j) - log_tn) / bound * (sl / smax);
    } else {
      j = len - draw_t(false, hi_top);
      accept = std::exp(log_t(j) - log_tn) / bound * (sr / smax);
    }
    if (rng.next_double() < static_cast<double>(accept)) return j;
  }
}

permutation sep_sampler::sample(std::int64_t n, sep_class c, rng_stream& rng) const {
  if (n < 1) throw std::invalid_argument("sep_sampler: n must be >= 1");
  if (n > table_->max_n()) {
    throw std::invalid_argument("sep_sampler: table does not cover n=" + std::to_string(n));
  }
  return sample_block(1, n, c, rng);
}

permutation sep_sampler::sample_block(std::int64_t val_lo, std::int64_t len, sep_class c,
                                      rng_stream& rng) const {
  if (len < 1) throw std::invalid_argument("sep_sampler: block length must be >= 1");
  struct task {
    std::int64_t pos, val, len;
    sep_class cls;
  };
  std::vector<std::int64_t> out(static_cast<std::size_t>(len));
  std::vector<task> stack{{0, val_lo, len, c}};
  while (!stack.empty()) {
    task t = stack.back();
    stack.pop_back();
    if (t.len == 1) {
      out[static_cast<std::size_t>(t.pos)] = t.val;
      continue;
    }
    if (t.cls == sep_class::all) {
      t.cls = rng.coin() ? sep_class::indecomposable : sep_class::skew_indecomposable;
    }
    std::int64_t k = draw_first_block(t.len, rng);
    if (t.cls == sep_class::indecomposable) {
      // first k positions carry the top k values (skew-indecomposable part),
      // the rest is an arbitrary separable block below it
      stack.push_back({t.pos + k, t.val, t.len - k, sep_class::all});
      stack.push_back({t.pos, t.val + t.len - k, k, sep_class::skew_indecomposable});
    } else {
      stack.push_back({t.pos + k, t.val + k, t.len - k, sep_class::all});
      stack.push_back({t.pos, t.val, k, sep_class::indecomposable});
    }
  }
  return permutation(std::move(out));
}

}  // namespace seplim
