#include "seplim/limitlaw.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <utility>

#include <json.hpp>

#include "seplim/constants.hpp"

namespace seplim {

namespace {

const double kTwoMinusSqrt2 = 2.0 - kSqrt2;
const long double kTwoMinusSqrt2L = 2.0L - kSqrt2L;
const long double kSqrt2M1L = kSqrt2L - 1.0L;

// log2 of a positive big integer, good to ~1e-16 relative.
long double log2_mpz(const mpz_class& v) {
  long e = 0;
  const double mant = mpz_get_d_2exp(&e, v.get_mpz_t());
  return std::log2(static_cast<long double>(mant)) + static_cast<long double>(e);
}

// s_k rho^k evaluated through logs so huge s_k never overflows.
long double rho_term(const schroeder_table& table, std::int64_t k) {
  return std::exp2(log2_mpz(table.s(k)) + static_cast<long double>(k) * kLog2RhoL);
}

long double rho_pow(std::int64_t j) {
  return std::exp2(static_cast<long double>(j) * kLog2RhoL);
}

// Joint law of the two-sided tilde pair: exactly one side is infinite.
long double tilde_joint(std::int64_t j, std::int64_t k, const schroeder_table& table) {
  const bool ji = j == kInfCoord;
  const bool ki = k == kInfCoord;
  if (ji && ki) return 0.0L;
  if (!ji && !ki) return 0.0L;
  if (ki) {
    if (j < 1) return 0.0L;
    if (j == 1) return 2.0L * kRhoL;
    return rho_term(table, j);
  }
  if (k < 1) return 0.0L;
  return rho_term(table, k);
}

}  // namespace

double pmf(component_law law, std::int64_t j, const schroeder_table& table) {
  const bool inf = j == kInfCoord;
  switch (law) {
    case component_law::chi:
      return (!inf && (j == 0 || j == 1)) ? 0.5 : 0.0;
    case component_law::n_count:
      if (inf || j < 0) return 0.0;
      if (j == 0) return kSqrt2 / 2;
      return static_cast<double>(kSqrt2L * rho_pow(j));
    case component_law::r_len:
      if (inf || j < 1) return 0.0;
      return static_cast<double>(rho_term(table, j) / kSqrt2M1L);
    case component_law::l_len:
      if (inf || j < 1) return 0.0;
      if (j == 1) return static_cast<double>(2.0L * kRhoL / kTwoMinusSqrt2L);
      return static_cast<double>(rho_term(table, j) / kTwoMinusSqrt2L);
    case component_law::tilde_l:
      if (inf) return static_cast<double>(kSqrt2M1L);
      return static_cast<double>(tilde_joint(j, kInfCoord, table));
    case component_law::tilde_r:
      if (inf) return static_cast<double>(kTwoMinusSqrt2L);
      return static_cast<double>(tilde_joint(kInfCoord, j, table));
  }
  throw std::logic_error("pmf: unknown law");
}

double pmf_sum_gap(component_law law, const schroeder_table& table) {
  // s(rho) by the closed form, an independent route from the recurrence terms.
  const long double s_at_rho = gen_func_eval(std::complex<double>(kRho, 0.0)).real();
  const std::int64_t cutoff = std::min<std::int64_t>(table.max_n(), 4096);

  auto partial = [&](std::int64_t lo) {
    long double acc = 0.0L;
    for (std::int64_t k = lo; k <= cutoff; ++k) acc += rho_term(table, k);
    return acc;
  };

  long double total = 0.0L;
  switch (law) {
    case component_law::chi:
      total = 0.5L + 0.5L;
      break;
    case component_law::n_count: {
      total = kSqrt2L / 2.0L;
      for (std::int64_t j = 1; j <= 256; ++j) total += kSqrt2L * rho_pow(j);
      total += kSqrt2L * rho_pow(257) / (1.0L - kRhoL);  // geometric tail
      break;
    }
    case component_law::r_len:
      total = (partial(1) + (s_at_rho - partial(1))) / kSqrt2M1L;
      break;
    case component_law::l_len:
      // first atom 2*rho replaces the k=1 term rho of the raw series
      total = (2.0L * kRhoL + partial(2) + (s_at_rho - kRhoL - partial(2))) / kTwoMinusSqrt2L;
      break;
    case component_law::tilde_l:
      total = 2.0L * kRhoL + partial(2) + (s_at_rho - kRhoL - partial(2)) + kSqrt2M1L;
      break;
    case component_law::tilde_r:
      total = partial(1) + (s_at_rho - partial(1)) + kTwoMinusSqrt2L;
      break;
  }
  return std::abs(static_cast<double>(total - 1.0L));
}

double mean_n_count() {
  long double acc = 0.0L;
  for (std::int64_t j = 1; j <= 512; ++j) {
    const long double term = static_cast<long double>(j) * kSqrt2L * rho_pow(j);
    acc += term;
    if (term < 1e-24L && j > 8) break;
  }
  return static_cast<double>(acc);
}

tilde_joint_report joint_tilde_check(const schroeder_table& table) {
  tilde_joint_report rep;
  const std::int64_t grid = std::min<std::int64_t>(table.max_n(), 64);
  for (std::int64_t j = 1; j <= grid; ++j) {
    rep.l_marginal_gap =
        std::max(rep.l_marginal_gap,
                 std::abs(static_cast<double>(tilde_joint(j, kInfCoord, table)) -
                          pmf(component_law::tilde_l, j, table)));
    rep.r_marginal_gap =
        std::max(rep.r_marginal_gap,
                 std::abs(static_cast<double>(tilde_joint(kInfCoord, j, table)) -
                          pmf(component_law::tilde_r, j, table)));
  }
  rep.l_total_gap = pmf_sum_gap(component_law::tilde_l, table);
  rep.r_total_gap = pmf_sum_gap(component_law::tilde_r, table);
  rep.mass_at_inf_inf = static_cast<double>(tilde_joint(kInfCoord, kInfCoord, table));
  rep.mass_at_1_inf = static_cast<double>(tilde_joint(1, kInfCoord, table));
  const double tol = 1e-12;
  rep.ok = rep.l_marginal_gap <= tol && rep.r_marginal_gap <= tol && rep.l_total_gap <= tol &&
           rep.r_total_gap <= tol && rep.mass_at_inf_inf == 0.0 &&
           std::abs(rep.mass_at_1_inf - 2.0 * kRho) <= tol;
  return rep;
}

law_suite::law_suite(std::int64_t head_limit) {
  if (head_limit < 8) throw std::invalid_argument("law_suite: head_limit too small");
  r_.head_limit = head_limit;
  r_.first_atom_factor = 1.0;
  r_.norm = kSqrt2M1L;
  l_.head_limit = head_limit;
  l_.first_atom_factor = 2.0;
  l_.norm = kTwoMinusSqrt2L;
  r_.grow(std::min<std::int64_t>(1024, head_limit));
  l_.grow(std::min<std::int64_t>(1024, head_limit));
}

void law_suite::heavy_tail::grow(std::int64_t target) {
  target = std::min(target, head_limit);
  while (built < target) {
    const std::int64_t k = ++built;
    if (k == 1) {
      s_prev = 0;
      s_cur = 1;
    } else if (k == 2) {
      s_prev = 1;
      s_cur = 2;
    } else {
      // k s_k = 3(2k-3) s_{k-1} - (k-3) s_{k-2}; the division is always exact
      mpz_class next = 3 * (2 * k - 3) * s_cur - (k - 3) * s_prev;
      assert(mpz_divisible_ui_p(next.get_mpz_t(), static_cast<unsigned long>(k)));
      mpz_divexact_ui(next.get_mpz_t(), next.get_mpz_t(), static_cast<unsigned long>(k));
      s_prev = std::move(s_cur);
      s_cur = std::move(next);
    }
    long double term = std::exp2(log2_mpz(s_cur) + static_cast<long double>(k) * kLog2RhoL);
    if (k == 1) term *= static_cast<long double>(first_atom_factor);
    cum.push_back((cum.empty() ? 0.0L : cum.back()) + term / norm);
  }
}

double law_suite::heavy_tail::draw(rng_stream& rng) {
  const long double u = rng.next_long_double();
  while (u >= cum.back() && built < head_limit) grow(built * 2);
  if (u < cum.back()) {
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    return static_cast<double>(it - cum.begin()) + 1.0;
  }
  // Conditional tail beyond the head is k^{-3/2} up to O(1/k) corrections:
  // survival proportional to x^{-1/2}, inverted by x = (K + 1/2) / v^2.
  const double head = static_cast<double>(built);
  const double v = rng.next_open_double();
  double x = std::floor((head + 0.5) / (v * v) + 0.5);
  if (x <= head) x = head + 1.0;
  return x;
}

std::int64_t law_suite::chi(rng_stream& rng) { return rng.coin() ? 1 : 0; }

std::int64_t law_suite::n_count(rng_stream& rng) {
  if (rng.next_double() < kSqrt2 / 2) return 0;
  const double v = rng.next_open_double();
  return 1 + static_cast<std::int64_t>(std::floor(std::log(v) / static_cast<double>(kLogRhoL)));
}

double law_suite::r_len(rng_stream& rng) { return r_.draw(rng); }

double law_suite::l_len(rng_stream& rng) { return l_.draw(rng); }

double law_suite::tilde_l(rng_stream& rng) {
  if (rng.next_double() < kSqrt2 - 1.0) return std::numeric_limits<double>::infinity();
  return l_len(rng);
}

double law_suite::tilde_r(rng_stream& rng) {
  if (rng.next_double() < kTwoMinusSqrt2) return std::numeric_limits<double>::infinity();
  return r_len(rng);
}

double law_suite::sample(component_law law, rng_stream& rng) {
  switch (law) {
    case component_law::chi:
      return static_cast<double>(chi(rng));
    case component_law::n_count:
      return static_cast<double>(n_count(rng));
    case component_law::r_len:
      return r_len(rng);
    case component_law::l_len:
      return l_len(rng);
    case component_law::tilde_l:
      return tilde_l(rng);
    case component_law::tilde_r:
      return tilde_r(rng);
  }
  throw std::logic_error("law_suite::sample: unknown law");
}

void law_suite::prewarm() {
  r_.grow(r_.head_limit);
  l_.grow(l_.head_limit);
}

namespace {

// Runs the four-state kind chain to absorption. on_discard sees each raw
// discard length; returns true for a perm piece. States: 0 +F, 1 -F, 2 +I,
// 3 -I.
template <class OnDiscard>
bool mechanism_kind(law_suite& laws, rng_stream& rng, std::int64_t& arrivals,
                    OnDiscard&& on_discard) {
  int state;
  {
    const double u = rng.next_double();
    const double pf = kTwoMinusSqrt2 / 2;
    if (u < pf)
      state = 0;
    else if (u < 2 * pf)
      state = 1;
    else if (u < 2 * pf + (kSqrt2 - 1.0) / 2)
      state = 2;
    else
      state = 3;
  }
  arrivals = 0;
  for (;;) {
    switch (state) {
      case 0:
        return true;
      case 1:
        return false;
      case 2:
        state = rng.next_double() < kTwoMinusSqrt2 ? 1 : 3;
        break;
      default:  // arriving at -I costs one discard block
        ++arrivals;
        on_discard(laws.r_len(rng));
        state = rng.next_double() < kTwoMinusSqrt2 ? 0 : 2;
        break;
    }
  }
}

}  // namespace

prefix_window sample_limit_prefix(std::int64_t m, prefix_mode mode, std::int64_t cap,
                                  const sep_sampler& sampler, law_suite& laws,
                                  rng_stream& rng) {
  if (m < 1) throw std::invalid_argument("sample_limit_prefix: m must be positive");
  if (cap < m) throw std::invalid_argument("sample_limit_prefix: cap smaller than the prefix");
  prefix_window w;
  w.m = m;
  w.mode = mode;
  w.length_cap = cap;
  const auto clamp_len = [&](double x) -> std::int64_t {
    if (!(x <= static_cast<double>(cap))) {
      w.truncated = true;
      return cap;
    }
    return static_cast<std::int64_t>(x);
  };
  while (static_cast<std::int64_t>(w.coords.size()) < m) {
    limit_piece piece;
    if (mode == prefix_mode::theorem) {
      const std::int64_t blocks = laws.n_count(rng);
      for (std::int64_t i = 0; i < blocks; ++i) piece.discarded += clamp_len(laws.r_len(rng));
      piece.is_perm = laws.chi(rng) == 1;
    } else {
      std::int64_t arrivals = 0;
      piece.is_perm =
          mechanism_kind(laws, rng, arrivals, [&](double r) { piece.discarded += clamp_len(r); });
    }
    piece.len = clamp_len(laws.l_len(rng));
    w.frontier += piece.discarded;
    if (piece.is_perm) {
      piece.content = sampler.sample_block(w.frontier, piece.len, sep_class::indecomposable, rng);
      for (const std::int64_t v : piece.content->values()) w.coords.push_back(v);
      w.frontier += piece.len;
    } else {
      w.coords.insert(w.coords.end(), static_cast<std::size_t>(piece.len), kInfCoord);
    }
    w.pieces.push_back(std::move(piece));
  }
  return w;
}

cycle_outcome run_mechanism_cycle(law_suite& laws, rng_stream& rng) {
  cycle_outcome out;
  out.perm_piece =
      mechanism_kind(laws, rng, out.arrivals, [&](double r) { out.discard_sum += r; });
  return out;
}

std::vector<std::int64_t> embed_finite(const permutation& p, std::int64_t count) {
  if (p.block_start() != 1) throw std::invalid_argument("embed_finite: block must start at 1");
  if (count < 0) throw std::invalid_argument("embed_finite: negative count");
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(count));
  const auto vals = p.values();
  for (std::int64_t i = 0; i < count && i < p.size(); ++i)
    out.push_back(vals[static_cast<std::size_t>(i)]);
  for (std::int64_t v = p.size() + 1; static_cast<std::int64_t>(out.size()) < count; ++v)
    out.push_back(v);
  return out;
}

double metric_nstar(std::int64_t i, std::int64_t j) {
  if (i < 1 || j < 1) throw std::invalid_argument("metric_nstar: coordinates start at 1");
  if (i == j) return 0.0;
  if (i > j) std::swap(i, j);
  const auto pw = [](std::int64_t k) -> double {
    if (k == kInfCoord || k > 1100) return 0.0;
    return std::ldexp(1.0, static_cast<int>(1 - k));
  };
  return pw(i) - pw(j);
}

metric_bound metric_s(const prefix_window& a, const prefix_window& b) {
  const std::size_t m = std::min(a.coords.size(), b.coords.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 1100) break;  // summands below 2^-1100 cannot move a double
    acc += std::ldexp(metric_nstar(a.coords[i], b.coords[i]), -static_cast<int>(i + 1));
  }
  const double tail = m > 1100 ? 0.0 : std::ldexp(1.0, -static_cast<int>(m));
  return {acc, tail};
}

ratio_values ratio_stats(const prefix_window& w) {
  ratio_values out;
  std::int64_t appearing = 0, discarded = 0, coords = 0;
  for (const auto& p : w.pieces) {
    discarded += p.discarded;
    coords += p.len;
    if (p.is_perm) appearing += p.len;
  }
  if (appearing + discarded == 0) {
    out.undefined = true;
    out.appearing_vs_total = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.appearing_vs_total =
        static_cast<double>(appearing) / static_cast<double>(appearing + discarded);
  }
  out.integers_vs_coords =
      coords == 0 ? 0.0 : static_cast<double>(appearing) / static_cast<double>(coords);
  return out;
}

namespace {

std::int64_t bucket_of(std::int64_t v, std::int64_t value_cap) {
  return (v >= 1 && v <= value_cap) ? v - 1 : value_cap;
}

struct compare_partial {
  std::vector<std::vector<std::int64_t>> finite_hist, limit_hist;
  std::vector<std::int64_t> finite_joint, limit_joint;
  std::int64_t limit_truncated = 0;
};

double tv_half_sum(const std::vector<std::int64_t>& f, const std::vector<std::int64_t>& l,
                   double reps, double& se_out) {
  double tv = 0.0, var = 0.0;
  for (std::size_t b = 0; b < f.size(); ++b) {
    const double pf = static_cast<double>(f[b]) / reps;
    const double pl = static_cast<double>(l[b]) / reps;
    tv += std::abs(pf - pl);
    var += (pf * (1.0 - pf) + pl * (1.0 - pl)) / reps;
  }
  se_out = 0.5 * std::sqrt(var);
  return 0.5 * tv;
}

}  // namespace

tv_report compare_prefix_laws(std::int64_t n, std::int64_t m, std::int64_t value_cap,
                              std::int64_t reps, prefix_mode mode, const sep_sampler& sampler,
                              std::uint64_t seed, int threads, std::int64_t length_cap) {
  if (n < 1 || m < 1 || value_cap < 1 || reps < 1)
    throw std::invalid_argument("compare_prefix_laws: parameters must be positive");
  if (m > n) throw std::invalid_argument("compare_prefix_laws: prefix longer than n");
  if (length_cap < m)
    throw std::invalid_argument("compare_prefix_laws: length cap smaller than the prefix");
  if (n > sampler.table().max_n())
    throw std::invalid_argument("compare_prefix_laws: n beyond the table");
  if (threads < 1) threads = 1;
  threads = static_cast<int>(std::min<std::int64_t>(threads, reps));

  tv_report rep;
  rep.mode = mode;
  rep.n = n;
  rep.m = m;
  rep.value_cap = value_cap;
  rep.reps = reps;
  rep.seed = seed;
  rep.length_cap = length_cap;

  const std::int64_t buckets = value_cap + 1;
  double cells = 1.0;
  for (std::int64_t i = 0; i < m; ++i) cells *= static_cast<double>(buckets);
  rep.joint_computed = cells <= static_cast<double>(1 << 20);
  const std::int64_t joint_cells = rep.joint_computed ? static_cast<std::int64_t>(cells) : 0;

  sampler.prewarm(std::min<std::int64_t>(n, 512));
  law_suite proto;
  proto.prewarm();  // frozen heads keep stream use independent of history
  const rng_stream base(seed);

  std::vector<compare_partial> parts(static_cast<std::size_t>(threads));
  const auto run = [&](int w, compare_partial& out) {
    out.finite_hist.assign(static_cast<std::size_t>(m),
                           std::vector<std::int64_t>(static_cast<std::size_t>(buckets), 0));
    out.limit_hist = out.finite_hist;
    if (rep.joint_computed) {
      out.finite_joint.assign(static_cast<std::size_t>(joint_cells), 0);
      out.limit_joint.assign(static_cast<std::size_t>(joint_cells), 0);
    }
    law_suite laws = proto;
    const std::int64_t lo = reps * w / threads;
    const std::int64_t hi = reps * (w + 1) / threads;
    for (std::int64_t i = lo; i < hi; ++i) {
      rng_stream rf = base.substream(static_cast<std::uint64_t>(2 * i));
      rng_stream rl = base.substream(static_cast<std::uint64_t>(2 * i + 1));
      const permutation p = sampler.sample(n, sep_class::all, rf);
      const auto fin = embed_finite(p, m);
      prefix_window win = sample_limit_prefix(m, mode, length_cap, sampler, laws, rl);
      if (win.truncated) ++out.limit_truncated;
      std::int64_t fidx = 0, lidx = 0, scale = 1;
      for (std::int64_t c = 0; c < m; ++c) {
        const std::int64_t fb = bucket_of(fin[static_cast<std::size_t>(c)], value_cap);
        const std::int64_t lb = bucket_of(win.coords[static_cast<std::size_t>(c)], value_cap);
        ++out.finite_hist[static_cast<std::size_t>(c)][static_cast<std::size_t>(fb)];
        ++out.limit_hist[static_cast<std::size_t>(c)][static_cast<std::size_t>(lb)];
        fidx += fb * scale;
        lidx += lb * scale;
        scale *= buckets;
      }
      if (rep.joint_computed) {
        ++out.finite_joint[static_cast<std::size_t>(fidx)];
        ++out.limit_joint[static_cast<std::size_t>(lidx)];
      }
    }
  };

  if (threads == 1) {
    run(0, parts[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(run, w, std::ref(parts[w]));
    for (auto& t : pool) t.join();
  }

  rep.finite_hist.assign(static_cast<std::size_t>(m),
                         std::vector<std::int64_t>(static_cast<std::size_t>(buckets), 0));
  rep.limit_hist = rep.finite_hist;
  std::vector<std::int64_t> fj(static_cast<std::size_t>(joint_cells), 0), lj = fj;
  for (const auto& part : parts) {
    rep.limit_truncated += part.limit_truncated;
    for (std::int64_t c = 0; c < m; ++c)
      for (std::int64_t b = 0; b < buckets; ++b) {
        rep.finite_hist[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)] +=
            part.finite_hist[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)];
        rep.limit_hist[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)] +=
            part.limit_hist[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)];
      }
    for (std::int64_t j = 0; j < joint_cells; ++j) {
      fj[static_cast<std::size_t>(j)] += part.finite_joint[static_cast<std::size_t>(j)];
      lj[static_cast<std::size_t>(j)] += part.limit_joint[static_cast<std::size_t>(j)];
    }
  }

  rep.coord_tv.resize(static_cast<std::size_t>(m));
  rep.coord_tv_se.resize(static_cast<std::size_t>(m));
  for (std::int64_t c = 0; c < m; ++c)
    rep.coord_tv[static_cast<std::size_t>(c)] =
        tv_half_sum(rep.finite_hist[static_cast<std::size_t>(c)],
                    rep.limit_hist[static_cast<std::size_t>(c)], static_cast<double>(reps),
                    rep.coord_tv_se[static_cast<std::size_t>(c)]);
  if (rep.joint_computed)
    rep.joint_tv = tv_half_sum(fj, lj, static_cast<double>(reps), rep.joint_tv_se);

  const std::int64_t want = 50 * (rep.joint_computed ? joint_cells : buckets);
  if (reps < want)
    rep.warning = "reps are thin for this bucket resolution; TV estimates are upward biased";
  return rep;
}

std::string tv_report_json(const tv_report& r) {
  nlohmann::json j;
  j["mode"] = r.mode == prefix_mode::theorem ? "theorem" : "mechanism";
  j["n"] = r.n;
  j["m"] = r.m;
  j["value_cap"] = r.value_cap;
  j["reps"] = r.reps;
  j["seed"] = r.seed;
  j["length_cap"] = r.length_cap;
  j["finite_hist"] = r.finite_hist;
  j["limit_hist"] = r.limit_hist;
  j["coord_tv"] = r.coord_tv;
  j["coord_tv_se"] = r.coord_tv_se;
  j["joint_computed"] = r.joint_computed;
  if (r.joint_computed) {
    j["joint_tv"] = r.joint_tv;
    j["joint_tv_se"] = r.joint_tv_se;
  }
  j["limit_truncated"] = r.limit_truncated;
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j.dump(2);
}

cycle_report mechanism_cycle_stats(std::int64_t cycles, std::uint64_t seed, int threads) {
  if (cycles < 1) throw std::invalid_argument("mechanism_cycle_stats: cycles must be positive");
  if (threads < 1) threads = 1;
  threads = static_cast<int>(std::min<std::int64_t>(threads, cycles));

  cycle_report rep;
  rep.cycles = cycles;
  rep.seed = seed;

  law_suite proto;
  proto.prewarm();
  const rng_stream base(seed);

  struct partial {
    std::vector<std::int64_t> hist;
    std::int64_t perm = 0, inf = 0;
  };
  std::vector<partial> parts(static_cast<std::size_t>(threads));
  const auto run = [&](int w, partial& out) {
    law_suite laws = proto;
    const std::int64_t lo = cycles * w / threads;
    const std::int64_t hi = cycles * (w + 1) / threads;
    for (std::int64_t i = lo; i < hi; ++i) {
      rng_stream rng = base.substream(static_cast<std::uint64_t>(i));
      const cycle_outcome c = run_mechanism_cycle(laws, rng);
      if (static_cast<std::size_t>(c.arrivals) >= out.hist.size())
        out.hist.resize(static_cast<std::size_t>(c.arrivals) + 1, 0);
      ++out.hist[static_cast<std::size_t>(c.arrivals)];
      ++(c.perm_piece ? out.perm : out.inf);
    }
  };
  if (threads == 1) {
    run(0, parts[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(run, w, std::ref(parts[w]));
    for (auto& t : pool) t.join();
  }
  for (const auto& part : parts) {
    rep.perm_pieces += part.perm;
    rep.inf_pieces += part.inf;
    if (part.hist.size() > rep.arrival_hist.size()) rep.arrival_hist.resize(part.hist.size(), 0);
    for (std::size_t k = 0; k < part.hist.size(); ++k) rep.arrival_hist[k] += part.hist[k];
  }
  return rep;
}

}  // namespace seplim
