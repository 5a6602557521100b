#include "seplim/schroeder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "seplim/constants.hpp"

namespace seplim {

namespace {

void check_convolution(const std::vector<mpz_class>& v, std::int64_t n) {
  // v[i] = s_{i+1}; verifies s_n = 2 s_{n-1} + sum_{j=2}^{n-1} s_j s_{n-j}.
  mpz_class acc = 2 * v[n - 2];
  for (std::int64_t j = 2; j <= n - 1; ++j) acc += v[j - 1] * v[n - j - 1];
  if (acc != v[n - 1]) {
    throw std::runtime_error("schroeder table fails convolution identity at n=" +
                             std::to_string(n));
  }
}

}  // namespace

schroeder_table schroeder_table::compute(std::int64_t n_max) {
  if (n_max < 1) throw std::invalid_argument("schroeder_table: n_max must be >= 1");
  schroeder_table t;
  t.values_.reserve(static_cast<std::size_t>(n_max));
  t.values_.emplace_back(1);
  if (n_max >= 2) t.values_.emplace_back(2);
  mpz_class num;
  for (std::int64_t n = 2; n < n_max; ++n) {
    // (n+1) s_{n+1} = 3(2n-1) s_n - (n-2) s_{n-1}
    num = 3 * (2 * n - 1) * t.values_[n - 1] - (n - 2) * t.values_[n - 2];
    if (!mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(n + 1))) {
      throw std::runtime_error("schroeder recurrence not divisible at n=" + std::to_string(n));
    }
    mpz_class next;
    mpz_divexact_ui(next.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(n + 1));
    t.values_.push_back(std::move(next));
  }
  for (std::int64_t n = 3; n <= std::min<std::int64_t>(n_max, 64); ++n) {
    check_convolution(t.values_, n);
  }
  return t;
}

const mpz_class& schroeder_table::s(std::int64_t n) const {
  if (n < 1 || n > max_n()) {
    throw std::invalid_argument("schroeder_table: index " + std::to_string(n) +
                                " outside [1, " + std::to_string(max_n()) + "]");
  }
  return values_[static_cast<std::size_t>(n - 1)];
}

double schroeder_table::log_s(std::int64_t n) const {
  signed long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, s(n).get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::numbers::ln2;
}

void schroeder_table::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open table cache for writing: " + path);
  out << "sep-limit schroeder v1 " << max_n() << "\n";
  for (const auto& v : values_) out << v.get_str() << "\n";
  if (!out) throw std::runtime_error("write failed for table cache: " + path);
}

schroeder_table schroeder_table::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table cache: " + path);
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string tag1, tag2, tag3;
  std::int64_t n_max = 0;
  hs >> tag1 >> tag2 >> tag3 >> n_max;
  if (tag1 != "sep-limit" || tag2 != "schroeder" || tag3 != "v1" || n_max < 1 || !hs) {
    throw std::runtime_error("bad table cache header: " + header);
  }
  schroeder_table t;
  t.values_.reserve(static_cast<std::size_t>(n_max));
  std::string line;
  for (std::int64_t i = 0; i < n_max; ++i) {
    if (!std::getline(in, line) || line.empty()) {
      throw std::runtime_error("truncated table cache: " + path);
    }
    try {
      t.values_.emplace_back(line);
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("malformed integer in table cache at line " +
                               std::to_string(i + 2));
    }
  }
  if (t.values_[0] != 1 || (n_max >= 2 && t.values_[1] != 2)) {
    throw std::runtime_error("table cache fails seed values");
  }
  if (n_max >= 3) {
    // Deterministic spot checks: cheap insurance against truncation/corruption.
    std::mt19937_64 pick(0x5eb1a7ab1eULL);
    for (int k = 0; k < 16; ++k) {
      std::int64_t n = 3 + static_cast<std::int64_t>(pick() % static_cast<std::uint64_t>(n_max - 2));
      check_convolution(t.values_, n);
    }
  }
  return t;
}

std::complex<double> gen_func_eval(std::complex<double> z) {
  if (std::abs(z) > kRho * (1.0 + 1e-12) + 1e-300) {
    throw std::domain_error("gen_func_eval: |z| exceeds 3 - 2*sqrt(2)");
  }
  std::complex<double> w = (z - kRho) * (z - kRhoInv);
  if (w.real() < -1e-12) {
    // Cannot happen on the closed disk; a negative real radicand would put
    // sqrt on the wrong branch, so fail loudly instead of returning garbage.
    throw std::domain_error("gen_func_eval: radicand left the right half plane");
  }
  return 0.5 * (1.0 - z - std::sqrt(w));
}

double asymptotic_log_estimate(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("asymptotic_log_estimate: n must be >= 1");
  // Amplitude from the square-root singularity of the generating function:
  // near rho the radicand (z - rho)(z - 1/rho) factors as
  // (rho - z) * 4*sqrt(2), so the singular part is
  //   -2^{1/4} * sqrt(rho) * (1 - z/rho)^{1/2},
  // whose n-th coefficient gives s_n ~ 2^{1/4}/(2*sqrt(pi*n^3)) * rho^{-n+1/2}.
  // The exact-table ratio against this converges to 1 at rate O(1/n);
  // without the 2^{1/4} the ratio flattens at 1.1892 instead.
  double nn = static_cast<double>(n);
  return 0.25 * std::numbers::ln2 - std::numbers::ln2 -
         0.5 * (std::log(std::numbers::pi) + 3.0 * std::log(nn)) -
         (nn - 0.5) * std::log(kRho);
}

double asymptotic_estimate(std::int64_t n) { return std::exp(asymptotic_log_estimate(n)); }

double asymptotic_ratio(const schroeder_table& table, std::int64_t n) {
  return std::exp(table.log_s(n) - asymptotic_log_estimate(n));
}

block_law::block_law(const schroeder_table& table, std::int64_t n) : n_(n) {
  if (n < 2) throw std::invalid_argument("block_law: n must be >= 2");
  if (n > table.max_n()) throw std::invalid_argument("block_law: table does not cover n");
  total_ = table.s(n);
  cum_.reserve(static_cast<std::size_t>(n - 1));
  mpz_class acc = 2 * table.s(n - 1);
  cum_.push_back(acc);
  for (std::int64_t j = 2; j <= n - 1; ++j) {
    acc += table.s(j) * table.s(n - j);
    cum_.push_back(acc);
  }
  if (cum_.back() != total_) throw std::logic_error("block_law: weights do not sum to s_n");
}

mpq_class block_law::weight(std::int64_t j) const {
  if (j < 1 || j > n_ - 1) throw std::invalid_argument("block_law: j outside [1, n-1]");
  mpz_class numer = cum_[static_cast<std::size_t>(j - 1)];
  if (j >= 2) numer -= cum_[static_cast<std::size_t>(j - 2)];
  mpq_class q(numer, total_);
  q.canonicalize();
  return q;
}

mpq_class block_law::complement_weight(std::int64_t k) const { return weight(n_ - k); }

const mpz_class& block_law::cumulative(std::int64_t j) const {
  if (j < 1 || j > n_ - 1) throw std::invalid_argument("block_law: j outside [1, n-1]");
  return cum_[static_cast<std::size_t>(j - 1)];
}

std::int64_t block_law::sample(rng_stream& rng) const {
  mpz_class u = rng.below(total_);
  auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  return static_cast<std::int64_t>(it - cum_.begin()) + 1;
}

}  // namespace seplim
