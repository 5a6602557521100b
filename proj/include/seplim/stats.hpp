#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace seplim {

// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a);
// series for x < a+1, continued fraction otherwise.
double gamma_q(double a, double x);

// P(chi2_dof > stat).
double chisq_pvalue(double stat, double dof);

// Pearson statistic against expected counts (not probabilities).
double chisq_stat(std::span<const std::int64_t> observed, std::span<const double> expected);

// Kolmogorov-Smirnov distances. Inputs are copied and sorted internally.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Asymptotic critical values at level alpha: reject when D exceeds them.
// The one-sample constant is sqrt(-ln(alpha/2)/2), 1.62762 at alpha = 0.01.
double ks_critical_one_sample(std::int64_t n, double alpha);
double ks_critical_two_sample(std::int64_t n, std::int64_t m, double alpha);

// CDF of the arcsine law on [0,1]: (2/pi) asin(sqrt(x)).
double arcsine_cdf(double x);

}  // namespace seplim
