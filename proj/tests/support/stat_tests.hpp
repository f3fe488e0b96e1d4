#pragma once

// Test-side statistical machinery, independent of the library's own
// accumulators: one-sample Kolmogorov-Smirnov against a uniform law,
// chi-square goodness of fit and two-sample homogeneity.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace testsupport {

/// KS statistic of a sample against the uniform law on [lo, hi).
inline double ks_uniform_statistic(std::vector<double> sample, double lo, double hi) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double cdf = (sample[i] - lo) / (hi - lo);
    const double step_hi = static_cast<double>(i + 1) / n;
    const double step_lo = static_cast<double>(i) / n;
    d = std::max({d, std::fabs(cdf - step_hi), std::fabs(cdf - step_lo)});
  }
  return d;
}

/// Asymptotic KS critical value at significance alpha.
inline double ks_critical_value(std::size_t n, double alpha) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

/// Chi-square GOF: counts vs expected counts; returns the p-value threshold
/// comparison (true = consistent at the given significance).
inline bool chi_square_gof_passes(const std::vector<double>& observed,
                                  const std::vector<double>& expected, double alpha) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw std::invalid_argument("chi_square_gof: bad bins");
  double stat = 0.0;
  std::size_t dof = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) continue;
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
    ++dof;
  }
  if (dof < 2) throw std::invalid_argument("chi_square_gof: too few usable bins");
  boost::math::chi_squared dist(static_cast<double>(dof - 1));
  return stat <= boost::math::quantile(dist, 1.0 - alpha);
}

/// Two-sample chi-square homogeneity test over shared bins.
inline bool chi_square_two_sample_passes(const std::vector<double>& counts_a,
                                         const std::vector<double>& counts_b,
                                         double alpha) {
  if (counts_a.size() != counts_b.size() || counts_a.size() < 2)
    throw std::invalid_argument("chi_square_two_sample: bad bins");
  double na = 0.0, nb = 0.0;
  for (double c : counts_a) na += c;
  for (double c : counts_b) nb += c;
  const double k1 = std::sqrt(nb / na), k2 = std::sqrt(na / nb);
  double stat = 0.0;
  std::size_t dof = 0;
  for (std::size_t i = 0; i < counts_a.size(); ++i) {
    const double total = counts_a[i] + counts_b[i];
    if (total <= 0.0) continue;
    const double d = k1 * counts_a[i] - k2 * counts_b[i];
    stat += d * d / total;
    ++dof;
  }
  if (dof < 2) throw std::invalid_argument("chi_square_two_sample: too few usable bins");
  boost::math::chi_squared dist(static_cast<double>(dof - 1));
  return stat <= boost::math::quantile(dist, 1.0 - alpha);
}

}  // namespace testsupport
