#pragma once

#include <cmath>
#include <cstdint>

namespace solwalk {

/// Welford accumulator for Monte Carlo means and standard errors.
class RunningStat {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  void merge(const RunningStat& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
      *this = other;
      return;
    }
    const double nd = static_cast<double>(n_), md = static_cast<double>(other.n_);
    const double delta = other.mean_ - mean_;
    mean_ += delta * md / (nd + md);
    m2_ += other.m2_ + delta * delta * nd * md / (nd + md);
    n_ += other.n_;
  }

  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }
  double stderr_of_mean() const {
    return n_ > 0 ? stddev() / std::sqrt(static_cast<double>(n_)) : 0.0;
  }

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Half-width of the central 3-sigma band for a binomial proportion.
inline double binomial_3sigma(double p_hat, std::int64_t n) {
  if (n <= 0) return 0.0;
  return 3.0 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

}  // namespace solwalk
