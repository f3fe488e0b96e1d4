#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "solwalk/bigint.hpp"
#include "solwalk/detail/series_sums.hpp"
#include "solwalk/distribution.hpp"
#include "solwalk/errors.hpp"
#include "solwalk/group.hpp"
#include "solwalk/partition.hpp"
#include "solwalk/rng.hpp"
#include "solwalk/solenoid.hpp"
#include "solwalk/stats.hpp"

namespace solwalk {

/// Constants of the proof-chain inequalities, derived with explicit values
/// (the theorems only assert their existence). Recorded in bound-check
/// reports so no constant can be quietly retuned.
struct ProofConstants {
  double C1;  // upper bound: 1 - mu-hat <= C1 (alpha^2 + Q_n) on A_n
  double C3;  // majorant exponent: 2 q_0 / pi^2
  double C4;  // majorant exponent: 2
  double C5;  // Gaussian integral factor: a_1 sqrt(pi / C3)
  std::string derivation;
};

inline ProofConstants derive_constants(const GroupSequence& seq,
                                       const StepDistribution& dist) {
  ProofConstants c{};
  const double a1 = static_cast<double>(seq.a(1));
  // S = sum_{j>=0} (a_2...a_{j+1})^{-2} = a_1^2 sum_{j>=1} (a_1...a_j)^{-2}
  const double S = a1 * a1 * detail::tail_sum_prod_neg_pow(seq, 2.0, 1);
  c.C1 = std::max(kPi * kPi * S / (a1 * a1), 2.0);
  const double q0 = dist.weight(0);
  c.C3 = 2.0 * q0 / (kPi * kPi);
  c.C4 = 2.0;
  c.C5 = a1 * std::sqrt(kPi / c.C3);
  std::ostringstream out;
  out << "C1 = max(pi^2 S / a_1^2, 2) with S = sum_j (a_2...a_{j+1})^-2 = " << S
      << " (1 - cos t <= t^2/2 applied to the first n weights, 2 Q_n for the tail); "
      << "C3 = 2 q_0 / pi^2 (keep only the q_0 term, 1 - cos t >= 2 t^2/pi^2, 1 - x <= e^-x); "
      << "C4 = 2 (1 - cos b_{n+1} >= 2 / a_{n+1}^2 on the off-center intervals); "
      << "C5 = a_1 sqrt(pi / C3) (Gaussian integral over the rescaled coordinate)";
  c.derivation = out.str();
  return c;
}

/// Explicit upper bound K / sqrt(a) + e^-a for sum_{k>=1} e^{-ak} / sqrt(k):
/// the first term dominates, the rest is below the integral of e^{-ax}/sqrt(x)
/// from 1, itself below Gamma(1/2) / sqrt(a).
inline double geometric_series_tail_bound(double a) {
  if (!(a > 0.0)) throw std::domain_error("geometric_series_tail_bound: a must be positive");
  return std::sqrt(kPi / a) + std::exp(-a);
}

/// Monte Carlo estimate of the integral of 1/(1 - mu-hat) over one cell E_n.
struct CellEstimate {
  int cell = 0;
  BigRational measure;
  double estimate = 0.0;
  double stderr_ = 0.0;
  double systematic_lo = 0.0;  // cell integral with the truncation band against us
  double systematic_hi = 0.0;
  std::int64_t samples = 0;
  std::int64_t unstable_samples = 0;  // 1 - value - bound <= 0: depth too shallow
};

namespace detail {

struct CellAccumulator {
  RunningStat f, f_lo, f_hi;
  std::int64_t unstable = 0;

  void add_point(const StepDistribution& dist, const SolenoidPoint& y) {
    const CharValue cv = char_fn(dist, y);
    const double denom = 1.0 - cv.value;
    const double denom_hi = denom - cv.truncation_error_bound;
    if (denom_hi <= 0.0) {
      ++unstable;
      return;
    }
    f.add(1.0 / denom);
    f_hi.add(1.0 / denom_hi);
    f_lo.add(1.0 / (denom + cv.truncation_error_bound));
  }

  void merge(const CellAccumulator& other) {
    f.merge(other.f);
    f_lo.merge(other.f_lo);
    f_hi.merge(other.f_hi);
    unstable += other.unstable;
  }
};

inline CellEstimate finish_cell(const GroupSequence& seq, int n,
                                const CellAccumulator& acc, std::int64_t samples) {
  CellEstimate est;
  est.cell = n;
  est.measure = cell_measure(seq, n);
  est.samples = samples;
  est.unstable_samples = acc.unstable;
  const double m = to_double(est.measure);
  est.estimate = m * acc.f.mean();
  est.stderr_ = m * acc.f.stderr_of_mean();
  est.systematic_lo = m * acc.f_lo.mean();
  est.systematic_hi = m * acc.f_hi.mean();
  return est;
}

}  // namespace detail

/// Single-stream per-cell estimator. Throws depth_error when the truncation
/// band reaches the integrand's singularity (increase the depth).
inline CellEstimate estimate_cell_integral(const GroupSequence& seq,
                                           const StepDistribution& dist, int n,
                                           std::int64_t samples, int depth,
                                           RngStream& rng) {
  if (depth < n + 2) throw contract_error("estimate_cell_integral: depth must be >= n+2");
  detail::CellAccumulator acc;
  for (std::int64_t i = 0; i < samples; ++i)
    acc.add_point(dist, sample_in_cell(seq, n, depth, rng));
  if (acc.unstable > 0)
    throw depth_error("estimate_cell_integral: cell " + std::to_string(n) +
                      " unstable at depth " + std::to_string(depth) +
                      " (truncation band reaches the singularity); increase depth");
  return detail::finish_cell(seq, n, acc, samples);
}

/// Deterministic parallel variant: worker w draws its fixed slice from the
/// stream seeded base_seed + w; accumulators merge in worker order.
inline CellEstimate estimate_cell_integral_parallel(const GroupSequence& seq,
                                                    const StepDistribution& dist, int n,
                                                    std::int64_t samples, int depth,
                                                    std::uint64_t base_seed, int workers) {
  if (depth < n + 2) throw contract_error("estimate_cell_integral: depth must be >= n+2");
  workers = std::max(1, workers);
  std::vector<detail::CellAccumulator> parts(static_cast<std::size_t>(workers));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = samples * w / workers;
    const std::int64_t hi = samples * (w + 1) / workers;
    threads.emplace_back([&, w, lo, hi]() {
      RngStream rng = RngStream::worker_stream(base_seed, static_cast<std::uint64_t>(w));
      for (std::int64_t i = lo; i < hi; ++i)
        parts[static_cast<std::size_t>(w)].add_point(dist,
                                                     sample_in_cell(seq, n, depth, rng));
    });
  }
  for (auto& t : threads) t.join();
  detail::CellAccumulator acc;
  for (const auto& part : parts) acc.merge(part);
  if (acc.unstable > 0)
    throw depth_error("estimate_cell_integral: cell " + std::to_string(n) +
                      " unstable at depth " + std::to_string(depth) + "; increase depth");
  return detail::finish_cell(seq, n, acc, samples);
}

/// Stratified estimate over cells 0..n_cells plus the explicit residual
/// remainder, with the divergence growth diagnostic.
struct IntegralEstimate {
  std::vector<CellEstimate> cells;
  double partial_total = 0.0;
  BigRational residual_measure;  // never sampled: it contains the singular point 0
  int depth = 0;
  bool diverging = false;
  double growth_diagnostic = 0.0;  // min increment over trailing window / mean increment
  std::string growth_note;
};

struct IntegralOptions {
  double diverging_threshold = 0.1;
};

inline IntegralEstimate estimate_total(const GroupSequence& seq,
                                       const StepDistribution& dist, int n_cells,
                                       std::int64_t samples_per_cell, int depth,
                                       std::uint64_t base_seed, int workers = 1,
                                       const IntegralOptions& options = {}) {
  if (n_cells < 0) throw contract_error("estimate_total: n_cells must be >= 0");
  if (depth < n_cells + 2) throw contract_error("estimate_total: depth must be >= n_cells+2");
  workers = std::max(1, workers);
  IntegralEstimate total;
  total.depth = depth;
  for (int n = 0; n <= n_cells; ++n) {
    // per-cell seed block keeps worker streams disjoint across cells
    const std::uint64_t cell_seed =
        base_seed + static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(workers);
    total.cells.push_back(estimate_cell_integral_parallel(
        seq, dist, n, samples_per_cell, depth, cell_seed, workers));
    total.partial_total += total.cells.back().estimate;
  }
  total.residual_measure = BigRational(1, seq.product(n_cells + 1));

  const int count = n_cells + 1;
  const int window = std::max(4, count / 2);
  double min_increment = std::numeric_limits<double>::infinity();
  for (int n = std::max(0, count - window); n < count; ++n)
    min_increment = std::min(min_increment, total.cells[static_cast<std::size_t>(n)].estimate);
  const double mean_increment = total.partial_total / static_cast<double>(count);
  total.growth_diagnostic = mean_increment > 0.0 ? min_increment / mean_increment : 0.0;
  total.diverging = total.growth_diagnostic >= options.diverging_threshold;
  std::ostringstream note;
  note << "heuristic: per-cell increments over the trailing " << std::min(window, count)
       << " cells stay at " << total.growth_diagnostic
       << " of the mean increment (threshold " << options.diverging_threshold
       << "); partial sums cannot prove divergence, the series criteria are "
          "authoritative";
  total.growth_note = note.str();
  return total;
}

/// Restricted estimate over A_n (the alpha-shrunk cell), for the
/// recurrence-side chain check.
inline std::pair<double, double> estimate_alpha_cell_integral(
    const GroupSequence& seq, const StepDistribution& dist, int n, double alpha,
    std::int64_t samples, int depth, RngStream& rng) {
  RunningStat f;
  std::int64_t unstable = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const SolenoidPoint y = sample_in_cell(seq, n, depth, rng);
    if (!alpha_membership(y, seq, n, alpha)) continue;
    const CharValue cv = char_fn(dist, y);
    const double denom_hi = 1.0 - cv.value - cv.truncation_error_bound;
    if (denom_hi <= 0.0) {
      ++unstable;
      continue;
    }
    f.add(1.0 / (1.0 - cv.value));
  }
  if (unstable > 0)
    throw depth_error("estimate_alpha_cell_integral: unstable at this depth");
  const double measure = alpha * to_double(cell_measure(seq, n));
  return {measure * f.mean(), measure * f.stderr_of_mean()};
}

/// Lower bound m(A_n) / (C1 (alpha^2 + Q_n)) on the A_n integral.
inline double theorem1_cell_lower_bound(const GroupSequence& seq,
                                        const StepDistribution& dist, int n,
                                        double alpha) {
  const auto c = derive_constants(seq, dist);
  const double m_an = alpha * to_double(cell_measure(seq, n));
  return m_an / (c.C1 * (alpha * alpha + dist.tail(n)));
}

/// Upper bound m(E_n) + (C5 / (a_1...a_n)) K(C4 q_n / a_{n+1}^2) on the E_n
/// integral, with K the geometric_series_tail_bound.
inline double theorem2_cell_upper_bound(const GroupSequence& seq,
                                        const StepDistribution& dist, int n) {
  const auto c = derive_constants(seq, dist);
  const double a_next = static_cast<double>(seq.a(n + 1));
  const double exponent = c.C4 * dist.weight(n) / (a_next * a_next);
  return to_double(cell_measure(seq, n)) +
         c.C5 / to_double(seq.product(n)) * geometric_series_tail_bound(exponent);
}

/// Verification report for a sampled or gridded inequality.
struct BoundCheckReport {
  std::string inequality_id;
  bool applicable = false;
  std::int64_t samples = 0;
  std::int64_t violations = 0;
  double worst_margin = 0.0;  // min over samples of (allowed - observed); >= 0 passes
  std::string notes;
};

/// 2 t^2 / pi^2 <= 1 - cos t <= t^2 / 2 on [0, pi/2]. 1 - cos t is evaluated
/// as 2 sin^2(t/2); the naive form loses the low bits that the upper bound's
/// t^4/24 margin lives in near 0.
inline BoundCheckReport bound_check_cosine(int grid_size) {
  if (grid_size < 2) throw contract_error("bound_check_cosine: grid_size must be >= 2");
  BoundCheckReport report;
  report.inequality_id = "cosine_two_sided";
  report.applicable = true;
  report.samples = grid_size;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_size; ++i) {
    const double t = (kPi / 2.0) * static_cast<double>(i) / static_cast<double>(grid_size - 1);
    const double s = std::sin(t / 2.0);
    const double one_minus_cos = 2.0 * s * s;
    const double lower = 2.0 * t * t / (kPi * kPi);
    const double upper = t * t / 2.0;
    const double margin = std::min(one_minus_cos - lower, upper - one_minus_cos);
    if (margin < report.worst_margin) report.worst_margin = margin;
    if (one_minus_cos < lower || one_minus_cos > upper) ++report.violations;
  }
  report.notes = "grid over [0, pi/2]; equality at t = 0 is allowed";
  return report;
}

/// Majorant check on E_n: mu-hat(y) <= exp(-C3 t~^2 - C4 q_n / a_{n+1}^2)
/// with t~ = (a_2...a_n) b_n, truncation band applied on the left.
inline BoundCheckReport bound_check_majorant(const GroupSequence& seq,
                                             const StepDistribution& dist, int n,
                                             std::int64_t samples, int depth,
                                             RngStream& rng) {
  BoundCheckReport report;
  report.inequality_id = "exponential_majorant_E" + std::to_string(n);
  if (n < 1) throw contract_error("bound_check_majorant: requires n >= 1");
  if (depth > dist.max_index() + 1) {
    report.notes = "not applicable: some q_j vanish within depth";
    return report;
  }
  for (int j = 0; j < depth; ++j) {
    if (!(dist.weight(j) > 0.0)) {
      report.notes = "not applicable: q_" + std::to_string(j) + " = 0 within depth";
      return report;
    }
  }
  const auto c = derive_constants(seq, dist);
  report.applicable = true;
  report.samples = samples;
  report.worst_margin = std::numeric_limits<double>::infinity();
  const double rescale = to_double(seq.product(n) / BigInt(seq.a(1)));  // a_2...a_n
  const double a_next = static_cast<double>(seq.a(n + 1));
  const double tail_term = c.C4 * dist.weight(n) / (a_next * a_next);
  for (std::int64_t i = 0; i < samples; ++i) {
    const SolenoidPoint y = sample_in_cell(seq, n, depth, rng);
    const CharValue cv = char_fn(dist, y);
    const double t_tilde = rescale * y.angle(n);
    const double rhs = std::exp(-c.C3 * t_tilde * t_tilde - tail_term);
    const double lhs = cv.value - cv.truncation_error_bound;
    const double margin = rhs - lhs;
    if (margin < report.worst_margin) report.worst_margin = margin;
    if (margin < 0.0) ++report.violations;
  }
  report.notes = c.derivation;
  return report;
}

}  // namespace solwalk
