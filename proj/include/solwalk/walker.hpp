#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "solwalk/distribution.hpp"
#include "solwalk/errors.hpp"
#include "solwalk/group.hpp"
#include "solwalk/rng.hpp"
#include "solwalk/stats.hpp"

namespace solwalk {

inline constexpr const char* kFiniteHorizonCaveat =
    "finite-horizon simulation cannot decide recurrence; walk statistics are "
    "comparative evidence only, the series criteria are authoritative";

namespace detail {

/// num *= a_{from} ... a_{to}, accumulating in machine words between big
/// multiplies.
inline void multiply_range(BigInt& num, const GroupSequence& seq, int from, int to) {
  std::int64_t chunk = 1;
  for (int m = from; m <= to; ++m) {
    const std::int64_t a = seq.a(m);
    if (chunk > std::numeric_limits<std::int64_t>::max() / a) {
      num *= chunk;
      chunk = a;
    } else {
      chunk *= a;
    }
  }
  if (chunk != 1) num *= chunk;
}

/// In-place walk state: the current position as numerator/level, kept in
/// canonical form after every step so numerators track the walk's actual
/// range instead of growing with the step count.
struct WalkState {
  BigInt num = 0;
  int level = 0;

  void step(const GroupSequence& seq, int j, int sign) {
    if (level < j) {
      multiply_range(num, seq, level + 1, j);
      level = j;
      num += sign;
    } else {
      BigInt lifted(sign);
      multiply_range(lifted, seq, j + 1, level);
      num += lifted;
    }
    while (level > 0 && num % seq.a(level) == 0) {
      num /= seq.a(level);
      --level;
    }
  }

  bool is_zero() const { return num == 0; }
};

}  // namespace detail

/// One trajectory S_1, ..., S_T with exact zero detection. A sampled index
/// beyond depth_cap is resampled and counted; the count must stay negligible
/// for the run to be a faithful simulation of the untruncated law.
struct WalkSummary {
  std::int64_t visits_to_zero = 0;
  std::int64_t last_return_time = 0;  // 0 = never returned
  RationalElement final_position;
  std::int64_t truncated_steps = 0;
};

inline WalkSummary run_walk(const GroupSequence& seq, const StepDistribution& dist,
                            std::int64_t horizon, RngStream& rng) {
  if (horizon < 1) throw contract_error("run_walk: horizon must be >= 1");
  WalkSummary summary;
  detail::WalkState state;
  const int cap = seq.depth_cap();
  for (std::int64_t t = 1; t <= horizon; ++t) {
    auto [j, sign] = dist.sample_step(rng);
    while (j > cap) {
      ++summary.truncated_steps;
      std::tie(j, sign) = dist.sample_step(rng);
    }
    state.step(seq, j, sign);
    if (state.is_zero()) {
      ++summary.visits_to_zero;
      summary.last_return_time = t;
    }
  }
  summary.final_position = RationalElement(state.num, state.level);
  return summary;
}

namespace detail {

struct TrialRecord {
  std::vector<std::int64_t> visits_at;       // cumulative visits at each checkpoint
  std::vector<std::int64_t> last_return_at;  // last return time by each checkpoint
  std::int64_t last_return_time = 0;
  std::int64_t truncated_steps = 0;
};

inline TrialRecord run_trial(const GroupSequence& seq, const StepDistribution& dist,
                             const std::vector<std::int64_t>& horizons, RngStream& rng) {
  TrialRecord record;
  record.visits_at.resize(horizons.size(), 0);
  record.last_return_at.resize(horizons.size(), 0);
  WalkState state;
  const int cap = seq.depth_cap();
  std::int64_t visits = 0;
  std::int64_t last_return = 0;
  std::size_t h = 0;
  const std::int64_t t_max = horizons.back();
  for (std::int64_t t = 1; t <= t_max; ++t) {
    auto [j, sign] = dist.sample_step(rng);
    while (j > cap) {
      ++record.truncated_steps;
      std::tie(j, sign) = dist.sample_step(rng);
    }
    state.step(seq, j, sign);
    if (state.is_zero()) {
      ++visits;
      last_return = t;
    }
    while (h < horizons.size() && horizons[h] == t) {
      record.visits_at[h] = visits;
      record.last_return_at[h] = last_return;
      ++h;
    }
  }
  record.last_return_time = last_return;
  return record;
}

/// Trials split into fixed contiguous blocks per worker, one stream per
/// worker (base_seed + worker); records land by trial index, so aggregation
/// is identical for a fixed (seed, workers) pair.
inline std::vector<TrialRecord> run_trials(const GroupSequence& seq,
                                           const StepDistribution& dist,
                                           std::int64_t trials,
                                           std::vector<std::int64_t> horizons,
                                           std::uint64_t base_seed, int workers) {
  if (trials < 1) throw contract_error("run_trials: trials must be >= 1");
  if (horizons.empty()) throw contract_error("run_trials: need at least one horizon");
  std::sort(horizons.begin(), horizons.end());
  if (horizons.front() < 1) throw contract_error("run_trials: horizons must be >= 1");
  workers = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(workers, trials)));
  std::vector<TrialRecord> records(static_cast<std::size_t>(trials));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = trials * w / workers;
    const std::int64_t hi = trials * (w + 1) / workers;
    threads.emplace_back([&, w, lo, hi]() {
      RngStream rng = RngStream::worker_stream(base_seed, static_cast<std::uint64_t>(w));
      for (std::int64_t i = lo; i < hi; ++i)
        records[static_cast<std::size_t>(i)] = run_trial(seq, dist, horizons, rng);
    });
  }
  for (auto& t : threads) t.join();
  return records;
}

}  // namespace detail

/// Aggregated return statistics at a single horizon.
struct WalkStats {
  std::int64_t trials = 0;
  std::int64_t horizon = 0;
  std::vector<std::int64_t> visits_per_trial;
  double returned_fraction = 0.0;
  double returned_band3 = 0.0;  // 3-sigma binomial half width
  double mean_visits = 0.0;
  double mean_band3 = 0.0;  // 3-sigma half width from the sample variance
  std::map<std::int64_t, std::int64_t> last_return_histogram;  // key 0 = never
  std::int64_t truncated_steps = 0;
  std::int64_t total_steps = 0;

  bool operator==(const WalkStats&) const = default;
};

namespace detail {

inline WalkStats aggregate_at(const std::vector<TrialRecord>& records, std::size_t h,
                              std::int64_t horizon, bool include_truncation) {
  WalkStats stats;
  stats.trials = static_cast<std::int64_t>(records.size());
  stats.horizon = horizon;
  stats.total_steps = stats.trials * horizon;
  RunningStat visits;
  std::int64_t returned = 0;
  for (const auto& r : records) {
    stats.visits_per_trial.push_back(r.visits_at[h]);
    visits.add(static_cast<double>(r.visits_at[h]));
    if (r.visits_at[h] > 0) ++returned;
    ++stats.last_return_histogram[r.last_return_at[h]];
    if (include_truncation) stats.truncated_steps += r.truncated_steps;
  }
  stats.returned_fraction =
      static_cast<double>(returned) / static_cast<double>(stats.trials);
  stats.returned_band3 = binomial_3sigma(stats.returned_fraction, stats.trials);
  stats.mean_visits = visits.mean();
  stats.mean_band3 = 3.0 * visits.stderr_of_mean();
  return stats;
}

}  // namespace detail

inline WalkStats return_experiment(const GroupSequence& seq, const StepDistribution& dist,
                                   std::int64_t trials, std::int64_t horizon,
                                   std::uint64_t base_seed, int workers = 1) {
  const auto records = detail::run_trials(seq, dist, trials, {horizon}, base_seed, workers);
  return detail::aggregate_at(records, 0, horizon, true);
}

/// One set of trials, aggregated at every horizon checkpoint. Truncation
/// counts (which belong to whole trajectories) are reported on the final row.
inline std::vector<WalkStats> horizon_curve(const GroupSequence& seq,
                                            const StepDistribution& dist,
                                            std::int64_t trials,
                                            std::vector<std::int64_t> horizons,
                                            std::uint64_t base_seed, int workers = 1) {
  std::sort(horizons.begin(), horizons.end());
  const auto records = detail::run_trials(seq, dist, trials, horizons, base_seed, workers);
  std::vector<WalkStats> curve;
  for (std::size_t h = 0; h < horizons.size(); ++h)
    curve.push_back(detail::aggregate_at(records, h, horizons[h],
                                         h + 1 == horizons.size()));
  return curve;
}

/// Mean-visit curves for two laws over a horizon ladder, with the ratio
/// column. Both laws run from the same base seed (paired design), so
/// identical laws produce a ratio of exactly 1.
struct ContrastRow {
  std::int64_t horizon = 0;
  double mean_a = 0.0, band_a = 0.0;
  double mean_b = 0.0, band_b = 0.0;
  double ratio = 0.0;
};

struct ContrastTable {
  std::vector<ContrastRow> rows;
  std::int64_t trials = 0;
  std::int64_t truncated_steps_a = 0;
  std::int64_t truncated_steps_b = 0;
};

inline ContrastTable visit_count_contrast(const GroupSequence& seq,
                                          const StepDistribution& dist_a,
                                          const StepDistribution& dist_b,
                                          std::int64_t trials,
                                          std::vector<std::int64_t> horizons,
                                          std::uint64_t base_seed, int workers = 1) {
  std::sort(horizons.begin(), horizons.end());
  const auto rec_a = detail::run_trials(seq, dist_a, trials, horizons, base_seed, workers);
  const auto rec_b = detail::run_trials(seq, dist_b, trials, horizons, base_seed, workers);
  ContrastTable table;
  table.trials = trials;
  for (const auto& r : rec_a) table.truncated_steps_a += r.truncated_steps;
  for (const auto& r : rec_b) table.truncated_steps_b += r.truncated_steps;
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    RunningStat a, b;
    for (std::int64_t i = 0; i < trials; ++i) {
      a.add(static_cast<double>(rec_a[static_cast<std::size_t>(i)].visits_at[h]));
      b.add(static_cast<double>(rec_b[static_cast<std::size_t>(i)].visits_at[h]));
    }
    ContrastRow row;
    row.horizon = horizons[h];
    row.mean_a = a.mean();
    row.band_a = 3.0 * a.stderr_of_mean();
    row.mean_b = b.mean();
    row.band_b = 3.0 * b.stderr_of_mean();
    row.ratio = row.mean_b != 0.0 ? row.mean_a / row.mean_b
                                  : std::numeric_limits<double>::infinity();
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace solwalk
