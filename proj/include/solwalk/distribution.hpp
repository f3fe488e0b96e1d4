#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "solwalk/detail/series_sums.hpp"
#include "solwalk/errors.hpp"
#include "solwalk/group.hpp"
#include "solwalk/rng.hpp"

namespace solwalk {

enum class Family { Geometric, SolenoidMatched, PowerLaw, FiniteSupport, CustomTable };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Geometric: return "geometric";
    case Family::SolenoidMatched: return "solenoid_matched";
    case Family::PowerLaw: return "power_law";
    case Family::FiniteSupport: return "finite_support";
    case Family::CustomTable: return "custom_table";
  }
  return "?";
}

/// Asserted asymptotic law behind a custom table: q_n = Theta(rate^n), hence
/// Q_n = Theta(rate^n) as well. Without it the classifier refuses to
/// extrapolate a finite table to an infinite series.
struct DeclaredTail {
  double geometric_rate;
};

/// The symmetric step law: mu{e_{+-j}} = q_j / 2. Tails Q_n = sum_{j>=n} q_j
/// come from closed forms for the built-in families; the theorem-side
/// quantities sqrt(q_n), sqrt(Q_n) must never be built from accumulated
/// floating crumbs.
class StepDistribution {
 public:
  /// q_j = (1-r) r^j, Q_n = r^n.
  static StepDistribution geometric(double r, const GroupSequence& seq) {
    if (!(r > 0.0 && r < 1.0))
      throw config_error("geometric family: r must lie in (0,1)");
    StepDistribution d(Family::Geometric, seq.depth_cap());
    d.param_ = r;
    d.normalizer_ = 1.0 - r;
    d.strictly_positive_ = true;
    d.finish(seq);
    return d;
  }

  /// q_j = c / (a_1...a_j)^kappa with c fixed by normalization; tails from
  /// the periodic closed form.
  static StepDistribution solenoid_matched(double kappa, const GroupSequence& seq) {
    if (!(kappa > 0.0))
      throw config_error("solenoid_matched family: kappa must be positive");
    StepDistribution d(Family::SolenoidMatched, seq.depth_cap());
    d.param_ = kappa;
    const double total = detail::tail_sum_prod_neg_pow(seq, kappa, 0);
    if (!std::isfinite(total) || total <= 0.0)
      throw config_error("solenoid_matched family: non-normalizable parameters");
    d.normalizer_ = 1.0 / total;
    d.strictly_positive_ = true;
    d.tail_cache_.resize(static_cast<std::size_t>(d.max_index_) + 2);
    for (int n = 0; n <= d.max_index_ + 1; ++n)
      d.tail_cache_[static_cast<std::size_t>(n)] =
          d.normalizer_ * detail::tail_sum_prod_neg_pow(seq, kappa, n);
    d.weight_cache_.resize(static_cast<std::size_t>(d.max_index_) + 1);
    for (int n = 0; n <= d.max_index_; ++n)
      d.weight_cache_[static_cast<std::size_t>(n)] =
          d.normalizer_ * detail::prod_neg_pow(seq, kappa, n);
    d.finish(seq);
    return d;
  }

  /// q_j = c (j+1)^{-s}, s > 1; Q_n = c * zeta(s, n+1) (Hurwitz).
  static StepDistribution power_law(double s, const GroupSequence& seq) {
    if (!(s > 1.0)) throw config_error("power_law family: s must exceed 1");
    StepDistribution d(Family::PowerLaw, seq.depth_cap());
    d.param_ = s;
    d.normalizer_ = 1.0 / detail::hurwitz_zeta(s, 1.0);
    d.strictly_positive_ = true;
    d.finish(seq);
    return d;
  }

  /// Exactly this finite law (normalized); q_j = 0 beyond the table.
  static StepDistribution finite_support(const std::map<int, double>& weights,
                                         const GroupSequence& seq) {
    StepDistribution d(Family::FiniteSupport, 0);
    d.table_ = dense_table(weights);
    d.normalize_table();
    d.max_index_ = static_cast<int>(d.table_.size()) - 1;
    d.strictly_positive_ = false;
    d.rebuild_table_tails();
    d.finish(seq);
    return d;
  }

  /// A user-supplied truncation of an unknown infinite law, optionally with a
  /// declared asymptotic tail.
  static StepDistribution custom_table(std::vector<double> weights,
                                       std::optional<DeclaredTail> declared,
                                       const GroupSequence& seq) {
    if (declared &&
        !(declared->geometric_rate > 0.0 && declared->geometric_rate < 1.0))
      throw config_error("custom_table: declared geometric rate must lie in (0,1)");
    StepDistribution d(Family::CustomTable, 0);
    d.table_ = std::move(weights);
    d.normalize_table();
    d.max_index_ = static_cast<int>(d.table_.size()) - 1;
    d.declared_ = declared;
    bool all_positive = !d.table_.empty();
    for (double q : d.table_) all_positive = all_positive && q > 0.0;
    // Theorem 2 needs q_j > 0 for the full infinite law; a bare table cannot
    // promise that, a declared tail can.
    d.strictly_positive_ = all_positive && declared.has_value();
    d.rebuild_table_tails();
    d.finish(seq);
    return d;
  }

  Family family() const { return family_; }
  double param() const { return param_; }
  double normalizer() const { return normalizer_; }
  bool strictly_positive() const { return strictly_positive_; }
  const std::optional<DeclaredTail>& declared_tail() const { return declared_; }

  /// Largest index the sampler can return; also the last index with data for
  /// table-backed families.
  int max_index() const { return max_index_; }

  /// Sentinel index meaning "the draw fell into the truncated tail".
  int truncation_index() const { return max_index_ + 1; }

  double weight(int n) const {
    if (n < 0) throw contract_error("weight: negative index");
    switch (family_) {
      case Family::Geometric:
        return normalizer_ * std::pow(param_, n);
      case Family::PowerLaw:
        return normalizer_ * std::pow(static_cast<double>(n) + 1.0, -param_);
      case Family::SolenoidMatched:
        if (n > max_index_) throw depth_error("weight: index exceeds depth_cap");
        return weight_cache_[static_cast<std::size_t>(n)];
      case Family::FiniteSupport:
      case Family::CustomTable:
        return n <= max_index_ ? table_[static_cast<std::size_t>(n)] : 0.0;
    }
    return 0.0;
  }

  /// Q_n = q_n + q_{n+1} + ..., by closed form (backward summation only for
  /// explicit tables).
  double tail(int n) const {
    if (n < 0) throw contract_error("tail: negative index");
    switch (family_) {
      case Family::Geometric:
        return std::pow(param_, n);
      case Family::PowerLaw:
        return normalizer_ * detail::hurwitz_zeta(param_, static_cast<double>(n) + 1.0);
      case Family::SolenoidMatched:
        if (n > max_index_ + 1) throw depth_error("tail: index exceeds depth_cap");
        return tail_cache_[static_cast<std::size_t>(n)];
      case Family::FiniteSupport:
      case Family::CustomTable:
        return n <= max_index_ ? tail_cache_[static_cast<std::size_t>(n)] : 0.0;
    }
    return 0.0;
  }

  /// Smallest J >= 1 with 2 Q_J <= eps (the char_fn truncation bound).
  int depth_for_tolerance(double eps) const {
    for (int j = 1; j <= max_index_ + 1; ++j)
      if (2.0 * tail(j) <= eps) return j;
    throw depth_error("depth_for_tolerance: tolerance unreachable within depth_cap");
  }

  /// Inverse-CDF draw of (index j, sign). A draw beyond max_index() returns
  /// truncation_index(); the caller decides the truncation policy.
  std::pair<int, int> sample_step(RngStream& rng) const {
    const double u = rng.uniform01();
    const int sgn = rng.sign();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const int j = static_cast<int>(it - cdf_.begin());
    return {j <= max_index_ ? j : truncation_index(), sgn};
  }

 private:
  StepDistribution(Family f, int max_index) : family_(f), max_index_(max_index) {}

  static std::vector<double> dense_table(const std::map<int, double>& weights) {
    if (weights.empty()) throw config_error("finite_support: empty table");
    int hi = 0;
    for (const auto& [j, q] : weights) {
      if (j < 0) throw config_error("finite_support: negative index");
      if (q < 0.0) throw config_error("finite_support: negative weight");
      hi = std::max(hi, j);
    }
    std::vector<double> t(static_cast<std::size_t>(hi) + 1, 0.0);
    for (const auto& [j, q] : weights) t[static_cast<std::size_t>(j)] = q;
    return t;
  }

  void normalize_table() {
    double sum = 0.0;
    for (double q : table_) {
      if (q < 0.0) throw config_error("step table: negative weight");
      sum += q;
    }
    if (!(sum > 0.0)) throw config_error("step table: weights must have positive sum");
    for (double& q : table_) q /= sum;
  }

  void rebuild_table_tails() {
    tail_cache_.assign(table_.size() + 1, 0.0);
    for (std::size_t i = table_.size(); i-- > 0;)
      tail_cache_[i] = table_[i] + tail_cache_[i + 1];  // smallest-first
  }

  void finish(const GroupSequence& seq) {
    (void)seq;
    cdf_.resize(static_cast<std::size_t>(max_index_) + 1);
    for (int j = 0; j <= max_index_; ++j)
      cdf_[static_cast<std::size_t>(j)] = 1.0 - tail(j + 1);
  }

  Family family_;
  int max_index_;
  double param_ = 0.0;
  double normalizer_ = 1.0;
  bool strictly_positive_ = false;
  std::optional<DeclaredTail> declared_;
  std::vector<double> table_;
  std::vector<double> weight_cache_;
  std::vector<double> tail_cache_;
  std::vector<double> cdf_;
};

}  // namespace solwalk
