#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "solwalk/distribution.hpp"
#include "solwalk/errors.hpp"
#include "solwalk/group.hpp"
#include "solwalk/rng.hpp"

namespace solwalk {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Reduce to [-pi, pi). IEEE remainder rounds half to even and lands in
/// [-pi, pi]; the single boundary case +pi is folded to -pi.
inline double reduce_angle(double x) {
  double r = std::remainder(x, kTwoPi);
  if (r >= kPi) r -= kTwoPi;
  if (r < -kPi) r += kTwoPi;  // guards the r == -pi-epsilon rounding case
  return r;
}

/// A depth-J truncation of a dual-group point: angles b_1..b_J in [-pi, pi)
/// with a_{n+1} b_{n+1} = b_n (mod 2pi). Immutable.
class SolenoidPoint {
 public:
  explicit SolenoidPoint(std::vector<double> angles) : angles_(std::move(angles)) {
    if (angles_.empty()) throw contract_error("solenoid point: depth must be >= 1");
  }

  static SolenoidPoint zero(int depth) {
    if (depth < 1) throw contract_error("solenoid point: depth must be >= 1");
    return SolenoidPoint(std::vector<double>(static_cast<std::size_t>(depth), 0.0));
  }

  int depth() const { return static_cast<int>(angles_.size()); }

  /// b_n, 1-based.
  double angle(int n) const {
    if (n < 1 || n > depth()) throw contract_error("solenoid point: angle index");
    return angles_[static_cast<std::size_t>(n - 1)];
  }

  const std::vector<double>& angles() const { return angles_; }

  SolenoidPoint truncated(int new_depth) const {
    if (new_depth < 1 || new_depth > depth())
      throw contract_error("solenoid point: bad truncation depth");
    return SolenoidPoint(std::vector<double>(
        angles_.begin(), angles_.begin() + new_depth));
  }

  /// Largest |a_{n+1} b_{n+1} - b_n| residual after mod-2pi reduction.
  double compatibility_residual(const GroupSequence& seq) const {
    double worst = 0.0;
    for (int n = 1; n < depth(); ++n) {
      const double lifted =
          static_cast<double>(seq.a(n + 1)) * angle(n + 1);
      const double res = std::fabs(reduce_angle(lifted - angle(n)));
      if (res > worst) worst = res;
    }
    return worst;
  }

 private:
  std::vector<double> angles_;
};

namespace detail {

/// One conditional-Haar refinement step: b_{n+1} uniform over the a_{n+1}
/// preimages (b_n + 2 pi k) / a_{n+1}.
inline double refine_angle(double b_n, std::int64_t a_next, RngStream& rng) {
  const auto k = rng.uniform_index(static_cast<std::uint64_t>(a_next));
  return reduce_angle((b_n + kTwoPi * static_cast<double>(k)) /
                      static_cast<double>(a_next));
}

}  // namespace detail

/// Draw the first J coordinates of a Haar-distributed dual point: b_1 uniform
/// on [-pi, pi), then conditional-Haar refinement downwards. This has exactly
/// the pushforward law of Haar measure under the first J coordinates (b_1 is
/// Haar on the circle; each refinement is uniform over the fiber), and it
/// keeps every stored angle at full float precision, which the equivalent
/// "draw b_J, multiply up" construction would not.
inline SolenoidPoint haar_sample(const GroupSequence& seq, int depth, RngStream& rng) {
  if (depth > seq.depth_cap()) throw depth_error("haar_sample: depth exceeds depth_cap");
  if (depth < 1) throw contract_error("haar_sample: depth must be >= 1");
  std::vector<double> b(static_cast<std::size_t>(depth));
  b[0] = rng.uniform(-kPi, kPi);
  for (int n = 1; n < depth; ++n)
    b[static_cast<std::size_t>(n)] =
        detail::refine_angle(b[static_cast<std::size_t>(n) - 1], seq.a(n + 1), rng);
  return SolenoidPoint(std::move(b));
}

/// Refine an existing point to a greater depth; the result is Haar
/// conditioned on the given prefix.
inline SolenoidPoint extend(const SolenoidPoint& point, const GroupSequence& seq,
                            int to_depth, RngStream& rng) {
  if (to_depth > seq.depth_cap()) throw depth_error("extend: depth exceeds depth_cap");
  if (to_depth <= point.depth()) throw contract_error("extend: target depth not deeper");
  std::vector<double> b = point.angles();
  b.reserve(static_cast<std::size_t>(to_depth));
  for (int n = point.depth(); n < to_depth; ++n)
    b.push_back(detail::refine_angle(b.back(), seq.a(n + 1), rng));
  return SolenoidPoint(std::move(b));
}

/// mu-hat truncated at the point's depth, with the exact truncation bound.
struct CharValue {
  double value;
  double truncation_error_bound;  // 2 Q_J: each omitted q_j cos b_{j+1} lies in [-q_j, q_j]
};

/// mu-hat(y) = sum_j q_j cos b_{j+1}, real by symmetry of the step law.
inline CharValue char_fn(const StepDistribution& dist, const SolenoidPoint& point) {
  const int depth = point.depth();
  double value = 0.0;
  const int last = std::min(depth - 1, dist.max_index());
  for (int j = 0; j <= last; ++j)
    value += dist.weight(j) * std::cos(point.angle(j + 1));
  const double bound = 2.0 * (depth <= dist.max_index() + 1 ? dist.tail(depth) : 0.0);
  return {value, bound};
}

/// Sampling check of Lemma 1: away from the identity, |mu-hat| stays
/// strictly below 1 when every q_j (j < depth) is positive.
struct ModulusGapReport {
  bool applicable = false;
  std::int64_t samples = 0;
  std::int64_t checked = 0;  // samples separated from 0 at this depth
  std::int64_t violations = 0;
  double min_gap = 0.0;  // min over checked samples of (1 - bound) - |value|
  std::string notes;
};

/// A sample is checkable when some angle clears the 1e-3 zero floor AND its
/// first-coordinate loss q_0 (1 - cos b_1) reaches 2 Q_J. Points failing the
/// second condition sit too close to the identity for depth J to resolve:
/// their true |mu-hat| is legitimately within the truncation band of 1, so
/// flagging them would report math, not bugs. For checkable points
/// |value| < 1 - 2 Q_J holds with margin Q_J; any violation is a defect.
inline ModulusGapReport modulus_gap_check(const GroupSequence& seq,
                                          const StepDistribution& dist,
                                          std::int64_t samples, int depth,
                                          RngStream& rng) {
  ModulusGapReport report;
  report.samples = samples;
  for (int j = 0; j < depth && j <= dist.max_index(); ++j) {
    if (dist.weight(j) <= 0.0) {
      report.notes = "not applicable: q_" + std::to_string(j) + " = 0 within depth";
      return report;
    }
  }
  if (depth > dist.max_index() + 1) {
    report.notes = "not applicable: some q_j vanish within depth";
    return report;
  }
  report.applicable = true;
  report.min_gap = 1.0;
  constexpr double kZeroAngle = 1e-3;
  const double q0 = dist.weight(0);
  const double band = 2.0 * (depth <= dist.max_index() + 1 ? dist.tail(depth) : 0.0);
  std::int64_t unresolved = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const SolenoidPoint y = haar_sample(seq, depth, rng);
    bool nonzero = false;
    for (int n = 1; n <= depth; ++n)
      nonzero = nonzero || std::fabs(y.angle(n)) > kZeroAngle;
    if (!nonzero) continue;  // mu-hat(0) = 1 is allowed
    const double s = std::sin(y.angle(1) / 2.0);
    if (q0 * 2.0 * s * s < band) {
      ++unresolved;  // too close to 0 for this depth
      continue;
    }
    ++report.checked;
    const CharValue cv = char_fn(dist, y);
    const double gap = (1.0 - cv.truncation_error_bound) - std::fabs(cv.value);
    if (gap < report.min_gap) report.min_gap = gap;
    if (gap <= 0.0) ++report.violations;
  }
  report.notes = "excluded " + std::to_string(unresolved) +
                 " near-identity samples unresolvable at this depth";
  return report;
}

}  // namespace solwalk
