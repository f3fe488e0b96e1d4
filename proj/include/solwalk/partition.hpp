#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "solwalk/bigint.hpp"
#include "solwalk/distribution.hpp"
#include "solwalk/errors.hpp"
#include "solwalk/group.hpp"
#include "solwalk/rng.hpp"
#include "solwalk/solenoid.hpp"

namespace solwalk {

/// Cell index of the partition {E_n}: the smallest n whose coordinate
/// b_{n+1} escapes the central interval [-pi/(a_1...a_{n+1}), +...].
/// Boundary points fire the first test they touch, i.e. go to the lower
/// index; the boundaries have Haar measure zero. Returns nullopt when the
/// point stays central through its whole depth (the residual set of measure
/// 1/(a_1...a_J)).
inline std::optional<int> classify_point(const SolenoidPoint& point,
                                         const GroupSequence& seq) {
  for (int n = 0; n < point.depth(); ++n) {
    const double threshold = kPi / to_double(seq.product(n + 1));
    if (std::fabs(point.angle(n + 1)) >= threshold) return n;
  }
  return std::nullopt;
}

/// m_Y(E_n) = (a_{n+1} - 1) / (a_1...a_{n+1}), exact.
inline BigRational cell_measure(const GroupSequence& seq, int n) {
  if (n < 0) throw contract_error("cell_measure: negative index");
  if (n + 1 > seq.depth_cap()) throw depth_error("cell_measure: index exceeds depth_cap");
  return BigRational(BigInt(seq.a(n + 1)) - 1, seq.product(n + 1));
}

/// sum_{n<=N} m_Y(E_n), computed exactly and checked against the telescoped
/// closed form 1 - 1/(a_1...a_{N+1}).
inline BigRational telescoping_partial_sum(const GroupSequence& seq, int N) {
  if (N < 0) throw contract_error("telescoping_partial_sum: negative index");
  if (N + 1 > seq.depth_cap())
    throw depth_error("telescoping_partial_sum: index exceeds depth_cap");
  BigRational sum = 0;
  for (int n = 0; n <= N; ++n) sum += cell_measure(seq, n);
  const BigRational closed = BigRational(1) - BigRational(1, seq.product(N + 1));
  if (sum != closed)
    throw contract_error("telescoping_partial_sum: telescoping identity failed");
  return sum;
}

/// Haar conditioned on E_n at the requested depth: b_{n+1} uniform on the
/// union of the a_{n+1}-1 off-center intervals, lower coordinates derived by
/// compatibility, higher ones by conditional-Haar refinement.
inline SolenoidPoint sample_in_cell(const GroupSequence& seq, int n, int depth,
                                    RngStream& rng) {
  if (n < 0) throw contract_error("sample_in_cell: negative cell index");
  if (depth < n + 1) throw contract_error("sample_in_cell: depth must be >= n+1");
  if (depth > seq.depth_cap()) throw depth_error("sample_in_cell: depth exceeds depth_cap");
  const std::int64_t a = seq.a(n + 1);
  const double half_width = kPi / to_double(seq.product(n + 1));
  const auto k =
      1 + static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(a - 1)));
  const double offset = rng.uniform(-half_width, half_width);
  std::vector<double> b(static_cast<std::size_t>(n) + 1);
  b[static_cast<std::size_t>(n)] = reduce_angle(
      kTwoPi * static_cast<double>(k) / static_cast<double>(a) + offset);
  for (int m = n; m >= 1; --m)
    b[static_cast<std::size_t>(m) - 1] =
        reduce_angle(static_cast<double>(seq.a(m + 1)) * b[static_cast<std::size_t>(m)]);
  SolenoidPoint point{std::move(b)};
  if (depth == n + 1) return point;
  return extend(point, seq, depth, rng);
}

/// Default alpha_n for the lower-bound machinery: the maximizer sqrt(Q_n) of
/// x / (x^2 + Q_n), clamped into (0, 1).
inline double default_alpha(const StepDistribution& dist, int n) {
  return std::min(1.0 - 1e-6, std::sqrt(dist.tail(n)));
}

/// A_n membership: the distance from b_{n+1} to its nearest lattice point
/// 2 pi k / a_{n+1} is below alpha * pi / (a_1...a_{n+1}). Equivalent, through
/// the compatibility chain, to the paper-level condition on b_1.
inline bool alpha_membership(const SolenoidPoint& point, const GroupSequence& seq,
                             int cell, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw contract_error("alpha_membership: alpha must lie in (0,1)");
  const auto classified = classify_point(point, seq);
  if (!classified || *classified != cell)
    throw contract_error("alpha_membership: point is not in the stated cell");
  const double a = static_cast<double>(seq.a(cell + 1));
  const double b = point.angle(cell + 1);
  const double k_near = std::round(b * a / kTwoPi);
  const double delta = b - kTwoPi * k_near / a;
  return std::fabs(delta) < alpha * kPi / to_double(seq.product(cell + 1));
}

/// One admissible interval for a coordinate, as exact rational multiples of
/// pi inside the window [-1, 1).
struct AngleInterval {
  BigRational lo;
  BigRational hi;
};

struct CoordinateFamily {
  int coordinate = 0;  // which b_k
  std::vector<AngleInterval> intervals;
};

namespace detail {

/// Append [center-h, center+h] (pi units) reduced into [-1, 1), splitting at
/// the seam when needed.
inline void push_reduced_interval(std::vector<AngleInterval>& out, BigRational center,
                                  const BigRational& half_width) {
  // normalize center into [-1, 1)
  BigRational two(2);
  while (center >= 1) center -= two;
  while (center < -1) center += two;
  BigRational lo = center - half_width;
  BigRational hi = center + half_width;
  if (lo < -1) {
    out.push_back({lo + two, BigRational(1)});
    out.push_back({BigRational(-1), hi});
  } else if (hi > 1) {
    out.push_back({lo, BigRational(1)});
    out.push_back({BigRational(-1), hi - two});
  } else {
    out.push_back({lo, hi});
  }
}

inline void sort_intervals(std::vector<AngleInterval>& v) {
  std::sort(v.begin(), v.end(),
            [](const AngleInterval& x, const AngleInterval& y) { return x.lo < y.lo; });
}

}  // namespace detail

/// Domains of variation of b_1..b_max_coord inside E_n: central intervals up
/// to coordinate n, the off-center union at coordinate n+1, and its preimage
/// lattice families above.
inline std::vector<CoordinateFamily> cell_interval_family(const GroupSequence& seq,
                                                          int n, int max_coord) {
  if (max_coord > seq.depth_cap())
    throw depth_error("cell_interval_family: max_coord exceeds depth_cap");
  if (n < 0 || max_coord < 1) throw contract_error("cell_interval_family: bad arguments");
  std::vector<CoordinateFamily> families;
  const std::int64_t a = seq.a(n + 1);
  for (int m = 1; m <= max_coord; ++m) {
    CoordinateFamily fam;
    fam.coordinate = m;
    const BigRational half_width(1, seq.product(m));
    if (m <= n) {
      fam.intervals.push_back({-half_width, half_width});
    } else if (m == n + 1) {
      for (std::int64_t k = 1; k < a; ++k)
        detail::push_reduced_interval(fam.intervals, BigRational(2 * k, a), half_width);
    } else {
      // centers 2 pi l / (prod_m / prod_n) with l not divisible by a_{n+1}
      const BigInt ratio = seq.product(m) / seq.product(n);
      for (BigInt l = 0; l < ratio; ++l) {
        if (l % a == 0) continue;
        detail::push_reduced_interval(fam.intervals, BigRational(2 * l, ratio),
                                      half_width);
      }
    }
    detail::sort_intervals(fam.intervals);
    families.push_back(std::move(fam));
  }
  return families;
}

/// Domains of variation inside the residual set Y minus (E_0 u ... u E_{r-1}):
/// central intervals up to coordinate r, full preimage lattices above.
inline std::vector<CoordinateFamily> residual_interval_family(const GroupSequence& seq,
                                                              int r, int max_coord) {
  if (max_coord > seq.depth_cap())
    throw depth_error("residual_interval_family: max_coord exceeds depth_cap");
  if (r < 0 || max_coord < 1)
    throw contract_error("residual_interval_family: bad arguments");
  std::vector<CoordinateFamily> families;
  for (int m = 1; m <= max_coord; ++m) {
    CoordinateFamily fam;
    fam.coordinate = m;
    const BigRational half_width(1, seq.product(m));
    if (m <= r) {
      fam.intervals.push_back({-half_width, half_width});
    } else {
      const BigInt ratio = seq.product(m) / seq.product(r);
      for (BigInt l = 0; l < ratio; ++l)
        detail::push_reduced_interval(fam.intervals, BigRational(2 * l, ratio),
                                      half_width);
    }
    detail::sort_intervals(fam.intervals);
    families.push_back(std::move(fam));
  }
  return families;
}

/// Total length of a coordinate family, in pi units.
inline BigRational total_interval_length(const CoordinateFamily& fam) {
  BigRational total = 0;
  for (const auto& iv : fam.intervals) total += iv.hi - iv.lo;
  return total;
}

}  // namespace solwalk
