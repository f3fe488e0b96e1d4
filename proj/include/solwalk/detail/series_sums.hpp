#pragma once

#include <cmath>
#include <vector>

#include "solwalk/bigint.hpp"
#include "solwalk/errors.hpp"
#include "solwalk/group.hpp"

namespace solwalk::detail {

/// Hurwitz zeta sum_{k>=0} (x+k)^{-s} for s > 1, x >= 1, by Euler-Maclaurin.
/// With a 16-term head and four Bernoulli corrections the truncation error is
/// below 1e-16 relative for every s > 1 used here.
inline double hurwitz_zeta(double s, double x) {
  constexpr int kHead = 16;
  double sum = 0.0;
  for (int k = kHead - 1; k >= 0; --k) sum += std::pow(x + k, -s);
  const double y = x + kHead;
  sum += std::pow(y, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(y, -s);
  // B_{2j}/(2j)! * s(s+1)...(s+2j-2) * y^{-s-2j+1}
  const double b[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0};
  double rising = s;           // s(s+1)...(s+2j-2)
  double power = std::pow(y, -s - 1.0);
  for (int j = 0; j < 4; ++j) {
    sum += b[j] * rising * power;
    rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
    power /= y * y;
  }
  return sum;
}

/// (a_1...a_j)^{-kappa} for any j >= 0, extending past depth_cap through the
/// periodic structure (prod_{j+L} = prod_j * P), so no group product beyond
/// the cap is ever materialized.
inline double prod_neg_pow(const GroupSequence& seq, double kappa, int j) {
  const int cap = seq.depth_cap();
  if (j <= cap) return neg_pow(seq.product(j), kappa);
  const int L = seq.period_length();
  const double pk = neg_pow(seq.period_product(), kappa);
  double scale = 1.0;
  while (j > cap) {
    scale *= pk;
    j -= L;
  }
  return scale * neg_pow(seq.product(j), kappa);
}

/// Closed-form tail sum_{j>=n} (a_1...a_j)^{-kappa}, kappa > 0. For n past
/// the sequence's preperiod this is a finite window of length L divided by
/// (1 - P^{-kappa}); before it, the finitely many prefix terms are added.
inline double tail_sum_prod_neg_pow(const GroupSequence& seq, double kappa, int n) {
  if (n < 0) throw contract_error("tail_sum_prod_neg_pow: negative index");
  const int n0 = seq.period_start();
  const int L = seq.period_length();
  const double pk = neg_pow(seq.period_product(), kappa);
  const double denom = 1.0 - pk;
  if (n >= n0) {
    double window = 0.0;
    for (int m = L - 1; m >= 0; --m) window += prod_neg_pow(seq, kappa, n + m);
    return window / denom;
  }
  double head = 0.0;
  for (int j = n; j < n0; ++j) head += prod_neg_pow(seq, kappa, j);
  double window = 0.0;
  for (int m = L - 1; m >= 0; --m) window += prod_neg_pow(seq, kappa, n0 + m);
  return head + window / denom;
}

}  // namespace solwalk::detail
