#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "solwalk/distribution.hpp"
#include "solwalk/group.hpp"
#include "solwalk/rng.hpp"
#include "solwalk/solenoid.hpp"
#include "solwalk/stats.hpp"
#include "support/stat_tests.hpp"

using namespace solwalk;

TEST_CASE("angle reduction lands in [-pi, pi)") {
  CHECK(reduce_angle(kPi) == -kPi);
  CHECK(reduce_angle(-kPi) == -kPi);
  CHECK(reduce_angle(3.0 * kPi) == -kPi);
  CHECK(reduce_angle(0.5) == Catch::Approx(0.5));
  CHECK(reduce_angle(kTwoPi + 0.25) == Catch::Approx(0.25).margin(1e-15));
  for (double x : {-100.0, -7.5, 0.0, 1e6, 12345.678}) {
    const double r = reduce_angle(x);
    CHECK(r >= -kPi);
    CHECK(r < kPi);
  }
}

TEST_CASE("haar samples satisfy compatibility to 1e-9") {
  const auto seq = GroupSequence::periodic({2, 3, 5});
  RngStream rng(101);
  double worst = 0.0;
  for (int i = 0; i < 100'000; ++i) {
    const auto y = haar_sample(seq, 8, rng);
    worst = std::max(worst, y.compatibility_residual(seq));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("haar marginals are uniform on every coordinate") {
  const auto seq = GroupSequence::periodic({3, 2});
  RngStream rng(202);
  constexpr int kSamples = 100'000;
  std::vector<double> b1, b3, b6;
  for (int i = 0; i < kSamples; ++i) {
    const auto y = haar_sample(seq, 6, rng);
    b1.push_back(y.angle(1));
    b3.push_back(y.angle(3));
    b6.push_back(y.angle(6));
  }
  const double crit = testsupport::ks_critical_value(kSamples, 1e-3);
  CHECK(testsupport::ks_uniform_statistic(b1, -kPi, kPi) < crit);
  CHECK(testsupport::ks_uniform_statistic(b3, -kPi, kPi) < crit);
  CHECK(testsupport::ks_uniform_statistic(b6, -kPi, kPi) < crit);
}

TEST_CASE("haar sample hits E_0 with frequency (a_1-1)/a_1") {
  const auto seq = GroupSequence::constant(3);
  RngStream rng(303);
  constexpr int kSamples = 100'000;
  long outside = 0;
  for (int i = 0; i < kSamples; ++i) {
    const auto y = haar_sample(seq, 4, rng);
    if (std::fabs(y.angle(1)) > kPi / 3.0) ++outside;
  }
  const double frac = static_cast<double>(outside) / kSamples;
  CHECK(std::fabs(frac - 2.0 / 3.0) <= binomial_3sigma(2.0 / 3.0, kSamples));
}

TEST_CASE("extend refines uniformly over preimages") {
  const auto seq = GroupSequence::constant(2);
  RngStream rng(404);
  // refining the zero point one level: preimages of 0 under doubling are {0, -pi}
  long at_zero = 0, at_minus_pi = 0;
  constexpr int kTrials = 10'000;
  for (int i = 0; i < kTrials; ++i) {
    const auto z = extend(SolenoidPoint::zero(1), seq, 2, rng);
    CHECK(z.angle(1) == 0.0);
    if (z.angle(2) == 0.0) ++at_zero;
    if (z.angle(2) == -kPi) ++at_minus_pi;
  }
  CHECK(at_zero + at_minus_pi == kTrials);
  const double frac = static_cast<double>(at_zero) / kTrials;
  CHECK(std::fabs(frac - 0.5) <= binomial_3sigma(0.5, kTrials));
}

TEST_CASE("extend preserves the prefix and keeps marginals uniform") {
  const auto seq = GroupSequence::periodic({2, 3});
  RngStream rng(505);
  std::vector<double> deep;
  constexpr int kSamples = 100'000;
  for (int i = 0; i < kSamples; ++i) {
    const auto y = haar_sample(seq, 3, rng);
    const auto z = extend(y, seq, 7, rng);
    if (i < 1000) {
      const auto back = z.truncated(3);
      for (int n = 1; n <= 3; ++n) CHECK(back.angle(n) == y.angle(n));
    }
    deep.push_back(z.angle(7));
  }
  CHECK(testsupport::ks_uniform_statistic(deep, -kPi, kPi) <
        testsupport::ks_critical_value(kSamples, 1e-3));
}

TEST_CASE("characteristic function on fixed points") {
  const auto seq = GroupSequence::constant(2);
  const auto geo = StepDistribution::geometric(0.5, seq);

  // at the identity the value is 1 - Q_J with truncation bound 2 Q_J
  const auto at_zero = char_fn(geo, SolenoidPoint::zero(6));
  CHECK(at_zero.value == Catch::Approx(1.0 - geo.tail(6)).epsilon(1e-14));
  CHECK(at_zero.truncation_error_bound == Catch::Approx(2.0 * geo.tail(6)).epsilon(1e-14));

  const auto point_mass = StepDistribution::finite_support({{0, 1.0}}, seq);
  const auto at_pi = char_fn(point_mass, SolenoidPoint({-kPi}));
  CHECK(at_pi.value == Catch::Approx(-1.0).epsilon(1e-14));
  CHECK(at_pi.truncation_error_bound == 0.0);

  // b_1 = -pi, b_2 = pi/2: value = q_0 cos(pi) + q_1 cos(pi/2) = -1/2, bound 2 Q_2
  const auto two = char_fn(geo, SolenoidPoint({-kPi, kPi / 2.0}));
  CHECK(two.value == Catch::Approx(-0.5).margin(1e-14));
  CHECK(two.truncation_error_bound == Catch::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("characteristic values stay within 1 plus the truncation bound") {
  const auto seq = GroupSequence::periodic({2, 5});
  const auto dist = StepDistribution::solenoid_matched(2.0, seq);
  RngStream rng(606);
  for (int i = 0; i < 20'000; ++i) {
    const auto y = haar_sample(seq, 6, rng);
    const auto cv = char_fn(dist, y);
    CHECK(std::fabs(cv.value) <= 1.0 + cv.truncation_error_bound);
  }
}

TEST_CASE("depth stability of the characteristic function") {
  const auto seq = GroupSequence::periodic({2, 3});
  const auto dist = StepDistribution::geometric(0.4, seq);
  RngStream rng(707);
  for (int i = 0; i < 5'000; ++i) {
    const auto deep = haar_sample(seq, 10, rng);
    const auto shallow = deep.truncated(4);
    const double diff =
        std::fabs(char_fn(dist, deep).value - char_fn(dist, shallow).value);
    CHECK(diff <= 2.0 * dist.tail(4) + 1e-15);
  }
}

TEST_CASE("modulus gap check finds no near-unit values away from zero") {
  const auto seq = GroupSequence::constant(2);
  const auto dist = StepDistribution::geometric(0.5, seq);
  RngStream rng(808);
  const auto report = modulus_gap_check(seq, dist, 10'000, 8, rng);
  CHECK(report.applicable);
  CHECK(report.violations == 0);
  CHECK(report.min_gap > 0.0);
  CHECK(report.checked > 0);
  CHECK(report.checked <= report.samples);
}

TEST_CASE("modulus gap check is not applicable without strict positivity") {
  const auto seq = GroupSequence::constant(2);
  const auto dist = StepDistribution::finite_support({{0, 1.0}}, seq);
  RngStream rng(909);
  const auto report = modulus_gap_check(seq, dist, 100, 4, rng);
  CHECK_FALSE(report.applicable);
  CHECK(report.violations == 0);
}

TEST_CASE("point construction guards") {
  const auto seq = GroupSequence::constant(2);
  RngStream rng(1);
  CHECK_THROWS_AS(haar_sample(seq, 65, rng), depth_error);
  CHECK_THROWS_AS(SolenoidPoint::zero(0), contract_error);
  const auto y = haar_sample(seq, 3, rng);
  CHECK_THROWS_AS(extend(y, seq, 3, rng), contract_error);
  CHECK_THROWS_AS(extend(y, seq, 100, rng), depth_error);
  CHECK_THROWS_AS(y.truncated(0), contract_error);
  CHECK_THROWS_AS(y.angle(4), contract_error);
}
