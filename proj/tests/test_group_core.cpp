#include <catch2/catch_amalgamated.hpp>

#include "solwalk/group.hpp"
#include "solwalk/rng.hpp"

using namespace solwalk;

namespace {

GroupSequence seq_23() { return GroupSequence::periodic({2, 3}); }

RationalElement random_element(const GroupSequence& seq, RngStream& rng) {
  const auto num = static_cast<std::int64_t>(rng.uniform_index(2'000'001)) - 1'000'000;
  const int level = static_cast<int>(rng.uniform_index(13));
  return canonicalize(BigInt(num), level, seq);
}

}  // namespace

TEST_CASE("sequence construction and products") {
  const auto seq = seq_23();
  CHECK(seq.a(1) == 2);
  CHECK(seq.a(2) == 3);
  CHECK(seq.a(3) == 2);
  CHECK(seq.product(0) == 1);
  CHECK(seq.product(2) == 6);
  CHECK(seq.product(4) == 36);

  const auto hp = GroupSequence::constant(5, 10);
  CHECK(hp.a(7) == 5);
  CHECK(hp.product(3) == 125);

  const auto mixed = GroupSequence::constant_after({2, 3}, 7, 10);
  CHECK(mixed.a(2) == 3);
  CHECK(mixed.a(3) == 7);
  CHECK(mixed.period_start() == 2);
  CHECK(mixed.period_length() == 1);
  CHECK(mixed.period_product() == 7);

  CHECK_THROWS_AS(GroupSequence::periodic({2, 1}), config_error);
  CHECK_THROWS_AS(GroupSequence::periodic({}), config_error);
  CHECK_THROWS_AS(GroupSequence::periodic({2, 3}, 1), config_error);
  CHECK_THROWS_AS(seq.a(65), depth_error);
  CHECK_THROWS_AS(seq.product(65), depth_error);
}

TEST_CASE("generators") {
  const auto seq = seq_23();
  const auto e0 = generator(seq, 0, +1);
  CHECK(e0.numerator() == 1);
  CHECK(e0.level() == 0);

  const auto e2 = generator(seq, 2, +1);
  CHECK(e2.numerator() == 1);
  CHECK(e2.level() == 2);
  CHECK(e2.value(seq) == BigRational(1, 6));

  const auto seq2 = GroupSequence::constant(2);
  const auto e3m = generator(seq2, 3, -1);
  CHECK(e3m.numerator() == -1);
  CHECK(e3m.level() == 3);
  CHECK(e3m.value(seq2) == BigRational(-1, 8));

  CHECK_THROWS_AS(generator(seq, seq.depth_cap() + 1, +1), depth_error);
}

TEST_CASE("add on fixed examples") {
  const auto seq2 = GroupSequence::constant(2);
  const auto half = generator(seq2, 1, +1);
  const auto one = add(half, half, seq2);
  CHECK(one.numerator() == 1);
  CHECK(one.level() == 0);

  const auto seq = seq_23();
  const auto sixth = generator(seq, 2, +1);
  const auto zero = add(sixth, neg(sixth), seq);
  CHECK(zero.is_zero());
  CHECK(zero.level() == 0);

  // 1/2 + 1/6 = 2/3: numerator 4 at level 2
  const auto sum = add(generator(seq, 1, +1), sixth, seq);
  CHECK(sum.numerator() == 4);
  CHECK(sum.level() == 2);
  CHECK(sum.value(seq) == BigRational(2, 3));
}

TEST_CASE("canonicalize examples") {
  const auto seq = seq_23();
  const auto a = canonicalize(6, 2, seq);
  CHECK(a.numerator() == 1);
  CHECK(a.level() == 0);

  const auto b = canonicalize(3, 2, seq);
  CHECK(b.numerator() == 1);
  CHECK(b.level() == 1);

  const auto c = canonicalize(5, 2, seq);
  CHECK(c.numerator() == 5);
  CHECK(c.level() == 2);

  const auto z = canonicalize(0, 7, seq);
  CHECK(z.is_zero());
  CHECK(z.level() == 0);
}

TEST_CASE("add agrees with the exact rational oracle on random pairs") {
  const auto seq = seq_23();
  RngStream rng(20240811);
  for (int i = 0; i < 10'000; ++i) {
    const auto x = random_element(seq, rng);
    const auto y = random_element(seq, rng);
    const auto sum = add(x, y, seq);
    CHECK(sum.value(seq) == x.value(seq) + y.value(seq));
  }
}

TEST_CASE("group laws on random elements") {
  const auto seq = GroupSequence::periodic({3, 5, 2});
  RngStream rng(77);
  for (int i = 0; i < 2'000; ++i) {
    const auto x = random_element(seq, rng);
    const auto y = random_element(seq, rng);
    const auto z = random_element(seq, rng);
    CHECK(add(x, y, seq) == add(y, x, seq));
    CHECK(add(add(x, y, seq), z, seq) == add(x, add(y, z, seq), seq));
    CHECK(add(x, neg(x), seq).is_zero());

    // canonicalize is idempotent
    const auto again = canonicalize(x.numerator(), x.level(), seq);
    CHECK(again == x);
  }
}

TEST_CASE("canonical form invariant") {
  const auto seq = seq_23();
  RngStream rng(5150);
  for (int i = 0; i < 2'000; ++i) {
    const auto x = random_element(seq, rng);
    if (x.level() > 0) CHECK(x.numerator() % seq.a(x.level()) != 0);
  }
}
