#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "solwalk/bigint.hpp"
#include "solwalk/errors.hpp"

namespace solwalk {

enum class Extension { Periodic, Constant };

/// The defining integer sequence a = (a_1, a_2, ...), all a_j > 1, given as
/// an explicit prefix plus an extension rule (repeat the prefix periodically,
/// or continue with a constant). Products a_1...a_n are cached as exact big
/// integers up to depth_cap; asking beyond the cap is a hard error.
class GroupSequence {
 public:
  static constexpr int kDefaultDepthCap = 64;

  GroupSequence(std::vector<std::int64_t> base, Extension extension,
                std::int64_t constant, int depth_cap)
      : base_(std::move(base)),
        extension_(extension),
        constant_(constant),
        depth_cap_(depth_cap) {
    if (base_.empty()) throw config_error("group sequence: base must be nonempty");
    if (depth_cap_ < static_cast<int>(base_.size()))
      throw config_error("group sequence: depth_cap below base length");
    for (auto a : base_)
      if (a <= 1) throw config_error("group sequence: all a_j must exceed 1");
    if (extension_ == Extension::Constant && constant_ <= 1)
      throw config_error("group sequence: constant extension must exceed 1");

    terms_.resize(static_cast<std::size_t>(depth_cap_) + 1);
    products_.resize(static_cast<std::size_t>(depth_cap_) + 1);
    terms_[0] = 0;  // unused; a(n) is 1-based
    products_[0] = 1;
    for (int n = 1; n <= depth_cap_; ++n) {
      terms_[static_cast<std::size_t>(n)] = term_at(n);
      products_[static_cast<std::size_t>(n)] =
          products_[static_cast<std::size_t>(n) - 1] * terms_[static_cast<std::size_t>(n)];
    }
  }

  static GroupSequence periodic(std::vector<std::int64_t> base,
                                int depth_cap = kDefaultDepthCap) {
    return GroupSequence(std::move(base), Extension::Periodic, 0, depth_cap);
  }

  /// a_j = p for every j (the H_p special case).
  static GroupSequence constant(std::int64_t p, int depth_cap = kDefaultDepthCap) {
    return GroupSequence({p}, Extension::Constant, p, depth_cap);
  }

  static GroupSequence constant_after(std::vector<std::int64_t> prefix, std::int64_t p,
                                      int depth_cap = kDefaultDepthCap) {
    return GroupSequence(std::move(prefix), Extension::Constant, p, depth_cap);
  }

  int depth_cap() const { return depth_cap_; }
  const std::vector<std::int64_t>& base() const { return base_; }
  Extension extension() const { return extension_; }
  std::int64_t extension_constant() const { return constant_; }

  /// a_n, 1-based.
  std::int64_t a(int n) const {
    check_depth(n);
    if (n < 1) throw contract_error("group sequence: index must be >= 1");
    return terms_[static_cast<std::size_t>(n)];
  }

  /// a_1 * ... * a_n as an exact integer; product(0) = 1.
  const BigInt& product(int n) const {
    check_depth(n);
    if (n < 0) throw contract_error("group sequence: product index must be >= 0");
    return products_[static_cast<std::size_t>(n)];
  }

  /// Smallest n0 such that a_{n+L} = a_n holds for all n > n0.
  int period_start() const {
    return extension_ == Extension::Periodic ? 0 : static_cast<int>(base_.size());
  }

  int period_length() const {
    return extension_ == Extension::Periodic ? static_cast<int>(base_.size()) : 1;
  }

  /// P = product over one period; products satisfy prod_{n+L} = prod_n * P
  /// for n >= period_start().
  BigInt period_product() const {
    if (extension_ == Extension::Constant) return BigInt(constant_);
    BigInt p = 1;
    for (auto a : base_) p *= a;
    return p;
  }

  std::int64_t max_term() const {
    std::int64_t m = extension_ == Extension::Constant ? constant_ : 1;
    for (auto a : base_)
      if (a > m) m = a;
    return m;
  }

  bool operator==(const GroupSequence& other) const {
    return base_ == other.base_ && extension_ == other.extension_ &&
           constant_ == other.constant_ && depth_cap_ == other.depth_cap_;
  }

 private:
  std::int64_t term_at(int n) const {
    const auto len = static_cast<int>(base_.size());
    if (n <= len) return base_[static_cast<std::size_t>(n - 1)];
    if (extension_ == Extension::Constant) return constant_;
    return base_[static_cast<std::size_t>((n - 1) % len)];
  }

  void check_depth(int n) const {
    if (n > depth_cap_)
      throw depth_error("group sequence: index " + std::to_string(n) +
                        " exceeds depth_cap " + std::to_string(depth_cap_));
  }

  std::vector<std::int64_t> base_;
  Extension extension_;
  std::int64_t constant_;
  int depth_cap_;
  std::vector<std::int64_t> terms_;
  std::vector<BigInt> products_;
};

/// An element m / (a_1...a_n) of H_a in canonical form: either level = 0, or
/// a_{level} does not divide the numerator. Immutable value type.
class RationalElement {
 public:
  RationalElement() : numerator_(0), level_(0) {}
  RationalElement(BigInt numerator, int level)
      : numerator_(std::move(numerator)), level_(level) {}

  static RationalElement zero() { return RationalElement(); }

  const BigInt& numerator() const { return numerator_; }
  int level() const { return level_; }
  bool is_zero() const { return numerator_ == 0; }

  /// Exact value as a rational number.
  BigRational value(const GroupSequence& seq) const {
    return BigRational(numerator_, seq.product(level_));
  }

  bool operator==(const RationalElement& other) const = default;

 private:
  BigInt numerator_;
  int level_;
};

/// Reduce m / (a_1...a_n): divide by a_n, a_{n-1}, ... while divisible.
inline RationalElement canonicalize(BigInt m, int level, const GroupSequence& seq) {
  if (level > seq.depth_cap())
    throw depth_error("canonicalize: level exceeds depth_cap");
  if (level < 0) throw contract_error("canonicalize: negative level");
  while (level > 0) {
    const BigInt a = seq.a(level);
    if (m % a != 0) break;
    m /= a;
    --level;
  }
  return RationalElement(std::move(m), level);
}

/// e_{+-n} = +-1 / (a_1...a_n); n = 0 gives +-1.
inline RationalElement generator(const GroupSequence& seq, int n, int sign) {
  if (n > seq.depth_cap()) throw depth_error("generator: level exceeds depth_cap");
  if (n < 0) throw contract_error("generator: negative level");
  if (sign != 1 && sign != -1) throw contract_error("generator: sign must be +-1");
  return RationalElement(BigInt(sign), n);
}

/// Group law: lift both operands to the higher level, add numerators, reduce.
inline RationalElement add(const RationalElement& x, const RationalElement& y,
                           const GroupSequence& seq) {
  const int lx = x.level(), ly = y.level();
  const int level = lx > ly ? lx : ly;
  if (level > seq.depth_cap()) throw depth_error("add: level exceeds depth_cap");
  BigInt nx = x.numerator();
  for (int m = lx + 1; m <= level; ++m) nx *= seq.a(m);
  BigInt ny = y.numerator();
  for (int m = ly + 1; m <= level; ++m) ny *= seq.a(m);
  return canonicalize(nx + ny, level, seq);
}

inline RationalElement neg(const RationalElement& x) {
  return RationalElement(-x.numerator(), x.level());
}

}  // namespace solwalk
