#pragma once

#include <cstdint>
#include <random>

namespace solwalk {

/// Seeded deterministic stream. Conversions to doubles and bounded integers
/// are implemented here rather than with std::uniform_*_distribution so a
/// given seed produces the same draws on every platform and toolchain.
///
/// Worker streams use the documented scheme base_seed + worker_index; every
/// parallel operation assigns workers fixed slices, so results depend only
/// on (seed, workers).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  static RngStream worker_stream(std::uint64_t base_seed, std::uint64_t worker_index) {
    return RngStream(base_seed + worker_index);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unbiased integer in [0, n), n >= 1, by rejection.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  /// Fair +1 / -1.
  int sign() { return (engine_() & 1u) ? +1 : -1; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace solwalk
