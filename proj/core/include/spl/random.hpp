#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "spl/image.hpp"

namespace spl {

/// Seeded generator with platform-independent output.
///
/// std::mt19937_64 is fully specified by the standard; the distributions in
/// <random> are not, so uniform doubles are built from raw bits here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Slight modulo bias is irrelevant for n << 2^64.
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

/// Image with samples drawn uniformly from [lo, hi).
[[nodiscard]] Image random_image(const Shape& shape, Rng& rng, double lo, double hi, Range range);

}  // namespace spl
