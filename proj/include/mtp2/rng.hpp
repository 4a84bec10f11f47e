#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mtp2 {

/// Seedable generator with a pinned output stream: mt19937_64 supplies the
/// bits, uniforms take the top 53 of them, and normals go through an
/// explicit Box-Muller map. Sequences are identical across standard
/// library implementations, which std::normal_distribution does not give.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// [0, 1)
  double uniform01() { return double(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  double normal() {
    double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// integer in [0, n), rejection-sampled to stay unbiased
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mtp2
