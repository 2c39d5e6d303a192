#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace oscseg {

/// Seeded generator with fully specified output.
///
/// std::mt19937_64 is bit-exact across standard libraries, but the std
/// distributions are not, so uniform and normal deviates are derived here:
///   uniform: top 53 bits of one engine draw, scaled by 2^-53, in [0,1).
///   normal:  Box-Muller transform (basic form) on two uniforms, emitting the
///            cosine branch first and caching the sine branch.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // 1 - u keeps the log argument in (0,1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Unbiased index in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return draw % n;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace oscseg
