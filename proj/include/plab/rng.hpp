#pragma once

#include <cmath>
#include <cstdint>

#include "plab/types.hpp"

namespace plab::rng {

// Deterministic counter-keyed random stream (splitmix64 core). Every Monte
// Carlo trial derives its own stream from (seed, point, trial), so results
// do not depend on thread scheduling. Gaussians use the Marsaglia polar
// method, which is fully specified and portable across libstdc++ versions
// (std::normal_distribution is not).
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static Stream keyed(std::uint64_t seed, std::uint64_t point, std::uint64_t trial) {
    std::uint64_t s = mix(seed);
    s = mix(s ^ (0xA24BAED4963EE407ULL + point));
    s = mix(s ^ (0x9FB21C651E98DF25ULL + trial));
    return Stream(s);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], inclusive, unbiased via rejection.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return lo + static_cast<int>(v % span);
  }

  // Standard normal.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  // Circularly symmetric complex Gaussian with E|z|^2 = total_var.
  cplx cgaussian(double total_var) {
    const double s = std::sqrt(total_var / 2.0);
    return {s * gaussian(), s * gaussian()};
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace plab::rng
