#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

namespace rtu {

/// Distinguished runtime value for runs that never finish.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Inverse of std::erf on (-1, 1), via Newton refinement of a rational seed.
double erf_inv(double y);

/// Standard normal quantile.
inline double normal_quantile(double p) { return std::sqrt(2.0) * erf_inv(2.0 * p - 1.0); }

/// Largest x in [lo, hi] with f(x) >= v, for nonincreasing f. Bisection to
/// absolute tolerance tol on x.
double bisect_decreasing(const std::function<double(double)>& f, double v, double lo,
                         double hi, double tol = 1e-13);

/// Deterministic seeded random source. All distribution sampling in this
/// library goes through uniform(), so draws are reproducible across platforms
/// for a fixed seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  /// Uniform draw in (0, 1].
  double uniform() {
    const std::uint64_t bits = next() >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace rtu
