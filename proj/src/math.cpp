#include "rtu/math.hpp"

#include <cmath>
#include <stdexcept>

namespace rtu {

double erf_inv(double y) {
  if (y <= -1.0 || y >= 1.0) {
    if (y == 1.0) return kInfinity;
    if (y == -1.0) return -kInfinity;
    throw std::domain_error("erf_inv: argument outside (-1, 1)");
  }
  if (y == 0.0) return 0.0;

  // Winitzki's approximation as a seed, then Newton.
  const double a = 0.147;
  const double ln1my2 = std::log1p(-y * y);
  const double term = 2.0 / (M_PI * a) + ln1my2 / 2.0;
  double x = std::copysign(std::sqrt(std::sqrt(term * term - ln1my2 / a) - term), y);
  for (int i = 0; i < 4; ++i) {
    const double err = std::erf(x) - y;
    const double deriv = 2.0 / std::sqrt(M_PI) * std::exp(-x * x);
    if (deriv == 0.0) break;
    x -= err / deriv;
  }
  return x;
}

double bisect_decreasing(const std::function<double(double)>& f, double v, double lo,
                         double hi, double tol) {
  // invariant: f(lo) >= v, f(hi) < v (callers establish the bracket)
  while (hi - lo > tol && hi - lo > tol * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace rtu
