// Independent reference computations used to check the library.
#ifndef LSAR_TESTS_ORACLES_HPP
#define LSAR_TESTS_ORACLES_HPP

#include <cmath>

#include "lsar/em_core.hpp"

namespace lsar::testing {

struct FermatCrossing {
  double x_b, z_b;
  double R_air, R_med;
};

// Brute-force Fermat minimizer: scans the horizontal offset s along the line
// joining the two feet at `resolution`, then refines the best cell by
// ternary search. Works directly with 1 * R_air + sqrt(eps) * R_med.
inline FermatCrossing fermat_oracle(const Point3& air, const Point3& med, double eps, double resolution = 1e-7) {
  const double hx = med.x - air.x;
  const double hz = med.z - air.z;
  const double d = std::hypot(hx, hz);
  const double a = -air.y;
  const double b = med.y;
  const double n = std::sqrt(eps);
  const auto cost = [&](double s) { return std::sqrt(s * s + a * a) + n * std::sqrt((d - s) * (d - s) + b * b); };

  double best_s = 0.0;
  double best = cost(0.0);
  const auto steps = static_cast<long long>(std::ceil(d / resolution));
  for (long long i = 1; i <= steps; ++i) {
    const double s = std::min(d, static_cast<double>(i) * resolution);
    const double c = cost(s);
    if (c < best) {
      best = c;
      best_s = s;
    }
  }
  double lo = std::max(0.0, best_s - resolution);
  double hi = std::min(d, best_s + resolution);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (cost(m1) < cost(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  const double s = 0.5 * (lo + hi);
  const double ux = d > 0.0 ? hx / d : 0.0;
  const double uz = d > 0.0 ? hz / d : 0.0;
  return {air.x + s * ux, air.z + s * uz, std::sqrt(s * s + a * a), std::sqrt((d - s) * (d - s) + b * b)};
}

}  // namespace lsar::testing

#endif  // LSAR_TESTS_ORACLES_HPP
