#include "lsar/em_core.hpp"

#include <cmath>
#include <string>

#include "lsar/constants.hpp"
#include "lsar/error.hpp"

namespace lsar {

double wavenumber(double frequency_hz) {
  if (!(frequency_hz > 0.0)) {
    throw Error(ErrorCode::NonPositiveFrequency, "frequency must be positive, got " + std::to_string(frequency_hz));
  }
  return 2.0 * kPi * frequency_hz / kSpeedOfLight;
}

double medium_wavenumber(double k, double permittivity) {
  if (!(permittivity >= 1.0)) throw Error(ErrorCode::BadPermittivity, "permittivity must be >= 1");
  return std::sqrt(permittivity) * k;
}

SpectralComponents spectral_components(double k, double permittivity, double k_xR, double k_z) {
  const double k_eps2 = permittivity * k * k;
  const double kz_half2 = 0.25 * k_z * k_z;
  SpectralComponents c;
  const auto root = [](double radicand, double& value, bool& evanescent) {
    if (radicand < 0.0) {
      evanescent = true;
      value = 0.0;
    } else {
      value = std::sqrt(radicand);
    }
  };
  root(k * k - kz_half2, c.k_xYT, c.evanescent_xYT);
  root(k_eps2 - kz_half2, c.k_xyT, c.evanescent_xyT);
  root(k * k - k_xR * k_xR - kz_half2, c.k_yR0, c.evanescent_yR0);
  root(k_eps2 - k_xR * k_xR - kz_half2, c.k_yR1, c.evanescent_yR1);
  return c;
}

double solve_crossing_offset(double d, double air_depth, double med_depth, double permittivity,
                             const RefractionOptions& options, int* iterations) {
  if (iterations) *iterations = 0;
  if (d <= 0.0) return 0.0;
  if (med_depth <= 0.0) return d;  // target on the interface
  const double n = std::sqrt(permittivity);
  const double a2 = air_depth * air_depth;
  const double b2 = med_depth * med_depth;

  // Derivative of the optical path s -> sqrt(s^2+a^2) + n sqrt((d-s)^2+b^2);
  // monotone increasing on [0, d], negative at 0 and non-negative at d.
  const auto slope = [&](double s) {
    const double u = d - s;
    return s / std::sqrt(s * s + a2) - n * u / std::sqrt(u * u + b2);
  };
  const auto curvature = [&](double s) {
    const double u = d - s;
    const double ra2 = s * s + a2;
    const double rm2 = u * u + b2;
    return a2 / (ra2 * std::sqrt(ra2)) + n * b2 / (rm2 * std::sqrt(rm2));
  };

  double lo = 0.0;
  double hi = d;
  int it = 0;
  while (hi - lo > options.tolerance) {
    if (it >= options.max_iterations) {
      throw Error(ErrorCode::NoConvergence, "refraction bisection did not reach tolerance");
    }
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++it;
  }

  double s = 0.5 * (lo + hi);
  for (int polish = 0; polish < 4; ++polish) {
    const double g = slope(s);
    if (g == 0.0) break;
    const double next = s - g / curvature(s);
    if (!(next >= lo && next <= hi) || next == s) break;
    s = next;
  }
  if (iterations) *iterations = it;
  return s;
}

RefractionSolution solve_refraction(const Point3& p_air, const Point3& p_med, double permittivity,
                                    const RefractionOptions& options) {
  if (!(permittivity >= 1.0)) throw Error(ErrorCode::BadPermittivity, "permittivity must be >= 1");
  if (!(p_air.y < 0.0) || !(p_med.y >= 0.0)) {
    throw Error(ErrorCode::SameSide, "points must lie on opposite sides of the interface y = 0");
  }
  const double hx = p_med.x - p_air.x;
  const double hz = p_med.z - p_air.z;
  const double d = std::hypot(hx, hz);

  RefractionSolution sol;
  const double s = solve_crossing_offset(d, -p_air.y, p_med.y, permittivity, options, &sol.iterations);
  const double frac = d > 0.0 ? s / d : 0.0;
  sol.x_b = p_air.x + frac * hx;
  sol.z_b = p_air.z + frac * hz;
  sol.R_air = std::sqrt((p_air.x - sol.x_b) * (p_air.x - sol.x_b) + p_air.y * p_air.y +
                        (p_air.z - sol.z_b) * (p_air.z - sol.z_b));
  sol.R_med = std::sqrt((sol.x_b - p_med.x) * (sol.x_b - p_med.x) + p_med.y * p_med.y +
                        (sol.z_b - p_med.z) * (sol.z_b - p_med.z));
  return sol;
}

double optical_path(const Point3& antenna, const Point3& target, double permittivity) {
  if (permittivity == 1.0) {
    const double dx = target.x - antenna.x;
    const double dy = target.y - antenna.y;
    const double dz = target.z - antenna.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  }
  const auto sol = solve_refraction(antenna, target, permittivity);
  return sol.R_air + std::sqrt(permittivity) * sol.R_med;
}

RefractionCache::RefractionCache(double aperture_y, double permittivity)
    : air_depth_(-aperture_y), permittivity_(permittivity), n_med_(std::sqrt(permittivity)) {
  if (!(permittivity >= 1.0)) throw Error(ErrorCode::BadPermittivity, "permittivity must be >= 1");
  if (!(aperture_y < 0.0)) throw Error(ErrorCode::SameSide, "aperture must lie at y < 0");
}

double RefractionCache::optical_path(const Point3& antenna, const Point3& target) {
  const double d = std::hypot(target.x - antenna.x, target.z - antenna.z);
  if (permittivity_ == 1.0) {
    const double dy = target.y - antenna.y;
    return std::sqrt(d * d + dy * dy);
  }
  if (!(target.y >= 0.0)) throw Error(ErrorCode::SameSide, "target must lie in the medium (y >= 0)");

  const Key key{std::llround(d / kCacheQuantum), std::llround(target.y / kCacheQuantum)};
  auto it = offsets_.find(key);
  if (it == offsets_.end()) {
    const double dq = static_cast<double>(key.d) * kCacheQuantum;
    const double yq = static_cast<double>(key.y) * kCacheQuantum;
    it = offsets_.emplace(key, solve_crossing_offset(dq, air_depth_, yq, permittivity_)).first;
  }
  const double s = std::min(it->second, d);
  const double u = d - s;
  return std::sqrt(s * s + air_depth_ * air_depth_) + n_med_ * std::sqrt(u * u + target.y * target.y);
}

}  // namespace lsar
