#ifndef LSAR_EM_CORE_HPP
#define LSAR_EM_CORE_HPP

#include <cstdint>
#include <unordered_map>

namespace lsar {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// k = 2 pi f / c. Throws NonPositiveFrequency for f <= 0.
double wavenumber(double frequency_hz);

// k_eps = sqrt(eps) k. Throws BadPermittivity for eps < 1.
double medium_wavenumber(double k, double permittivity);

// Plane-wave wavenumber components across the interface. A component whose
// radicand is negative is evanescent: its value is left at 0 and the flag set.
struct SpectralComponents {
  double k_xYT = 0.0;  // transmit leg, air
  double k_xyT = 0.0;  // transmit leg, medium
  double k_yR0 = 0.0;  // receive leg normal component, air
  double k_yR1 = 0.0;  // receive leg normal component, medium
  bool evanescent_xYT = false;
  bool evanescent_xyT = false;
  bool evanescent_yR0 = false;
  bool evanescent_yR1 = false;

  bool transmit_propagating() const noexcept { return !evanescent_xYT && !evanescent_xyT; }
  bool receive_propagating() const noexcept { return !evanescent_yR0 && !evanescent_yR1; }
};

SpectralComponents spectral_components(double k, double permittivity, double k_xR, double k_z);

struct RefractionSolution {
  double x_b = 0.0;    // interface crossing abscissa
  double z_b = 0.0;    // interface crossing z
  double R_air = 0.0;  // path length in air
  double R_med = 0.0;  // path length in the medium
  int iterations = 0;
};

struct RefractionOptions {
  double tolerance = 1e-9;  // bracket width, m
  int max_iterations = 200;
};

// Interface crossing (y = 0) of the ray from an air-side point (y < 0) to a
// point in the medium (y >= 0) obeying sin(theta_air) = sqrt(eps) sin(theta_med).
// Solved in the vertical plane through both points by bisection on the
// derivative of the optical path length, followed by bracketed Newton polishing.
RefractionSolution solve_refraction(const Point3& p_air, const Point3& p_med, double permittivity,
                                    const RefractionOptions& options = {});

// In-plane form: horizontal separation `d` >= 0, air depth `air_depth` > 0
// (= |Y|), medium depth `med_depth` >= 0. Returns the horizontal distance from
// the air point's foot to the crossing.
double solve_crossing_offset(double d, double air_depth, double med_depth, double permittivity,
                             const RefractionOptions& options = {}, int* iterations = nullptr);

// One-way optical path length R_air + sqrt(eps) R_med between an antenna and a
// target. With eps == 1 this is the straight-line distance (no solver) and the
// target may lie anywhere beyond the aperture plane.
double optical_path(const Point3& antenna, const Point3& target, double permittivity);

// Memoizes crossing offsets keyed on (horizontal separation, depth) quantized
// to 1e-12 m. Each entry is solved from its quantized key, so a lookup is a
// pure function of the key; path lengths are then re-evaluated from the exact
// geometry, where the crossing is stationary. Not thread-safe; use one per worker.
class RefractionCache {
 public:
  RefractionCache(double aperture_y, double permittivity);

  double optical_path(const Point3& antenna, const Point3& target);

  std::size_t size() const noexcept { return offsets_.size(); }

 private:
  struct Key {
    std::int64_t d;
    std::int64_t y;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return std::hash<std::int64_t>{}(k.d) ^ (std::hash<std::int64_t>{}(k.y) * 0x9e3779b97f4a7c15ULL);
    }
  };

  double air_depth_;
  double permittivity_;
  double n_med_;
  std::unordered_map<Key, double, KeyHash> offsets_;
};

inline constexpr double kCacheQuantum = 1e-12;  // m

}  // namespace lsar

#endif  // LSAR_EM_CORE_HPP
