// Scene builders shared by the unit tests and the acceptance runner.
#ifndef LSAR_TESTS_FIXTURES_HPP
#define LSAR_TESTS_FIXTURES_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lsar/scene.hpp"
#include "lsar/simulator.hpp"

namespace lsar::testing {

struct SceneSpec {
  std::size_t n_tx = 3, n_rx = 8, n_scan = 8, n_freq = 6;
  std::size_t nx = 8, ny = 4, nz = 8;
  double permittivity = 1.0;
  double rx_pitch = 0.004;
  double scan_pitch = 0.004;
  double f_min = 31.5e9, f_max = 43.5e9;
  double aperture_y = -0.3;
  double y_start = 0.0;
  double y_step = 0.0;  // 0 selects the range-resolution step
  Taper taper = Taper::None;
};

inline std::vector<double> centered(std::size_t n, double pitch) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * pitch;
  return v;
}

// Transmitters spread non-uniformly across the receiver span.
inline std::vector<double> spread_tx(std::size_t n, double span) {
  std::vector<double> v(n);
  if (n == 1) return {0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n - 1) - 0.5;
    v[i] = span * (u + 0.15 * u * u * u);
  }
  return v;
}

inline SceneConfig make_config(const SceneSpec& s) {
  SceneConfig c;
  c.medium.permittivity = s.permittivity;
  c.arrays.rx_x = centered(s.n_rx, s.rx_pitch);
  c.arrays.tx_x = spread_tx(s.n_tx, s.rx_pitch * static_cast<double>(s.n_rx - 1));
  c.arrays.scan_z = centered(s.n_scan, s.scan_pitch);
  c.arrays.aperture_y = s.aperture_y;
  c.sweep = {s.f_min, s.f_max, s.n_freq};
  c.grid.x = centered(s.nx, s.rx_pitch);
  c.grid.z = centered(s.nz, s.scan_pitch);
  const double dy = s.y_step > 0.0 ? s.y_step : default_depth_step(c.sweep, s.permittivity);
  c.grid.y = uniform_axis(s.y_start, dy, s.ny);
  c.taper = s.taper;
  return c;
}

inline ValidatedScene make_scene(const SceneSpec& s) { return validate(make_config(s)); }

inline Point3 voxel_center(const ValidatedScene& scene, std::size_t ix, std::size_t iy, std::size_t iz) {
  const auto& g = scene.config().grid;
  return {g.x[ix], g.y[iy], g.z[iz]};
}

inline EchoTensor point_echo(const ValidatedScene& scene, const Point3& p, cplx sigma = {1.0, 0.0}) {
  const PointTarget t{p, sigma};
  return synthesize_echo(scene, std::span<const PointTarget>(&t, 1));
}

template <typename T>
void fill_random(T& tensor, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& v : tensor.values()) {
    const double re = g(rng);
    v = {re, g(rng)};
  }
}

// Scenes shared by the solver property checks: free space and in-medium,
// noiseless and noisy, single and multi-target.
struct FixtureScene {
  std::string name;
  ValidatedScene scene;
  EchoTensor echo;
};

inline std::vector<FixtureScene> fixture_set() {
  std::vector<FixtureScene> out;
  const auto add = [&](std::string name, const SceneSpec& s, const std::vector<std::array<std::size_t, 3>>& voxels,
                       double snr_db, std::uint64_t seed) {
    auto scene = make_scene(s);
    std::vector<PointTarget> targets;
    for (const auto& v : voxels) targets.push_back({voxel_center(scene, v[0], v[1], v[2]), {1.0, 0.0}});
    auto echo = add_noise(synthesize_echo(scene, targets), snr_db, seed);
    out.push_back({std::move(name), std::move(scene), std::move(echo)});
  };

  SceneSpec small;
  add("small free-space", small, {{3, 1, 4}}, kNoNoise, 1);

  SceneSpec small_med = small;
  small_med.permittivity = 2.1;
  add("small in-medium", small_med, {{4, 2, 3}, {2, 1, 6}}, 30.0, 2);

  SceneSpec sparse;
  sparse.n_tx = 4;
  sparse.n_rx = 16;
  sparse.nx = 16;
  sparse.n_scan = 16;
  sparse.nz = 16;
  sparse.ny = 8;
  sparse.n_freq = 12;
  sparse.y_start = -0.03;
  add("three-point free-space", sparse, {{4, 2, 5}, {11, 4, 10}, {7, 6, 12}}, 25.0, 3);

  SceneSpec medium = sparse;
  medium.nx = 24;
  medium.n_scan = 24;
  medium.nz = 24;
  medium.ny = 10;
  medium.permittivity = 2.1;
  medium.y_step = 0.006;
  medium.y_start = 0.0;
  add("four-point in-medium", medium, {{6, 2, 8}, {15, 5, 17}, {10, 7, 5}, {18, 3, 12}}, 25.0, 4);
  return out;
}

}  // namespace lsar::testing

#endif  // LSAR_TESTS_FIXTURES_HPP
