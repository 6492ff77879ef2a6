#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "lsar/constants.hpp"
#include "lsar/em_core.hpp"
#include "lsar/error.hpp"
#include "lsar/simulator.hpp"
#include "oracles.hpp"

using namespace lsar;
using lsar::testing::SceneSpec;

namespace {

double rel_diff(const EchoTensor& a, const EchoTensor& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a.data()[i] - b.data()[i]);
    den += std::norm(b.data()[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("one-way Green's function phases") {
  SceneSpec s;
  const auto free = lsar::testing::make_scene(s);
  const double k = 660.17;
  const cplx g = green_one_way(free, k, {0.0, -0.3, 0.0}, {0.0, 0.1, 0.0}, LinkSide::Transmit);
  CHECK(std::abs(g - std::polar(1.0, -k * 0.4)) < 1e-12);

  s.permittivity = 2.1;
  const auto med = lsar::testing::make_scene(s);
  const cplx gn = green_one_way(med, k, {0.0, -0.3, 0.0}, {0.0, 0.1, 0.0}, LinkSide::Receive);
  CHECK(std::abs(gn - std::polar(1.0, -(k * 0.3 + std::sqrt(2.1) * k * 0.1))) < 1e-12);

  const Point3 ant{0.02, -0.3, 0.01};
  const Point3 tgt{-0.09, 0.07, 0.05};
  const auto o = lsar::testing::fermat_oracle(ant, tgt, 2.1);
  const cplx go = green_one_way(med, k, ant, tgt, LinkSide::Transmit);
  const double expected = -(k * o.R_air + std::sqrt(2.1) * k * o.R_med);
  CHECK(std::abs(go - std::polar(1.0, expected)) < 1e-9);
}

TEST_CASE("single free-space target: magnitude and phase of every sample") {
  SceneSpec s;
  s.y_start = -0.02;
  const auto scene = lsar::testing::make_scene(s);
  const Point3 p = lsar::testing::voxel_center(scene, 3, 2, 5);
  const cplx sigma{0.6, -0.8};
  const auto echo = lsar::testing::point_echo(scene, p, sigma);
  const auto& a = scene.config().arrays;
  double worst = 0.0;
  for (std::size_t t = 0; t < scene.n_tx(); ++t) {
    for (std::size_t r = 0; r < scene.n_rx(); ++r) {
      for (std::size_t z = 0; z < scene.n_scan(); ++z) {
        const double rt = std::sqrt(std::pow(p.x - a.tx_x[t], 2) + std::pow(p.y - a.aperture_y, 2) +
                                    std::pow(p.z - a.scan_z[z], 2));
        const double rr = std::sqrt(std::pow(p.x - a.rx_x[r], 2) + std::pow(p.y - a.aperture_y, 2) +
                                    std::pow(p.z - a.scan_z[z], 2));
        for (std::size_t f = 0; f < scene.n_freq(); ++f) {
          const double k = scene.wavenumbers()[f];
          const cplx v = echo(t, r, z, f);
          CHECK(std::abs(v) == doctest::Approx(kFreeSpaceImpedance * k * std::abs(sigma)).epsilon(1e-12));
          const cplx expected = kFreeSpaceImpedance * k * sigma * std::polar(1.0, -k * (rt + rr) + kPi / 2.0);
          worst = std::max(worst, std::abs(v - expected) / std::abs(expected));
        }
      }
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("zero reflectivity gives a zero echo") {
  const auto scene = lsar::testing::make_scene(SceneSpec{});
  const auto echo = lsar::testing::point_echo(scene, lsar::testing::voxel_center(scene, 1, 1, 1), {0.0, 0.0});
  for (const auto& v : echo.values()) CHECK(v == cplx{});
}

TEST_CASE("superposition and scaling") {
  SceneSpec s;
  s.permittivity = 2.1;
  const auto scene = lsar::testing::make_scene(s);
  const PointTarget a{lsar::testing::voxel_center(scene, 2, 1, 3), {1.0, 0.5}};
  const PointTarget b{lsar::testing::voxel_center(scene, 6, 3, 4), {-0.3, 0.2}};
  const std::vector<PointTarget> both{a, b};
  const auto ya = synthesize_echo(scene, std::span(&a, 1));
  const auto yb = synthesize_echo(scene, std::span(&b, 1));
  const auto yab = synthesize_echo(scene, both);
  EchoTensor sum = ya;
  for (std::size_t i = 0; i < sum.size(); ++i) sum.data()[i] += yb.data()[i];
  CHECK(rel_diff(yab, sum) < 1e-12);

  const cplx alpha{0.3, -1.7};
  std::vector<PointTarget> scaled = both;
  for (auto& t : scaled) t.reflectivity *= alpha;
  const auto ys = synthesize_echo(scene, scaled);
  EchoTensor expect = yab;
  for (auto& v : expect.values()) v *= alpha;
  CHECK(rel_diff(ys, expect) < 1e-14);
}

TEST_CASE("noise: sentinel, determinism and power") {
  SceneSpec s;
  s.n_rx = 16;
  s.n_scan = 16;
  s.n_freq = 16;
  s.nx = 16;
  s.nz = 16;
  const auto scene = lsar::testing::make_scene(s);
  const auto clean = lsar::testing::point_echo(scene, lsar::testing::voxel_center(scene, 8, 1, 8));
  REQUIRE(clean.size() >= 10000);

  const auto same = add_noise(clean, kNoNoise, 5);
  CHECK(std::equal(same.values().begin(), same.values().end(), clean.values().begin()));

  const auto n1 = add_noise(clean, 0.0, 42);
  const auto n2 = add_noise(clean, 0.0, 42);
  CHECK(std::equal(n1.values().begin(), n1.values().end(), n2.values().begin()));
  const auto n3 = add_noise(clean, 0.0, 43);
  CHECK_FALSE(std::equal(n1.values().begin(), n1.values().end(), n3.values().begin()));

  double ps = 0.0, pn = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    ps += std::norm(clean.data()[i]);
    pn += std::norm(n1.data()[i] - clean.data()[i]);
  }
  CHECK(std::abs(pn / ps - 1.0) < 0.05);
}

TEST_CASE("simulator errors and target files") {
  const auto scene = lsar::testing::make_scene(SceneSpec{});
  CHECK_THROWS_AS(synthesize_echo(scene, {}), Error);

  const auto t = parse_targets(R"({"targets": [{"position": [0, 0.01, 0.002], "reflectivity": [0.5, -1]},
                                               {"position": [0.004, 0.02, 0]}]})");
  REQUIRE(t.size() == 2);
  CHECK(t[0].reflectivity == cplx(0.5, -1.0));
  CHECK(t[1].reflectivity == cplx(1.0, 0.0));
  CHECK(t[1].position.y == 0.02);
  CHECK_THROWS_AS(parse_targets(R"([{"position": [0, 1]}])"), Error);

  const std::vector<PointTarget> outside{{{1.0, 0.0, 0.0}, {1.0, 0.0}}};
  CHECK(target_warnings(scene, outside).size() == 1);
}
