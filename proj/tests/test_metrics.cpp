#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "lsar/error.hpp"
#include "lsar/metrics.hpp"
#include "lsar/operators.hpp"

using namespace lsar;

TEST_CASE("entropy closed forms") {
  ImageVolume delta({4, 3, 5});
  delta(2, 1, 3) = {0.0, 3.0};
  CHECK(image_entropy(delta) == 0.0);

  ImageVolume uniform({4, 3, 5});
  for (std::size_t i = 0; i < uniform.size(); ++i) uniform.data()[i] = std::polar(2.0, 0.1 * static_cast<double>(i));
  CHECK(image_entropy(uniform) == doctest::Approx(std::log2(60.0)).epsilon(1e-12));

  const std::vector<cplx> two{{3.0, 0.0}, {0.0, 4.0}};
  const double expected = -(0.36 * std::log2(0.36) + 0.64 * std::log2(0.64));
  CHECK(image_entropy(two) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(image_entropy(two) == doctest::Approx(0.9427).epsilon(1e-4));

  CHECK(std::isinf(image_entropy(ImageVolume({2, 2, 2}))));
}

TEST_CASE("entropy is scale invariant and bounded") {
  ImageVolume img({5, 4, 6});
  lsar::testing::fill_random(img, 12);
  const double h = image_entropy(img);
  CHECK(h >= 0.0);
  CHECK(h <= std::log2(static_cast<double>(img.size())));
  // Exact for powers of two; general complex factors agree to rounding.
  ImageVolume scaled = img;
  for (auto& v : scaled.values()) v *= 4.0;
  CHECK(image_entropy(scaled) == h);
  for (auto& v : scaled.values()) v *= cplx(0.3, -2.2);
  CHECK(image_entropy(scaled) == doctest::Approx(h).epsilon(1e-13));
}

TEST_CASE("peak location and tie-break") {
  ImageVolume img({3, 2, 2});
  img(1, 1, 0) = 5.0;
  CHECK(peak_location(img).voxel == std::array<std::size_t, 3>{1, 1, 0});
  CHECK(peak_location(img).magnitude == 5.0);

  ImageVolume tie({2, 1, 1});
  tie(0, 0, 0) = 1.0;
  tie(1, 0, 0) = cplx(0.0, 1.0);
  CHECK(peak_location(tie).voxel == std::array<std::size_t, 3>{0, 0, 0});

  try {
    peak_location(ImageVolume{});
    FAIL("expected EmptyImage");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyImage);
  }
}

TEST_CASE("max projection dB mapping") {
  ImageVolume uniform({3, 4, 2});
  for (auto& v : uniform.values()) v = 2.0;
  const auto pu = max_projection(uniform, ImageAxis::Y, 30.0);
  CHECK(pu.rows == 3);
  CHECK(pu.cols == 2);
  for (double d : pu.db) CHECK(d == 0.0);

  ImageVolume delta({3, 4, 5});
  delta(1, 2, 3) = 7.0;
  const auto pd = max_projection(delta, ImageAxis::Y, 30.0);
  int zeros = 0;
  for (std::size_t r = 0; r < pd.rows; ++r) {
    for (std::size_t c = 0; c < pd.cols; ++c) {
      if (r == 1 && c == 3) {
        CHECK(pd.at(r, c) == 0.0);
        ++zeros;
      } else {
        CHECK(pd.at(r, c) == -30.0);
      }
    }
  }
  CHECK(zeros == 1);

  ImageVolume two({2, 1, 1});
  two(0, 0, 0) = 1.0;
  two(1, 0, 0) = 0.1;
  const auto p2 = max_projection(two, ImageAxis::Z, 30.0);
  CHECK(p2.at(1, 0) == doctest::Approx(-20.0).epsilon(1e-12));

  CHECK_THROWS_AS(max_projection(ImageVolume{}, ImageAxis::Y, 30.0), Error);
  CHECK_THROWS_AS(max_projection(delta, ImageAxis::Y, 0.0), Error);
}

TEST_CASE("projection of a three-point scene has three peaks") {
  // Short standoff so the lateral resolution separates the targets cleanly.
  lsar::testing::SceneSpec s;
  s.n_tx = 4;
  s.n_rx = 24;
  s.nx = 24;
  s.n_scan = 24;
  s.nz = 24;
  s.ny = 8;
  s.n_freq = 12;
  s.aperture_y = -0.1;
  for (double eps : {1.0, 2.1}) {
    s.permittivity = eps;
    s.y_start = eps > 1.0 ? 0.0 : -0.03;
    const auto scene = lsar::testing::make_scene(s);
    const std::vector<PointTarget> targets{{lsar::testing::voxel_center(scene, 6, 2, 7), {1.0, 0.0}},
                                           {lsar::testing::voxel_center(scene, 18, 4, 11), {1.0, 0.0}},
                                           {lsar::testing::voxel_center(scene, 12, 6, 18), {1.0, 0.0}}};
    const auto image = dtfda_reconstruct(synthesize_echo(scene, targets), scene);
    const auto proj = max_projection(image, ImageAxis::Y, 30.0);
    CHECK(count_local_maxima(proj, -20.0) == 3);
  }
}

TEST_CASE("sections and report text") {
  ImageVolume img({2, 3, 4});
  img(1, 2, 3) = 2.0;
  const auto sec = extract_section(img, ImageAxis::Y, 2);
  REQUIRE(sec.size() == 8);
  CHECK(sec[1 * 4 + 3] == cplx(2.0));
  CHECK_THROWS_AS(extract_section(img, ImageAxis::Y, 3), Error);

  MetricsReport r;
  r.image_entropy = 1.5;
  r.peak = peak_location(img);
  const auto text = r.to_text();
  CHECK(text.find("image_entropy_bits=1.5\n") != std::string::npos);
  CHECK(text.find("peak_x=1\npeak_y=2\npeak_z=3\n") != std::string::npos);
  CHECK(parse_axis("z") == ImageAxis::Z);
  CHECK_THROWS_AS(parse_axis("w"), Error);
}
