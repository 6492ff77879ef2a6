#include <doctest.h>

#include <cmath>
#include <random>

#include "lsar/constants.hpp"
#include "lsar/em_core.hpp"
#include "lsar/error.hpp"
#include "oracles.hpp"

using namespace lsar;

TEST_CASE("free-space wavenumber") {
  CHECK(wavenumber(31.5e9) == doctest::Approx(2.0 * kPi * 31.5e9 / 299792458.0).epsilon(1e-15));
  CHECK(wavenumber(31.5e9) == doctest::Approx(660.17).epsilon(1e-4));
  CHECK(wavenumber(43.5e9) == doctest::Approx(911.67).epsilon(1e-4));
  CHECK(wavenumber(kSpeedOfLight / (2.0 * kPi)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(wavenumber(0.0), Error);
  CHECK_THROWS_AS(wavenumber(-1.0), Error);
}

TEST_CASE("medium wavenumber") {
  CHECK(medium_wavenumber(660.17, 1.0) == 660.17);
  CHECK(medium_wavenumber(660.17, 4.0) == doctest::Approx(1320.34));
  CHECK(medium_wavenumber(660.17, 2.1) == doctest::Approx(956.67).epsilon(1e-5));
  try {
    medium_wavenumber(660.17, 0.5);
    FAIL("expected BadPermittivity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadPermittivity);
  }
}

TEST_CASE("spectral components") {
  const auto on_axis = spectral_components(500.0, 1.0, 0.0, 0.0);
  CHECK(on_axis.k_xYT == 500.0);
  CHECK(on_axis.k_xyT == 500.0);
  CHECK(on_axis.k_yR0 == 500.0);
  CHECK(on_axis.k_yR1 == 500.0);

  CHECK(spectral_components(100.0, 1.0, 0.0, 120.0).k_xYT == doctest::Approx(80.0).epsilon(1e-15));

  const auto cutoff = spectral_components(100.0, 1.0, 100.0, 0.0);
  CHECK(cutoff.k_yR0 == 0.0);
  CHECK_FALSE(cutoff.evanescent_yR0);
  const auto beyond = spectral_components(100.0, 1.0, 101.0, 0.0);
  CHECK(beyond.evanescent_yR0);
  CHECK(beyond.k_yR0 == 0.0);
  CHECK_FALSE(beyond.receive_propagating());

  // Beyond the air cutoff but inside the medium one.
  const auto med = spectral_components(100.0, 2.1, 120.0, 0.0);
  CHECK(med.evanescent_yR0);
  CHECK_FALSE(med.evanescent_yR1);
  CHECK(med.k_yR1 == doctest::Approx(std::sqrt(2.1 * 1e4 - 120.0 * 120.0)));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-900.0, 900.0);
  for (int i = 0; i < 100; ++i) {
    const auto s = spectral_components(700.0, 1.0, u(rng), u(rng));
    CHECK(s.k_xyT == s.k_xYT);
    CHECK(s.k_yR1 == s.k_yR0);
  }
}

TEST_CASE("refraction at normal incidence") {
  for (double eps : {1.0, 2.1, 4.0, 9.0}) {
    const auto r = solve_refraction({0.0, -0.3, 0.0}, {0.0, 0.1, 0.0}, eps);
    CHECK(r.x_b == 0.0);
    CHECK(r.R_air == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(r.R_med == doctest::Approx(0.1).epsilon(1e-15));
  }
}

TEST_CASE("refraction in free space follows the straight ray") {
  const auto r = solve_refraction({0.0, -0.3, 0.0}, {0.4, 0.1, 0.0}, 1.0);
  CHECK(r.x_b == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(r.R_air + r.R_med == doctest::Approx(std::sqrt(0.32)).epsilon(1e-12));
}

TEST_CASE("oblique refraction matches the brute-force oracle") {
  const Point3 air{0.0, -0.3, 0.0};
  const Point3 med{0.2, 0.08, 0.0};
  const auto r = solve_refraction(air, med, 2.1);
  const auto o = lsar::testing::fermat_oracle(air, med, 2.1);
  CHECK(std::abs(r.x_b - o.x_b) <= 1e-6);
  CHECK(r.R_air == doctest::Approx(std::hypot(r.x_b, 0.3)).epsilon(1e-12));
  CHECK(r.R_med == doctest::Approx(std::hypot(0.2 - r.x_b, 0.08)).epsilon(1e-12));
}

TEST_CASE("refraction invariants over random geometry") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-0.2, 0.2), uy(0.0, 0.15), ua(-0.5, -0.05), ue(1.0, 6.0);
  for (int i = 0; i < 300; ++i) {
    const Point3 air{ux(rng), ua(rng), ux(rng)};
    const Point3 med{ux(rng), uy(rng), ux(rng)};
    const double eps = ue(rng);
    const auto r = solve_refraction(air, med, eps);

    // Crossing between the endpoints.
    CHECK(r.x_b >= std::min(air.x, med.x) - 1e-12);
    CHECK(r.x_b <= std::max(air.x, med.x) + 1e-12);
    CHECK(r.z_b >= std::min(air.z, med.z) - 1e-12);
    CHECK(r.z_b <= std::max(air.z, med.z) + 1e-12);

    // Path lengths agree with the crossing point.
    CHECK(r.R_air == doctest::Approx(std::sqrt(std::pow(r.x_b - air.x, 2) + air.y * air.y + std::pow(r.z_b - air.z, 2)))
                         .epsilon(1e-12));
    CHECK(r.R_med == doctest::Approx(std::sqrt(std::pow(med.x - r.x_b, 2) + med.y * med.y + std::pow(med.z - r.z_b, 2)))
                         .epsilon(1e-12));

    // Snell residual.
    const double s_air = std::hypot(r.x_b - air.x, r.z_b - air.z) / r.R_air;
    const double s_med = r.R_med > 0.0 ? std::hypot(med.x - r.x_b, med.z - r.z_b) / r.R_med : 0.0;
    if (med.y > 0.0) CHECK(std::abs(s_air - std::sqrt(eps) * s_med) < 1e-9);

    // Fermat: nudging the crossing never shortens the optical path.
    const double n = std::sqrt(eps);
    const auto opl = [&](double xb, double zb) {
      return std::sqrt(std::pow(xb - air.x, 2) + air.y * air.y + std::pow(zb - air.z, 2)) +
             n * std::sqrt(std::pow(med.x - xb, 2) + med.y * med.y + std::pow(med.z - zb, 2));
    };
    const double base = opl(r.x_b, r.z_b);
    for (double dx : {-1e-4, 1e-4}) {
      CHECK(opl(r.x_b + dx, r.z_b) >= base - 1e-15);
      CHECK(opl(r.x_b, r.z_b + dx) >= base - 1e-15);
    }
  }
}

TEST_CASE("crossing moves toward the target foot as permittivity grows") {
  const Point3 air{-0.1, -0.3, 0.0};
  const Point3 med{0.15, 0.05, 0.0};
  double prev = solve_refraction(air, med, 1.0).x_b;
  for (double eps = 1.5; eps <= 10.0; eps += 0.5) {
    const double xb = solve_refraction(air, med, eps).x_b;
    CHECK(xb > prev);
    prev = xb;
  }
}

TEST_CASE("refraction errors") {
  try {
    solve_refraction({0.0, -0.3, 0.0}, {0.0, -0.1, 0.0}, 2.0);
    FAIL("expected SameSide");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SameSide);
  }
  try {
    solve_refraction({0.0, -0.3, 0.0}, {0.1, 0.1, 0.0}, 2.0, RefractionOptions{1e-12, 3});
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
  }
  CHECK_THROWS_AS(solve_refraction({0.0, -0.3, 0.0}, {0.1, 0.1, 0.0}, 0.9), Error);
}

TEST_CASE("optical path and cache") {
  const Point3 ant{0.01, -0.3, 0.02};
  const Point3 tgt{-0.03, 0.05, 0.04};
  const auto r = solve_refraction(ant, tgt, 2.1);
  CHECK(optical_path(ant, tgt, 2.1) == doctest::Approx(r.R_air + std::sqrt(2.1) * r.R_med).epsilon(1e-14));
  CHECK(optical_path(ant, tgt, 1.0) == doctest::Approx(std::sqrt(0.04 * 0.04 + 0.35 * 0.35 + 0.02 * 0.02)).epsilon(1e-15));

  RefractionCache cache(-0.3, 2.1);
  const double first = cache.optical_path(ant, tgt);
  CHECK(first == doctest::Approx(optical_path(ant, tgt, 2.1)).epsilon(1e-14));
  // Same in-plane geometry from a shifted antenna hits the same entry.
  const Point3 ant2{ant.x + 0.1, -0.3, ant.z};
  const Point3 tgt2{tgt.x + 0.1, tgt.y, tgt.z};
  CHECK(cache.optical_path(ant2, tgt2) == doctest::Approx(first).epsilon(1e-14));
  CHECK(cache.size() == 1);
}
