#include <cmath>

#include "doctest.h"
#include "liouwalk/lattice.hpp"

using namespace liouwalk;

TEST_CASE("site indexing is row-major and wraps in both directions") {
  const LatticeSpec spec(4, 3);
  CHECK(spec.site(0, 0) == 0);
  CHECK(spec.site(1, 0) == 3);
  CHECK(spec.site(2, 2) == 8);
  CHECK(spec.site(-1, 0) == spec.site(3, 0));
  CHECK(spec.site(4, -1) == spec.site(0, 2));
  for (int s = 0; s < spec.sites(); ++s) {
    const auto [ix, iy] = spec.coords(s);
    CHECK(spec.site(ix, iy) == s);
  }
}

TEST_CASE("neighbor steps invert and wrap") {
  const LatticeSpec spec(5, 4);
  for (int s = 0; s < spec.sites(); ++s)
    for (int mu = 0; mu < 2; ++mu) {
      CHECK(spec.neighbor(spec.neighbor(s, mu, +1), mu, -1) == s);
      CHECK(spec.neighbor(s, mu, +5 * 4) == spec.neighbor(s, mu, 0));
    }
  CHECK(spec.neighbor(spec.site(4, 0), 0, +1) == spec.site(0, 0));
  CHECK(spec.neighbor(spec.site(0, 3), 1, +1) == spec.site(0, 0));
}

TEST_CASE("minimum-image distance respects periodicity and spacing") {
  const LatticeSpec spec(8, 8, 0.5);
  CHECK(spec.min_image_dist2(spec.site(0, 0), spec.site(7, 7)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(spec.min_image_dist2(spec.site(0, 0), spec.site(4, 0)) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(spec.min_image_dist2(spec.site(3, 2), spec.site(3, 2)) == 0.0);
}

TEST_CASE("lattice and field constructors reject bad arguments") {
  CHECK_THROWS_AS(LatticeSpec(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(LatticeSpec(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(LatticeSpec(4, 4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(LatticeSpec(4, 4, 1.0, -1), std::invalid_argument);
  CHECK_THROWS_AS(LatticeSpec(4, 4, 1.0, 2, 0.0), std::invalid_argument);
  const LatticeSpec spec(3, 3);
  CHECK_THROWS_AS(ScalarField(spec, std::vector<double>(8, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(VectorField(spec, std::vector<double>(9, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(require_finite({1.0, std::nan("")}, "probe"), std::invalid_argument);
}

TEST_CASE("gradient and divergence are negative adjoints") {
  const LatticeSpec spec(6, 5, 0.7);
  ScalarField f(spec);
  VectorField v(spec);
  for (int s = 0; s < spec.sites(); ++s) {
    f.at(s) = std::sin(1.7 * s) + 0.3 * s;
    v.at(0, s) = std::cos(0.9 * s);
    v.at(1, s) = std::sin(2.3 * s + 1.0);
  }
  const VectorField gf = gradient(f);
  const ScalarField dv = divergence(v);
  double inner_grad = 0.0, inner_div = 0.0, scale = 0.0;
  for (int s = 0; s < spec.sites(); ++s) {
    inner_grad += v.at(0, s) * gf.at(0, s) + v.at(1, s) * gf.at(1, s);
    inner_div += dv.at(s) * f.at(s);
    scale += std::abs(v.at(0, s) * gf.at(0, s)) + std::abs(dv.at(s) * f.at(s));
  }
  CHECK(std::abs(inner_grad + inner_div) <= 1e-13 * scale);
}

TEST_CASE("laplacian equals divergence of gradient and has exact plane-wave eigenvalues") {
  const LatticeSpec spec(8, 8, 0.5);
  ScalarField f(spec);
  for (int s = 0; s < spec.sites(); ++s) f.at(s) = std::cos(3.1 * s) * (1 + s % 3);
  const ScalarField lap = laplacian(f);
  const ScalarField divgrad = divergence(gradient(f));
  for (int s = 0; s < spec.sites(); ++s)
    CHECK(lap.at(s) == doctest::Approx(divgrad.at(s)).epsilon(1e-14));

  // plane wave with wave numbers (1, 2); eigenvalue frozen from
  // -(4/a^2) (sin^2(pi kx/nx) + sin^2(pi ky/ny))
  const double expected = -10.34314575050762;
  ScalarField wave(spec);
  const double pi = 3.14159265358979323846;
  for (int s = 0; s < spec.sites(); ++s) {
    const auto [ix, iy] = spec.coords(s);
    wave.at(s) = std::cos(2.0 * pi * (1.0 * ix + 2.0 * iy) / 8.0);
  }
  const ScalarField lw = laplacian(wave);
  for (int s = 0; s < spec.sites(); ++s)
    CHECK(lw.at(s) == doctest::Approx(expected * wave.at(s)).epsilon(1e-12));
}

TEST_CASE("curl annihilates gradients") {
  const LatticeSpec spec(7, 6, 1.3);
  ScalarField f(spec);
  for (int s = 0; s < spec.sites(); ++s) f.at(s) = std::sin(0.8 * s) + 0.1 * (s % 5);
  const ScalarField c = curl(gradient(f));
  for (int s = 0; s < spec.sites(); ++s) CHECK(std::abs(c.at(s)) <= 1e-13);
}

TEST_CASE("curl of a single link value lands on exactly two plaquettes") {
  const LatticeSpec spec(5, 5, 0.5);
  VectorField v(spec);
  const int s = spec.site(2, 3);
  v.at(0, s) = 1.25;  // x-component on the forward link from s
  const ScalarField c = curl(v);
  for (int t = 0; t < spec.sites(); ++t) {
    if (t == s)
      CHECK(c.at(t) == doctest::Approx(1.25 / 0.5).epsilon(1e-15));
    else if (t == spec.neighbor(s, 1, -1))
      CHECK(c.at(t) == doctest::Approx(-1.25 / 0.5).epsilon(1e-15));
    else
      CHECK(c.at(t) == 0.0);
  }
}
