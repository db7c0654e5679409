#include <cmath>

#include "doctest.h"
#include "liouwalk/diffusion.hpp"
#include "liouwalk/lattice.hpp"
#include "liouwalk/rng.hpp"

using namespace liouwalk;

TEST_CASE("plane kernel spot values") {
  // frozen from exp(-r^2/(4 g t)) / (4 pi g t) at 17 digits
  CHECK(free_kernel_value(1.0, 0.0, 0.0, 1.0) ==
        doctest::Approx(0.079577471545947668).epsilon(1e-15));
  CHECK(free_kernel_value(0.5, 1.0, 2.0, 2.0) ==
        doctest::Approx(0.022799327319919294).epsilon(1e-15));
  CHECK(free_kernel_value(2.0, 0.75, -1.5, 0.3) ==
        doctest::Approx(0.041086584448748208).epsilon(1e-15));
}

TEST_CASE("site kernel uses the minimum image and rejects t <= 0") {
  const LatticeSpec spec(8, 8, 1.0);
  const double via_sites = free_kernel_exact(spec, 0.7, spec.site(7, 0), spec.site(0, 0), 1.3);
  CHECK(via_sites == doctest::Approx(free_kernel_value(0.7, 1.0, 0.0, 1.3)).epsilon(1e-15));
  CHECK_THROWS_AS(free_kernel_exact(spec, 0.0, 0, 1, 1.0), std::domain_error);
  CHECK_THROWS_AS(free_kernel_exact(spec, -1.0, 0, 1, 1.0), std::domain_error);
}

TEST_CASE("periodic kernel dominates the single image and carries unit mass") {
  const LatticeSpec spec(16, 16, 0.25);
  const int x0 = spec.site(8, 8);
  const double t = 0.3, g = 1.0;
  double mass = 0.0;
  for (int s = 0; s < spec.sites(); ++s) {
    const double per = free_kernel_periodic(spec, t, s, x0, g);
    CHECK(per >= free_kernel_exact(spec, t, s, x0, g));
    mass += per * spec.a * spec.a;
  }
  // the site sum is a trapezoid rule for a smooth periodic density, so it
  // reproduces the integral (one) to spectral accuracy
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("delta source injects exactly unit mass into slice zero") {
  const LatticeSpec spec(6, 6, 0.5, 9, 0.05);
  const int x0 = spec.site(2, 4);
  const SpaceTimeField src = delta_source(spec, x0);
  for (int k = 0; k < spec.nt; ++k)
    for (int s = 0; s < spec.sites(); ++s) {
      if (k == 0 && s == x0)
        CHECK(src.at(k, s) == doctest::Approx(1.0 / (0.25 * 0.05)).epsilon(1e-15));
      else
        CHECK(src.at(k, s) == 0.0);
    }
  CHECK_THROWS_AS(delta_source(spec, -1), std::invalid_argument);
  CHECK_THROWS_AS(delta_source(spec, 0, 9), std::invalid_argument);
}

TEST_CASE("free evolution conserves total mass on every slice") {
  const LatticeSpec spec(8, 8, 0.5, 12, 0.05);  // 4 g dt / a^2 = 0.8
  Couplings c;
  const SpaceTimeField psi = evolve(delta_source(spec, spec.site(3, 3)), VectorField(spec), c);
  for (int k = 0; k < spec.nt; ++k)
    CHECK(canonical_z(psi.slice(k)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evolution rejects unstable time steps but allows the marginal one") {
  Couplings c;  // g = 1
  const LatticeSpec marginal(4, 4, 1.0, 3, 0.25);
  CHECK_NOTHROW(evolve(delta_source(marginal, 0), VectorField(marginal), c));
  const LatticeSpec unstable(4, 4, 1.0, 3, 0.2501);
  CHECK_THROWS_WITH_AS(evolve(delta_source(unstable, 0), VectorField(unstable), c),
                       doctest::Contains("stability bound"), std::invalid_argument);
}

TEST_CASE("zero background reduces both evolutions to the same free flow") {
  const LatticeSpec spec(6, 6, 1.0, 8, 0.2);
  Couplings c;
  c.b = 0.9;  // must be inert when the background vanishes
  const SpaceTimeField src = delta_source(spec, spec.site(1, 5));
  const SpaceTimeField via_links = evolve(src, VectorField(spec), c);
  const SpaceTimeField via_similarity = evolve_similarity(src, ScalarField(spec), c);
  for (size_t i = 0; i < via_links.values.size(); ++i)
    CHECK(via_links.values[i] == doctest::Approx(via_similarity.values[i]).epsilon(1e-14));
}

TEST_CASE("link-coupled evolution approaches the similarity form as the mesh refines") {
  // the midpoint link coupling differs from the exact similarity hops at
  // O(a^2) per link, so halving a should shrink the gap by about 4
  Couplings c;
  c.g = 1.0;
  c.b = 0.6;
  const double t = 0.25, box = 4.0;
  std::vector<double> gaps;
  for (const int n : {8, 16, 32}) {
    const double a = box / n;
    const double dt = a * a / 8.0;
    const int steps = static_cast<int>(std::lround(t / dt));
    const LatticeSpec spec(n, n, a, steps + 1, dt);
    const double pi = 3.14159265358979323846;
    ScalarField gamma(spec);
    for (int s = 0; s < spec.sites(); ++s) {
      const auto [ix, iy] = spec.coords(s);
      gamma.at(s) = 0.8 * std::cos(2.0 * pi * ix / n) + 0.5 * std::sin(2.0 * pi * iy / n);
    }
    const SpaceTimeField src = delta_source(spec, spec.site(n / 2, n / 2));
    const SpaceTimeField linked = evolve(src, gradient(gamma), c);
    const SpaceTimeField exact = evolve_similarity(src, gamma, c);
    double gap = 0.0, norm = 0.0;
    for (int s = 0; s < spec.sites(); ++s) {
      gap = std::max(gap, std::abs(linked.at(steps, s) - exact.at(steps, s)));
      norm = std::max(norm, std::abs(exact.at(steps, s)));
    }
    gaps.push_back(gap / norm);
  }
  CHECK(gaps[0] / gaps[1] > 3.0);
  CHECK(gaps[1] / gaps[2] > 3.0);
}

TEST_CASE("gauge transform is a pointwise similarity that fixes the base point") {
  const LatticeSpec spec(5, 4, 1.0, 3, 0.1);
  Rng rng(42);
  ScalarField gamma(spec);
  for (double& v : gamma.values) v = 2.0 * rng.uniform() - 1.0;
  SpaceTimeField psi(spec);
  for (double& v : psi.values) v = rng.uniform();
  const int x0 = spec.site(2, 2);

  const SpaceTimeField fwd = gauge_transform(psi, gamma, 0.8, x0);
  for (int k = 0; k < spec.nt; ++k) CHECK(fwd.at(k, x0) == psi.at(k, x0));

  ScalarField minus_gamma(spec);
  for (int s = 0; s < spec.sites(); ++s) minus_gamma.at(s) = -gamma.at(s);
  const SpaceTimeField back = gauge_transform(fwd, minus_gamma, 0.8, x0);
  for (size_t i = 0; i < psi.values.size(); ++i)
    CHECK(back.values[i] == doctest::Approx(psi.values[i]).epsilon(1e-14));
}

TEST_CASE("dressed kernel reduces to the free one on constant backgrounds") {
  const LatticeSpec spec(8, 8, 1.0);
  Couplings c;
  c.b = 1.1;
  ScalarField constant(spec);
  for (double& v : constant.values) v = 2.4;
  CHECK(dressed_kernel(spec, 0.6, 5, 9, constant, c) ==
        doctest::Approx(free_kernel_exact(spec, 0.6, 5, 9, c.g)).epsilon(1e-14));
  CHECK(dressed_kernel(spec, 0.0, 5, 9, constant, c) == 0.0);
  CHECK(dressed_kernel(spec, -2.0, 5, 9, constant, c) == 0.0);
}

TEST_CASE("kernel table caches the free delta-source evolution") {
  const LatticeSpec spec(5, 5, 1.0, 6, 0.2);
  Couplings c;
  c.b = 0.7;  // the table is a free object; b must not leak in
  const int x0 = spec.site(0, 3);
  const KernelTable table = make_kernel_table(spec, c, x0);
  Couplings free = c;
  free.b = 0.0;
  const SpaceTimeField direct = evolve(delta_source(spec, x0), VectorField(spec), free);
  for (int k = 0; k < spec.nt; ++k)
    for (int s = 0; s < spec.sites(); ++s) CHECK(table.at(k, s) == direct.at(k, s));
}

TEST_CASE("coupling validation") {
  Couplings c;
  CHECK_NOTHROW(c.validate());
  c.g = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.g = 1.0;
  c.tt = -2.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.tt = 1.0;
  c.alpha = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.alpha = 1.0;
  c.b = std::nan("");
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
