#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace liouwalk {

// Periodic 2D lattice with an optional attached time axis.
// Sites are indexed row-major, site = ix * ny + iy, with both coordinates
// wrapping modulo (nx, ny). Directions: 0 is the x1 axis, 1 is the x2 axis.
struct LatticeSpec {
  int nx = 2;
  int ny = 2;
  double a = 1.0;   // lattice spacing
  int nt = 0;       // number of time slices carried by space-time fields
  double dt = 1.0;  // time step between slices

  LatticeSpec() = default;
  LatticeSpec(int nx_, int ny_, double a_ = 1.0, int nt_ = 0, double dt_ = 1.0);

  int sites() const { return nx * ny; }
  int spacetime_points() const { return nt * nx * ny; }

  int site(int ix, int iy) const {
    ix %= nx;
    if (ix < 0) ix += nx;
    iy %= ny;
    if (iy < 0) iy += ny;
    return ix * ny + iy;
  }
  std::pair<int, int> coords(int s) const { return {s / ny, s % ny}; }

  // nearest neighbor `step` sites along `dir`, wrapping periodically
  int neighbor(int s, int dir, int step) const;

  // squared minimum-image separation of two sites, in length units
  double min_image_dist2(int s, int s0) const;

  bool operator==(const LatticeSpec&) const = default;
};

// One real value per site.
struct ScalarField {
  LatticeSpec spec;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const LatticeSpec& s) : spec(s), values(s.sites(), 0.0) {}
  ScalarField(const LatticeSpec& s, std::vector<double> v);

  double at(int site) const { return values[site]; }
  double& at(int site) { return values[site]; }
  double at(int ix, int iy) const { return values[spec.site(ix, iy)]; }
  double& at(int ix, int iy) { return values[spec.site(ix, iy)]; }
};

// One real value per (time slice, site); slice-major layout.
struct SpaceTimeField {
  LatticeSpec spec;
  std::vector<double> values;

  SpaceTimeField() = default;
  explicit SpaceTimeField(const LatticeSpec& s)
      : spec(s), values(static_cast<size_t>(s.spacetime_points()), 0.0) {}
  SpaceTimeField(const LatticeSpec& s, std::vector<double> v);

  double at(int t, int site) const { return values[static_cast<size_t>(t) * spec.sites() + site]; }
  double& at(int t, int site) { return values[static_cast<size_t>(t) * spec.sites() + site]; }

  ScalarField slice(int t) const;
};

// Two real components per site, living on the forward links from each site.
// Component-major layout: values[mu * sites + site].
struct VectorField {
  LatticeSpec spec;
  std::vector<double> values;

  VectorField() = default;
  explicit VectorField(const LatticeSpec& s) : spec(s), values(2 * s.sites(), 0.0) {}
  VectorField(const LatticeSpec& s, std::vector<double> v);

  double at(int mu, int site) const { return values[static_cast<size_t>(mu) * spec.sites() + site]; }
  double& at(int mu, int site) { return values[static_cast<size_t>(mu) * spec.sites() + site]; }
};

// forward difference onto links: (grad f)_mu(x) = (f(x+mu) - f(x)) / a
VectorField gradient(const ScalarField& f);

// backward difference onto sites; exact negative adjoint of gradient
ScalarField divergence(const VectorField& v);

// standard 5-point stencil, identical to divergence(gradient(f))
ScalarField laplacian(const ScalarField& f);

// plaquette circulation per site: forward-difference d1 v2 - d2 v1
ScalarField curl(const VectorField& v);

void require_finite(const std::vector<double>& v, const char* what);

}  // namespace liouwalk
