#include "liouwalk/lattice.hpp"

#include <cmath>
#include <string>

namespace liouwalk {

LatticeSpec::LatticeSpec(int nx_, int ny_, double a_, int nt_, double dt_)
    : nx(nx_), ny(ny_), a(a_), nt(nt_), dt(dt_) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("lattice: nx and ny must be >= 2");
  if (!(a > 0.0)) throw std::invalid_argument("lattice: spacing a must be positive");
  if (nt < 0) throw std::invalid_argument("lattice: nt must be non-negative");
  if (!(dt > 0.0)) throw std::invalid_argument("lattice: dt must be positive");
}

int LatticeSpec::neighbor(int s, int dir, int step) const {
  auto [ix, iy] = coords(s);
  if (dir == 0) return site(ix + step, iy);
  if (dir == 1) return site(ix, iy + step);
  throw std::invalid_argument("lattice: direction must be 0 or 1");
}

double LatticeSpec::min_image_dist2(int s, int s0) const {
  auto [ix, iy] = coords(s);
  auto [jx, jy] = coords(s0);
  int dx = std::abs(ix - jx);
  int dy = std::abs(iy - jy);
  if (dx > nx - dx) dx = nx - dx;
  if (dy > ny - dy) dy = ny - dy;
  return a * a * (static_cast<double>(dx) * dx + static_cast<double>(dy) * dy);
}

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x))
      throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

ScalarField::ScalarField(const LatticeSpec& s, std::vector<double> v)
    : spec(s), values(std::move(v)) {
  if (values.size() != static_cast<size_t>(s.sites()))
    throw std::invalid_argument("ScalarField: value count does not match lattice");
  require_finite(values, "ScalarField");
}

SpaceTimeField::SpaceTimeField(const LatticeSpec& s, std::vector<double> v)
    : spec(s), values(std::move(v)) {
  if (values.size() != static_cast<size_t>(s.spacetime_points()))
    throw std::invalid_argument("SpaceTimeField: value count does not match lattice");
  require_finite(values, "SpaceTimeField");
}

ScalarField SpaceTimeField::slice(int t) const {
  if (t < 0 || t >= spec.nt) throw std::invalid_argument("SpaceTimeField: slice out of range");
  ScalarField out(spec);
  const int ns = spec.sites();
  for (int s = 0; s < ns; ++s) out.values[s] = at(t, s);
  return out;
}

VectorField::VectorField(const LatticeSpec& s, std::vector<double> v)
    : spec(s), values(std::move(v)) {
  if (values.size() != 2 * static_cast<size_t>(s.sites()))
    throw std::invalid_argument("VectorField: value count does not match lattice");
  require_finite(values, "VectorField");
}

VectorField gradient(const ScalarField& f) {
  const LatticeSpec& sp = f.spec;
  VectorField v(sp);
  const double inv_a = 1.0 / sp.a;
  for (int mu = 0; mu < 2; ++mu)
    for (int s = 0; s < sp.sites(); ++s)
      v.at(mu, s) = (f.at(sp.neighbor(s, mu, +1)) - f.at(s)) * inv_a;
  return v;
}

ScalarField divergence(const VectorField& v) {
  const LatticeSpec& sp = v.spec;
  ScalarField d(sp);
  const double inv_a = 1.0 / sp.a;
  for (int s = 0; s < sp.sites(); ++s) {
    double acc = 0.0;
    for (int mu = 0; mu < 2; ++mu)
      acc += v.at(mu, s) - v.at(mu, sp.neighbor(s, mu, -1));
    d.at(s) = acc * inv_a;
  }
  return d;
}

ScalarField laplacian(const ScalarField& f) {
  const LatticeSpec& sp = f.spec;
  ScalarField l(sp);
  const double inv_a2 = 1.0 / (sp.a * sp.a);
  for (int s = 0; s < sp.sites(); ++s) {
    double acc = f.at(sp.neighbor(s, 0, +1)) + f.at(sp.neighbor(s, 0, -1)) +
                 f.at(sp.neighbor(s, 1, +1)) + f.at(sp.neighbor(s, 1, -1)) - 4.0 * f.at(s);
    l.at(s) = acc * inv_a2;
  }
  return l;
}

ScalarField curl(const VectorField& v) {
  const LatticeSpec& sp = v.spec;
  ScalarField c(sp);
  const double inv_a = 1.0 / sp.a;
  for (int s = 0; s < sp.sites(); ++s) {
    const double d1v2 = (v.at(1, sp.neighbor(s, 0, +1)) - v.at(1, s)) * inv_a;
    const double d2v1 = (v.at(0, sp.neighbor(s, 1, +1)) - v.at(0, s)) * inv_a;
    c.at(s) = d1v2 - d2v1;
  }
  return c;
}

}  // namespace liouwalk
