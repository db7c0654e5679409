#pragma once

#include "liouwalk/lattice.hpp"

namespace liouwalk {

// Couplings shared across modules. g scales the Laplacian in the evolution
// equation, b is the exponential coupling to the gauge/scalar background,
// tt is the total diffusion time of the finite-horizon objects, mu the
// grand-canonical weight, alpha the stiffness in the multiplier identity.
struct Couplings {
  double g = 1.0;
  double b = 0.0;
  double tt = 1.0;
  double mu = 1.0;
  double alpha = 1.0;

  void validate() const;
};

// Closed-form heat kernel of d_t = g * Lap on the plane at displacement
// (dx, dy), normalized to unit mass: exp(-r^2/(4gt)) / (4 pi g t).
double free_kernel_value(double t, double dx, double dy, double g);

// Same, evaluated between two lattice sites using the minimum-image
// displacement. Throws std::domain_error for t <= 0.
double free_kernel_exact(const LatticeSpec& spec, double t, int x, int x0, double g);

// Periodic-box kernel: sum of the plane kernel over image shifts
// (dx + j*L1, dy + k*L2), rings added until they stop contributing
// (relative cutoff 1e-16).
double free_kernel_periodic(const LatticeSpec& spec, double t, int x, int x0, double g);

// Delta source 1/(a^2 dt) at (t_slice, x0): the discrete unit-mass injection.
SpaceTimeField delta_source(const LatticeSpec& spec, int x0, int t_slice = 0);

// Explicit Euler evolution of d_t psi = g * D_A^2 psi + source, where D_A^2
// is the covariant Laplacian with midpoint link coupling. Sign convention:
// a hop along +mu across a link carries weight exp(-b a A_mu), matching the
// walker line-integral weight exp(-b int A.dR); gauge covariant to O(a).
// Source slice k is injected into output slice k. Requires 4 g dt / a^2 <= 1.
SpaceTimeField evolve(const SpaceTimeField& source, const VectorField& a_field,
                      const Couplings& c);

// Same evolution for a pure-gradient background A = grad(gamma), with hop
// factors built from differences of gamma. Exactly gauge covariant: the
// output equals gauge_transform of the free evolution to round-off.
SpaceTimeField evolve_similarity(const SpaceTimeField& source, const ScalarField& gamma,
                                 const Couplings& c);

// Pointwise map psi -> exp(-b (gamma(x) - gamma(x0))) psi.
SpaceTimeField gauge_transform(const SpaceTimeField& psi, const ScalarField& gamma,
                               double b, int x0);

// Background-dressed plane kernel exp(+b (phi(x) - phi(x0))) * free kernel;
// 0 for t <= 0. This is the closed form whose lattice counterpart is the
// Green function of the similarity operator E_{b phi} Lap E_{-b phi}.
double dressed_kernel(const LatticeSpec& spec, double t, int x, int x0,
                      const ScalarField& phi, const Couplings& c);

// Canonical single-path partition value: sum over sites of psi * a^2.
double canonical_z(const ScalarField& psi_slice);

// Free kernel table on the lattice: one delta-source evolution, stored per
// (time slice, site).
struct KernelTable {
  LatticeSpec spec;
  Couplings couplings;
  int x0 = 0;
  SpaceTimeField values;

  double at(int t, int site) const { return values.at(t, site); }
};

KernelTable make_kernel_table(const LatticeSpec& spec, const Couplings& c, int x0);

}  // namespace liouwalk
