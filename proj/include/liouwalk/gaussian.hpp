#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "liouwalk/diffusion.hpp"
#include "liouwalk/lattice.hpp"

namespace liouwalk {

// Dense representations refuse lattices above this many space-time points.
inline constexpr int kDenseSizeGuard = 4096;

struct size_guard_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class OperatorMode { Free, Dressed };

// Dense matrix of the retarded evolution operator
//   K = (T/dt) [ I - (I + dt g L) shift ],
// block lower bidiagonal in time: K[k][k] = (T/dt) I, K[k][k-1] =
// -(T/dt)(I + dt g L), where L is the spatial Laplacian (free mode) or its
// similarity transform E_{b phi} Lap E_{-b phi} (dressed mode). Rows and
// columns are indexed slice-major, k * sites + site.
struct RetardedOperator {
  LatticeSpec spec;
  Couplings couplings;
  OperatorMode mode = OperatorMode::Free;
  ScalarField phi;  // zeros in free mode
  Eigen::MatrixXd matrix;
};

RetardedOperator build_operator(const ScalarField* phi, const Couplings& c,
                                const LatticeSpec& spec, OperatorMode mode);

// Solves K psi = j1 by forward substitution through the time blocks.
SpaceTimeField solve_constraint(const RetardedOperator& op, const SpaceTimeField& j1);

struct SourcePair {
  SpaceTimeField j1;
  SpaceTimeField j2;
};

// The distinguished current pair of the finite-horizon map: a point injection
// (T/g)/(a^2 dt) at (slice 0, x0) and a uniform readout T/dt on the slice
// nearest to time tt.
SourcePair special_sources(const LatticeSpec& spec, const Couplings& c, int x0);

// log of the source-pair sector of the two-field Gaussian integral, computed
// by eliminating the first field (a delta-functional constraint) and solving
// the free operator against the background-transformed current:
//   -sum exp(b phi) J2 . psi' a^2 dt,  T(d_t - g Lap) psi' = exp(-b phi) J1.
double sector_log_z(const ScalarField& phi, const SourcePair& sources, const Couplings& c,
                    const LatticeSpec& spec);

// Same quantity assembled independently as the current-current bilinear
// -sum sum J2 . G . J1 (a^2 dt)^2 through the dressed lattice Green function
// (columns of the dressed operator solved against unit Kronecker sources).
double sector_log_z_bilinear(const ScalarField& phi, const SourcePair& sources,
                             const Couplings& c, const LatticeSpec& spec);

// det K_phi / det K_0 via two LU factorizations (log-magnitude arithmetic).
// Identically 1: the field dependence sits strictly below the diagonal.
double det_ratio(const ScalarField& phi, const Couplings& c, const LatticeSpec& spec);

// Gaussian multiplier identity used to enforce the zero-curl constraint:
//   exp(-alpha F^2 / 4) = (1/sqrt(pi alpha)) Int dlam exp(-lam^2/alpha) cos(lam F),
// with the odd (imaginary) part integrating to zero. Evaluated by panel
// Gauss-Legendre quadrature with a convergence check.
struct MultiplierIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double imag_part = 0.0;
  double residual = 0.0;
};

MultiplierIdentity curl_constraint_identity(double f_value, double alpha);

}  // namespace liouwalk
