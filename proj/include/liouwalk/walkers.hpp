#pragma once

#include <cstdint>
#include <vector>

#include "liouwalk/diffusion.hpp"
#include "liouwalk/lattice.hpp"
#include "liouwalk/rng.hpp"

namespace liouwalk {

// Nearest-neighbor path: hop codes 0..3 mean +x, -x, +y, -y.
struct WalkerPath {
  int start = 0;
  std::vector<uint8_t> hops;
};

WalkerPath sample_path(const LatticeSpec& spec, int r0, int nsteps, Rng& rng);

int path_endpoint(const LatticeSpec& spec, const WalkerPath& path);

// exp(-b * sum over hops of a * A_link * sign(hop)). For A = grad(gamma)
// the sum telescopes and the weight is exp(-b (gamma(end) - gamma(start))).
double path_weight(const WalkerPath& path, const VectorField& a_field, double b);

struct EnsembleEstimate {
  LatticeSpec spec;
  long n_walkers = 0;
  int batches = 0;
  uint64_t seed = 0;
  std::vector<double> mean;       // per-site estimate of the evolved density
  std::vector<double> std_error;  // batch-means standard error per site
  std::vector<long> counts;       // endpoint occupancy per site
};

// Monte Carlo estimate of the gauge-coupled diffusion density at time t from
// a point source at r0: endpoint histogram of weighted walks, normalized by
// n_walkers * a^2. t must be a multiple of dt; the walk reproduces the
// evolution operator exactly when dt = a^2/(4g). Walkers are seeded
// independently (stream_seed(seed, walker)), and sums are accumulated into
// per-batch compensated accumulators reduced in fixed batch order, so the
// result is independent of how walkers are partitioned across executors.
EnsembleEstimate estimate_kernel(const LatticeSpec& spec, int r0, double t,
                                 const VectorField& a_field, const Couplings& c,
                                 long n_walkers, uint64_t seed, int batches = 20);

// Partial sums S_N = sum_{k<=N} (mu z)^k / k! of the grand-canonical series.
std::vector<double> grand_canonical_partial_sums(double z, double mu, int n_max);

}  // namespace liouwalk
