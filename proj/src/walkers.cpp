#include "liouwalk/walkers.hpp"

#include <cmath>
#include <stdexcept>

namespace liouwalk {

WalkerPath sample_path(const LatticeSpec& spec, int r0, int nsteps, Rng& rng) {
  if (r0 < 0 || r0 >= spec.sites()) throw std::invalid_argument("sample path: site out of range");
  if (nsteps < 0) throw std::invalid_argument("sample path: nsteps must be non-negative");
  WalkerPath path;
  path.start = r0;
  path.hops.resize(nsteps);
  for (int i = 0; i < nsteps; ++i) path.hops[i] = static_cast<uint8_t>(rng.below(4));
  return path;
}

namespace {

inline int hop_dir(uint8_t code) { return code >> 1; }
inline int hop_sign(uint8_t code) { return (code & 1) ? -1 : +1; }

}  // namespace

int path_endpoint(const LatticeSpec& spec, const WalkerPath& path) {
  int s = path.start;
  for (uint8_t h : path.hops) s = spec.neighbor(s, hop_dir(h), hop_sign(h));
  return s;
}

double path_weight(const WalkerPath& path, const VectorField& a_field, double b) {
  const LatticeSpec& spec = a_field.spec;
  int s = path.start;
  double line_integral = 0.0;  // sum of a * A_link * sign over crossed links
  for (uint8_t h : path.hops) {
    const int mu = hop_dir(h);
    if (hop_sign(h) > 0) {
      line_integral += spec.a * a_field.at(mu, s);
      s = spec.neighbor(s, mu, +1);
    } else {
      const int sm = spec.neighbor(s, mu, -1);
      line_integral -= spec.a * a_field.at(mu, sm);
      s = sm;
    }
  }
  return std::exp(-b * line_integral);
}

namespace {

struct KahanAcc {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

EnsembleEstimate estimate_kernel(const LatticeSpec& spec, int r0, double t,
                                 const VectorField& a_field, const Couplings& c,
                                 long n_walkers, uint64_t seed, int batches) {
  c.validate();
  if (r0 < 0 || r0 >= spec.sites())
    throw std::invalid_argument("estimate kernel: site out of range");
  if (batches < 20) throw std::invalid_argument("estimate kernel: need at least 20 batches");
  if (n_walkers < batches || n_walkers % batches != 0)
    throw std::invalid_argument("estimate kernel: n_walkers must be a positive multiple of batches");
  const double steps_real = t / spec.dt;
  const int nsteps = static_cast<int>(std::lround(steps_real));
  if (nsteps < 0 || std::abs(steps_real - nsteps) > 1e-9)
    throw std::invalid_argument("estimate kernel: t must be a non-negative multiple of dt");

  const int ns = spec.sites();
  const long per_batch = n_walkers / batches;
  std::vector<KahanAcc> batch_sum(static_cast<size_t>(batches) * ns);
  std::vector<long> counts(ns, 0);

  for (long w = 0; w < n_walkers; ++w) {
    Rng rng(stream_seed(seed, static_cast<uint64_t>(w)));
    WalkerPath path = sample_path(spec, r0, nsteps, rng);
    const int end = path_endpoint(spec, path);
    const double weight = path_weight(path, a_field, c.b);
    const int batch = static_cast<int>(w / per_batch);
    batch_sum[static_cast<size_t>(batch) * ns + end].add(weight);
    ++counts[end];
  }

  const double norm = 1.0 / (static_cast<double>(n_walkers) * spec.a * spec.a);
  const double batch_norm = 1.0 / (static_cast<double>(per_batch) * spec.a * spec.a);
  EnsembleEstimate est;
  est.spec = spec;
  est.n_walkers = n_walkers;
  est.batches = batches;
  est.seed = seed;
  est.mean.assign(ns, 0.0);
  est.std_error.assign(ns, 0.0);
  est.counts = std::move(counts);
  for (int s = 0; s < ns; ++s) {
    KahanAcc total;
    for (int b = 0; b < batches; ++b) total.add(batch_sum[static_cast<size_t>(b) * ns + s].sum);
    const double mean = total.sum * norm;
    double var = 0.0;
    for (int b = 0; b < batches; ++b) {
      const double d = batch_sum[static_cast<size_t>(b) * ns + s].sum * batch_norm - mean;
      var += d * d;
    }
    est.mean[s] = mean;
    est.std_error[s] = std::sqrt(var / (static_cast<double>(batches) * (batches - 1)));
  }
  return est;
}

std::vector<double> grand_canonical_partial_sums(double z, double mu, int n_max) {
  if (n_max < 0) throw std::invalid_argument("grand canonical: n_max must be non-negative");
  std::vector<double> sums(static_cast<size_t>(n_max) + 1);
  double term = 1.0;
  double acc = 1.0;
  sums[0] = acc;
  for (int k = 1; k <= n_max; ++k) {
    term *= mu * z / k;
    acc += term;
    sums[static_cast<size_t>(k)] = acc;
  }
  return sums;
}

}  // namespace liouwalk
