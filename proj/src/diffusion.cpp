#include "liouwalk/diffusion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace liouwalk {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void check_spatial_match(const LatticeSpec& lhs, const LatticeSpec& rhs, const char* what) {
  if (lhs.nx != rhs.nx || lhs.ny != rhs.ny || lhs.a != rhs.a)
    throw std::invalid_argument(std::string(what) + ": spatial lattice mismatch");
}

}  // namespace

void Couplings::validate() const {
  if (!(g > 0.0)) throw std::invalid_argument("couplings: g must be positive");
  if (!(tt > 0.0)) throw std::invalid_argument("couplings: tt must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("couplings: alpha must be positive");
  if (!std::isfinite(b) || !std::isfinite(mu))
    throw std::invalid_argument("couplings: b and mu must be finite");
}

double free_kernel_value(double t, double dx, double dy, double g) {
  if (!(t > 0.0)) throw std::domain_error("free kernel: t must be positive");
  if (!(g > 0.0)) throw std::invalid_argument("free kernel: g must be positive");
  const double r2 = dx * dx + dy * dy;
  return std::exp(-r2 / (4.0 * g * t)) / (4.0 * kPi * g * t);
}

namespace {

// minimum-image coordinate displacement from x0 to x, in length units
std::pair<double, double> min_image_displacement(const LatticeSpec& spec, int x, int x0) {
  auto [ix, iy] = spec.coords(x);
  auto [jx, jy] = spec.coords(x0);
  int dx = ix - jx;
  int dy = iy - jy;
  if (dx > spec.nx / 2) dx -= spec.nx;
  if (dx < -((spec.nx - 1) / 2)) dx += spec.nx;
  if (dy > spec.ny / 2) dy -= spec.ny;
  if (dy < -((spec.ny - 1) / 2)) dy += spec.ny;
  return {spec.a * dx, spec.a * dy};
}

}  // namespace

double free_kernel_exact(const LatticeSpec& spec, double t, int x, int x0, double g) {
  auto [dx, dy] = min_image_displacement(spec, x, x0);
  return free_kernel_value(t, dx, dy, g);
}

double free_kernel_periodic(const LatticeSpec& spec, double t, int x, int x0, double g) {
  if (!(t > 0.0)) throw std::domain_error("free kernel: t must be positive");
  auto [dx, dy] = min_image_displacement(spec, x, x0);
  const double lx = spec.nx * spec.a;
  const double ly = spec.ny * spec.a;
  double total = free_kernel_value(t, dx, dy, g);
  for (int ring = 1; ring < 4096; ++ring) {
    double shell = 0.0;
    for (int j = -ring; j <= ring; ++j)
      for (int k = -ring; k <= ring; ++k) {
        if (std::max(std::abs(j), std::abs(k)) != ring) continue;
        shell += free_kernel_value(t, dx + j * lx, dy + k * ly, g);
      }
    total += shell;
    if (shell <= 1e-16 * total) return total;
  }
  throw std::runtime_error("free kernel: image sum did not converge");
}

SpaceTimeField delta_source(const LatticeSpec& spec, int x0, int t_slice) {
  if (spec.nt < 1) throw std::invalid_argument("delta source: lattice carries no time slices");
  if (x0 < 0 || x0 >= spec.sites()) throw std::invalid_argument("delta source: site out of range");
  if (t_slice < 0 || t_slice >= spec.nt)
    throw std::invalid_argument("delta source: time slice out of range");
  SpaceTimeField src(spec);
  src.at(t_slice, x0) = 1.0 / (spec.a * spec.a * spec.dt);
  return src;
}

namespace {

void check_stability(const LatticeSpec& spec, const Couplings& c) {
  const double ratio = 4.0 * c.g * spec.dt / (spec.a * spec.a);
  // equality is admitted: it is the nearest-neighbor walk transfer matrix
  if (ratio > 1.0 + 1e-12)
    throw std::invalid_argument("evolve: stability bound violated, 4*g*dt/a^2 = " +
                                std::to_string(ratio) + " exceeds 1");
}

// One explicit Euler step with the midpoint-coupled covariant Laplacian.
// Hop convention: crossing a link along +mu carries weight exp(-b a A_mu),
// so the bilinear form pairs the field average on each link with +b A.
void step_midpoint(const LatticeSpec& spec, const VectorField& a_field, double b, double g_dt,
                   const std::vector<double>& in, std::vector<double>& out) {
  const int ns = spec.sites();
  const double inv_a = 1.0 / spec.a;
  // link field w_mu(x) = (in(x+mu) - in(x))/a + b A_mu(x) (in(x+mu)+in(x))/2
  static thread_local std::vector<double> w;
  w.assign(2 * static_cast<size_t>(ns), 0.0);
  for (int mu = 0; mu < 2; ++mu)
    for (int s = 0; s < ns; ++s) {
      const double fwd = in[spec.neighbor(s, mu, +1)];
      const double cur = in[s];
      w[static_cast<size_t>(mu) * ns + s] =
          (fwd - cur) * inv_a + b * a_field.at(mu, s) * 0.5 * (fwd + cur);
    }
  for (int s = 0; s < ns; ++s) {
    double acc = 0.0;
    for (int mu = 0; mu < 2; ++mu) {
      const int sm = spec.neighbor(s, mu, -1);
      const double w_here = w[static_cast<size_t>(mu) * ns + s];
      const double w_back = w[static_cast<size_t>(mu) * ns + sm];
      acc += (w_here - w_back) * inv_a +
             b * 0.5 * (a_field.at(mu, s) * w_here + a_field.at(mu, sm) * w_back);
    }
    out[s] = in[s] + g_dt * acc;
  }
}

}  // namespace

SpaceTimeField evolve(const SpaceTimeField& source, const VectorField& a_field,
                      const Couplings& c) {
  c.validate();
  const LatticeSpec& spec = source.spec;
  check_spatial_match(spec, a_field.spec, "evolve");
  if (spec.nt < 1) throw std::invalid_argument("evolve: lattice carries no time slices");
  check_stability(spec, c);

  const int ns = spec.sites();
  const double g_dt = c.g * spec.dt;
  SpaceTimeField psi(spec);
  std::vector<double> state(ns, 0.0), next(ns, 0.0);
  for (int k = 0; k < spec.nt; ++k) {
    if (k > 0) {
      step_midpoint(spec, a_field, c.b, g_dt, state, next);
      state.swap(next);
    }
    for (int s = 0; s < ns; ++s) {
      state[s] += spec.dt * source.at(k, s);
      psi.at(k, s) = state[s];
    }
  }
  return psi;
}

SpaceTimeField evolve_similarity(const SpaceTimeField& source, const ScalarField& gamma,
                                 const Couplings& c) {
  c.validate();
  const LatticeSpec& spec = source.spec;
  check_spatial_match(spec, gamma.spec, "evolve");
  if (spec.nt < 1) throw std::invalid_argument("evolve: lattice carries no time slices");
  check_stability(spec, c);

  const int ns = spec.sites();
  const double g_dt_a2 = c.g * spec.dt / (spec.a * spec.a);
  // hop factor toward each neighbor: exp(b (gamma(neighbor) - gamma(x)));
  // along a path these telescope to exp(-b (gamma(end) - gamma(start)))
  std::vector<double> hop(4 * static_cast<size_t>(ns));
  for (int s = 0; s < ns; ++s)
    for (int mu = 0; mu < 2; ++mu) {
      const int fwd = spec.neighbor(s, mu, +1);
      const int bwd = spec.neighbor(s, mu, -1);
      hop[4 * static_cast<size_t>(s) + 2 * mu] = std::exp(c.b * (gamma.at(fwd) - gamma.at(s)));
      hop[4 * static_cast<size_t>(s) + 2 * mu + 1] = std::exp(c.b * (gamma.at(bwd) - gamma.at(s)));
    }

  SpaceTimeField psi(spec);
  std::vector<double> state(ns, 0.0), next(ns, 0.0);
  for (int k = 0; k < spec.nt; ++k) {
    if (k > 0) {
      for (int s = 0; s < ns; ++s) {
        double acc = -4.0 * state[s];
        acc += hop[4 * static_cast<size_t>(s) + 0] * state[spec.neighbor(s, 0, +1)];
        acc += hop[4 * static_cast<size_t>(s) + 1] * state[spec.neighbor(s, 0, -1)];
        acc += hop[4 * static_cast<size_t>(s) + 2] * state[spec.neighbor(s, 1, +1)];
        acc += hop[4 * static_cast<size_t>(s) + 3] * state[spec.neighbor(s, 1, -1)];
        next[s] = state[s] + g_dt_a2 * acc;
      }
      state.swap(next);
    }
    for (int s = 0; s < ns; ++s) {
      state[s] += spec.dt * source.at(k, s);
      psi.at(k, s) = state[s];
    }
  }
  return psi;
}

SpaceTimeField gauge_transform(const SpaceTimeField& psi, const ScalarField& gamma,
                               double b, int x0) {
  check_spatial_match(psi.spec, gamma.spec, "gauge transform");
  if (x0 < 0 || x0 >= psi.spec.sites())
    throw std::invalid_argument("gauge transform: site out of range");
  const int ns = psi.spec.sites();
  std::vector<double> factor(ns);
  for (int s = 0; s < ns; ++s) factor[s] = std::exp(-b * (gamma.at(s) - gamma.at(x0)));
  SpaceTimeField out(psi.spec);
  for (int k = 0; k < psi.spec.nt; ++k)
    for (int s = 0; s < ns; ++s) out.at(k, s) = factor[s] * psi.at(k, s);
  return out;
}

double dressed_kernel(const LatticeSpec& spec, double t, int x, int x0,
                      const ScalarField& phi, const Couplings& c) {
  check_spatial_match(spec, phi.spec, "dressed kernel");
  if (t <= 0.0) return 0.0;
  return std::exp(c.b * (phi.at(x) - phi.at(x0))) * free_kernel_exact(spec, t, x, x0, c.g);
}

double canonical_z(const ScalarField& psi_slice) {
  const double a2 = psi_slice.spec.a * psi_slice.spec.a;
  double sum = 0.0, comp = 0.0;
  for (double v : psi_slice.values) {
    const double y = v * a2 - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

KernelTable make_kernel_table(const LatticeSpec& spec, const Couplings& c, int x0) {
  VectorField zero_a(spec);
  Couplings free = c;
  free.b = 0.0;
  KernelTable table{spec, c, x0, evolve(delta_source(spec, x0), zero_a, free)};
  return table;
}

}  // namespace liouwalk
