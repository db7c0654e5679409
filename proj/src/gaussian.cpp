#include "liouwalk/gaussian.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace liouwalk {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// spatial Laplacian (free) or its similarity transform (dressed) as a dense
// ns x ns block; neighbor arms accumulate so that doubled links on 2-wide
// lattices are counted with their multiplicity
Eigen::MatrixXd spatial_block(const LatticeSpec& spec, const ScalarField* phi, double b) {
  const int ns = spec.sites();
  const double inv_a2 = 1.0 / (spec.a * spec.a);
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(ns, ns);
  for (int s = 0; s < ns; ++s) {
    for (int mu = 0; mu < 2; ++mu)
      for (int step : {+1, -1}) {
        const int nb = spec.neighbor(s, mu, step);
        const double factor =
            phi ? std::exp(b * (phi->at(s) - phi->at(nb))) : 1.0;
        lap(s, nb) += factor * inv_a2;
      }
    lap(s, s) += -4.0 * inv_a2;
  }
  return lap;
}

void check_guard(const LatticeSpec& spec) {
  if (spec.spacetime_points() > kDenseSizeGuard)
    throw size_guard_error("dense operator refused: nt*nx*ny = " +
                           std::to_string(spec.spacetime_points()) + " exceeds " +
                           std::to_string(kDenseSizeGuard));
}

}  // namespace

RetardedOperator build_operator(const ScalarField* phi, const Couplings& c,
                                const LatticeSpec& spec, OperatorMode mode) {
  c.validate();
  if (spec.nt < 1) throw std::invalid_argument("build operator: lattice carries no time slices");
  check_guard(spec);
  if (mode == OperatorMode::Dressed && phi == nullptr)
    throw std::invalid_argument("build operator: dressed mode needs a background field");
  if (phi != nullptr && !(phi->spec.nx == spec.nx && phi->spec.ny == spec.ny))
    throw std::invalid_argument("build operator: background field lattice mismatch");

  const int ns = spec.sites();
  const int n = spec.spacetime_points();
  const double scale = c.tt / spec.dt;

  RetardedOperator op;
  op.spec = spec;
  op.couplings = c;
  op.mode = mode;
  op.phi = (mode == OperatorMode::Dressed) ? *phi : ScalarField(spec);
  op.matrix = Eigen::MatrixXd::Zero(n, n);

  const Eigen::MatrixXd lap =
      spatial_block(spec, mode == OperatorMode::Dressed ? phi : nullptr, c.b);
  const Eigen::MatrixXd hop =
      -scale * (Eigen::MatrixXd::Identity(ns, ns) + spec.dt * c.g * lap);
  for (int k = 0; k < spec.nt; ++k) {
    op.matrix.block(k * ns, k * ns, ns, ns) = scale * Eigen::MatrixXd::Identity(ns, ns);
    if (k > 0) op.matrix.block(k * ns, (k - 1) * ns, ns, ns) = hop;
  }
  return op;
}

SpaceTimeField solve_constraint(const RetardedOperator& op, const SpaceTimeField& j1) {
  if (!(j1.spec == op.spec)) throw std::invalid_argument("solve constraint: lattice mismatch");
  const int ns = op.spec.sites();
  const double dt_over_t = op.spec.dt / op.couplings.tt;

  SpaceTimeField psi(op.spec);
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(ns);
  Eigen::VectorXd rhs(ns);
  for (int k = 0; k < op.spec.nt; ++k) {
    for (int s = 0; s < ns; ++s) rhs[s] = j1.at(k, s);
    if (k > 0) rhs.noalias() -= op.matrix.block(k * ns, (k - 1) * ns, ns, ns) * prev;
    prev = dt_over_t * rhs;  // diagonal block is (tt/dt) I
    for (int s = 0; s < ns; ++s) psi.at(k, s) = prev[s];
  }
  return psi;
}

SourcePair special_sources(const LatticeSpec& spec, const Couplings& c, int x0) {
  c.validate();
  if (x0 < 0 || x0 >= spec.sites())
    throw std::invalid_argument("special sources: site out of range");
  const double slices = c.tt / spec.dt;
  const int k_t = static_cast<int>(std::lround(slices));
  if (k_t < 0 || k_t >= spec.nt || std::abs(slices - k_t) > 1e-9)
    throw std::invalid_argument("special sources: tt must land on a time slice");
  SourcePair sp{SpaceTimeField(spec), SpaceTimeField(spec)};
  sp.j1.at(0, x0) = c.tt / c.g / (spec.a * spec.a * spec.dt);
  for (int s = 0; s < spec.sites(); ++s) sp.j2.at(k_t, s) = c.tt / spec.dt;
  return sp;
}

double sector_log_z(const ScalarField& phi, const SourcePair& sources, const Couplings& c,
                    const LatticeSpec& spec) {
  if (!(phi.spec.nx == spec.nx && phi.spec.ny == spec.ny))
    throw std::invalid_argument("sector log z: background field lattice mismatch");
  const int ns = spec.sites();
  const RetardedOperator free_op = build_operator(nullptr, c, spec, OperatorMode::Free);

  SpaceTimeField j1_transformed(spec);
  for (int k = 0; k < spec.nt; ++k)
    for (int s = 0; s < ns; ++s)
      j1_transformed.at(k, s) = std::exp(-c.b * phi.at(s)) * sources.j1.at(k, s);
  const SpaceTimeField psi = solve_constraint(free_op, j1_transformed);

  const double measure = spec.a * spec.a * spec.dt;
  double acc = 0.0;
  for (int k = 0; k < spec.nt; ++k)
    for (int s = 0; s < ns; ++s)
      acc += std::exp(c.b * phi.at(s)) * sources.j2.at(k, s) * psi.at(k, s);
  return -acc * measure;
}

double sector_log_z_bilinear(const ScalarField& phi, const SourcePair& sources,
                             const Couplings& c, const LatticeSpec& spec) {
  if (!(phi.spec.nx == spec.nx && phi.spec.ny == spec.ny))
    throw std::invalid_argument("sector log z: background field lattice mismatch");
  const int ns = spec.sites();
  const RetardedOperator dressed = build_operator(&phi, c, spec, OperatorMode::Dressed);

  const double cell = spec.a * spec.a * spec.dt;
  double acc = 0.0;
  SpaceTimeField unit(spec);
  for (int j = 0; j < spec.nt; ++j)
    for (int y = 0; y < ns; ++y) {
      const double j1 = sources.j1.at(j, y);
      if (j1 == 0.0) continue;
      unit.at(j, y) = 1.0 / cell;  // Kronecker source normalized like a delta
      const SpaceTimeField green = solve_constraint(dressed, unit);
      unit.at(j, y) = 0.0;
      double column = 0.0;
      for (int k = 0; k < spec.nt; ++k)
        for (int x = 0; x < ns; ++x) column += sources.j2.at(k, x) * green.at(k, x);
      acc += column * j1;
    }
  return -acc * cell * cell;
}

namespace {

// signed log-determinant from a partial-pivot LU
std::pair<double, double> log_det(const Eigen::MatrixXd& m) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  double log_abs = 0.0;
  double sign = static_cast<double>(lu.permutationP().determinant());
  for (int i = 0; i < m.rows(); ++i) {
    const double d = lu.matrixLU()(i, i);
    if (d == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    log_abs += std::log(std::abs(d));
    if (d < 0.0) sign = -sign;
  }
  return {log_abs, sign};
}

}  // namespace

double det_ratio(const ScalarField& phi, const Couplings& c, const LatticeSpec& spec) {
  const RetardedOperator dressed = build_operator(&phi, c, spec, OperatorMode::Dressed);
  const RetardedOperator free_op = build_operator(nullptr, c, spec, OperatorMode::Free);
  const auto [log_d, sign_d] = log_det(dressed.matrix);
  const auto [log_f, sign_f] = log_det(free_op.matrix);
  return sign_d * sign_f * std::exp(log_d - log_f);
}

namespace {

// nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1]
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

// integral over [-limit, limit] of exp(-lam^2/alpha) * trig(lam F), panels
// mirrored about zero so odd integrands cancel exactly
std::pair<double, double> oscillatory_integral(double f_value, double alpha, int panels_half) {
  static thread_local std::vector<double> nodes, weights;
  if (nodes.size() != 64) gauss_legendre(64, nodes, weights);
  const double limit = std::sqrt(alpha * 18.0 * std::log(10.0));
  const double h = limit / panels_half;
  double cos_part = 0.0, sin_part = 0.0;
  for (int p = 0; p < panels_half; ++p) {
    const double lo = p * h;
    for (size_t i = 0; i < nodes.size(); ++i) {
      const double lam = lo + 0.5 * h * (nodes[i] + 1.0);
      const double w = 0.5 * h * weights[i];
      const double envelope = std::exp(-lam * lam / alpha);
      // mirrored node at -lam carries the same weight
      cos_part += w * envelope * (std::cos(lam * f_value) + std::cos(-lam * f_value));
      sin_part += w * envelope * (std::sin(lam * f_value) + std::sin(-lam * f_value));
    }
  }
  return {cos_part, sin_part};
}

}  // namespace

MultiplierIdentity curl_constraint_identity(double f_value, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("multiplier identity: alpha must be positive");
  if (!std::isfinite(f_value))
    throw std::invalid_argument("multiplier identity: field value must be finite");

  const int panels = std::max(8, static_cast<int>(std::ceil(
                                     std::sqrt(18.0 * std::log(10.0)) *
                                     (1.0 + std::abs(f_value) * std::sqrt(alpha) / 4.0))));
  const auto [cos_a, sin_a] = oscillatory_integral(f_value, alpha, panels);
  const auto [cos_b, sin_b] = oscillatory_integral(f_value, alpha, 2 * panels);
  if (std::abs(cos_a - cos_b) > 1e-12 * std::max(1.0, std::abs(cos_b)))
    throw std::runtime_error("multiplier identity: quadrature did not converge");

  const double norm = 1.0 / std::sqrt(kPi * alpha);
  MultiplierIdentity out;
  out.lhs = std::exp(-alpha * f_value * f_value / 4.0);
  out.rhs = norm * cos_b;
  out.imag_part = norm * sin_b;
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace liouwalk
