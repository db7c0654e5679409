#include "liouwalk/liouville_mc.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "liouwalk/rng.hpp"

namespace liouwalk {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// per-site interaction weight V(x) = w(x)/(4 pi g^2)
std::vector<double> interaction_weights(const ActionSpec& as) {
  const LatticeSpec& sp = as.lattice;
  std::vector<double> v(sp.sites(), 0.0);
  if (as.kind == ActionKind::FreeGaussian) return v;
  const double prefactor = 1.0 / (4.0 * kPi * as.couplings.g * as.couplings.g);
  for (int s = 0; s < sp.sites(); ++s) {
    double w = 1.0;
    if (as.kind == ActionKind::MappedFiniteT)
      w = std::exp(-sp.min_image_dist2(s, as.x0) / (4.0 * as.couplings.g * as.couplings.tt));
    v[s] = prefactor * w;
  }
  return v;
}

void check_pinned(const ScalarField& phi, int x0) {
  if (phi.at(x0) != 0.0)
    throw std::invalid_argument("action: pinned site must be exactly zero");
}

}  // namespace

void ActionSpec::validate() const {
  couplings.validate();
  if (x0 < 0 || x0 >= lattice.sites())
    throw std::invalid_argument("action: pinned site out of range");
}

double action_value(const ScalarField& phi, const ActionSpec& as) {
  as.validate();
  if (!(phi.spec.nx == as.lattice.nx && phi.spec.ny == as.lattice.ny))
    throw std::invalid_argument("action: field lattice mismatch");
  check_pinned(phi, as.x0);
  const LatticeSpec& sp = phi.spec;
  // (1/2) sum_x a^2 |grad phi|^2 = (1/2) sum over forward links of
  // (phi(x+mu)-phi(x))^2; the spacing cancels in two dimensions
  double kinetic = 0.0;
  for (int s = 0; s < sp.sites(); ++s)
    for (int mu = 0; mu < 2; ++mu) {
      const double d = phi.at(sp.neighbor(s, mu, +1)) - phi.at(s);
      kinetic += d * d;
    }
  return 0.5 * kinetic + interaction_value(phi, as);
}

double interaction_value(const ScalarField& phi, const ActionSpec& as) {
  as.validate();
  check_pinned(phi, as.x0);
  const std::vector<double> v = interaction_weights(as);
  const double a2 = as.lattice.a * as.lattice.a;
  const double b = as.couplings.b;
  double acc = 0.0;
  for (int s = 0; s < as.lattice.sites(); ++s)
    acc += v[s] * std::exp(b * phi.at(s));
  return a2 * acc;
}

double interaction_bound(const ActionSpec& as, double t_horizon) {
  as.validate();
  if (!(t_horizon > 0.0)) throw std::invalid_argument("interaction bound: horizon must be positive");
  const LatticeSpec& sp = as.lattice;
  const double g = as.couplings.g;
  const double a2 = sp.a * sp.a;
  double acc = 0.0;
  for (int s = 0; s < sp.sites(); ++s)
    acc += 1.0 - std::exp(-sp.min_image_dist2(s, as.x0) / (4.0 * g * t_horizon));
  return acc * a2 / (4.0 * kPi * g * g);
}

double interaction_scale(const ActionSpec& as) {
  as.validate();
  const double g = as.couplings.g;
  return as.lattice.sites() * as.lattice.a * as.lattice.a / (4.0 * kPi * g * g);
}

void McConfig::validate(const LatticeSpec& spec) const {
  if (sweeps < 1) throw std::invalid_argument("mc config: sweeps must be positive");
  if (thermalization < 0) throw std::invalid_argument("mc config: thermalization must be >= 0");
  if (stride < 1) throw std::invalid_argument("mc config: stride must be positive");
  if (!(proposal_width >= 0.0))
    throw std::invalid_argument("mc config: proposal width must be >= 0");
  if (batches < 20) throw std::invalid_argument("mc config: need at least 20 batches");
  for (const auto& [p, q] : pairs)
    if (p < 0 || p >= spec.sites() || q < 0 || q >= spec.sites())
      throw std::invalid_argument("mc config: pair site out of range");
}

double accept_probability(double delta_action) {
  return delta_action <= 0.0 ? 1.0 : std::exp(-delta_action);
}

namespace {

struct ChainStats {
  double mean = 0.0;
  double std_error = 0.0;
  double tau_int = 0.5;
};

ChainStats summarize(const std::vector<double>& chain, int batches) {
  ChainStats st;
  const size_t n = chain.size();
  if (n == 0) return st;
  double mean = 0.0;
  for (double x : chain) mean += x;
  mean /= static_cast<double>(n);
  st.mean = mean;

  const size_t per = n / static_cast<size_t>(batches);
  if (per >= 1) {
    double var = 0.0;
    for (int b = 0; b < batches; ++b) {
      double m = 0.0;
      for (size_t i = 0; i < per; ++i) m += chain[static_cast<size_t>(b) * per + i];
      m /= static_cast<double>(per);
      var += (m - mean) * (m - mean);
    }
    st.std_error = std::sqrt(var / (static_cast<double>(batches) * (batches - 1)));
  }

  // integrated autocorrelation time with Sokal's adaptive window
  double c0 = 0.0;
  for (double x : chain) c0 += (x - mean) * (x - mean);
  c0 /= static_cast<double>(n);
  if (c0 > 0.0) {
    double tau = 0.5;
    for (size_t k = 1; k < n / 4; ++k) {
      double ck = 0.0;
      for (size_t i = 0; i + k < n; ++i) ck += (chain[i] - mean) * (chain[i + k] - mean);
      ck /= static_cast<double>(n - k);
      const double rho = ck / c0;
      if (rho <= 0.0) break;
      tau += rho;
      if (static_cast<double>(k) >= 6.0 * tau) break;
    }
    st.tau_int = tau;
  }
  return st;
}

std::string pair_key(const char* what, int p, int q) {
  return std::string(what) + ":" + std::to_string(p) + "-" + std::to_string(q);
}

}  // namespace

McRun metropolis_run(const ActionSpec& as, const McConfig& cfg) {
  as.validate();
  cfg.validate(as.lattice);
  const LatticeSpec& sp = as.lattice;
  const int ns = sp.sites();
  const std::vector<double> v = interaction_weights(as);
  const double a2 = sp.a * sp.a;
  const double b = as.couplings.b;

  ScalarField phi(sp);
  Rng rng(stream_seed(cfg.seed, 0));
  double width = cfg.proposal_width;

  auto sweep = [&](long& accepted, long& proposed) {
    for (int s = 0; s < ns; ++s) {
      if (s == as.x0) continue;
      const double old = phi.at(s);
      const double trial = old + width * rng.normal();
      double delta = 0.0;
      for (int mu = 0; mu < 2; ++mu)
        for (int step : {+1, -1}) {
          const double nb = phi.at(sp.neighbor(s, mu, step));
          delta += 0.5 * ((trial - nb) * (trial - nb) - (old - nb) * (old - nb));
        }
      if (v[s] != 0.0) delta += a2 * v[s] * (std::exp(b * trial) - std::exp(b * old));
      ++proposed;
      if (delta <= 0.0 || rng.uniform() < std::exp(-delta)) {
        phi.at(s) = trial;
        ++accepted;
      }
    }
  };

  // thermalization, with optional width adaptation in windows of 100 sweeps
  long acc_win = 0, prop_win = 0;
  for (long it = 0; it < cfg.thermalization; ++it) {
    sweep(acc_win, prop_win);
    if (cfg.tune && width > 0.0 && (it + 1) % 100 == 0 && prop_win > 0) {
      const double rate = static_cast<double>(acc_win) / static_cast<double>(prop_win);
      if (rate > 0.6) width *= 1.15;
      if (rate < 0.4) width /= 1.15;
      acc_win = prop_win = 0;
    }
  }

  McRun run;
  run.action = as;
  run.config = cfg;
  run.width_final = width;

  std::vector<std::string> keys;
  for (const auto& [p, q] : cfg.pairs) {
    keys.push_back(pair_key("d2", p, q));
    keys.push_back(pair_key("expb", p, q));
  }
  keys.emplace_back("s_int");
  for (const auto& k : keys) run.chains[k];

  long accepted = 0, proposed = 0;
  for (long it = 0; it < cfg.sweeps; ++it) {
    sweep(accepted, proposed);
    if ((it + 1) % cfg.stride != 0) continue;
    size_t key_index = 0;
    for (const auto& [p, q] : cfg.pairs) {
      const double d = phi.at(p) - phi.at(q);
      run.chains[keys[key_index++]].push_back(d * d);
      run.chains[keys[key_index++]].push_back(std::exp(b * d));
    }
    double s_int = 0.0;
    for (int s = 0; s < ns; ++s) s_int += v[s] * std::exp(b * phi.at(s));
    run.chains["s_int"].push_back(a2 * s_int);
  }
  run.acceptance = proposed > 0 ? static_cast<double>(accepted) / static_cast<double>(proposed) : 1.0;
  run.samples = static_cast<long>(run.chains["s_int"].size());

  for (const auto& [key, chain] : run.chains) {
    const ChainStats st = summarize(chain, cfg.batches);
    run.summaries[key] = ObservableSummary{st.mean, st.std_error, st.tau_int};
  }
  return run;
}

std::vector<CorrelatorRow> diff_correlators(const McRun& run) {
  std::vector<CorrelatorRow> rows;
  for (const auto& [p, q] : run.config.pairs)
    for (const char* what : {"d2", "expb"}) {
      const auto& s = run.summaries.at(pair_key(what, p, q));
      rows.push_back(CorrelatorRow{what, p, q, s.mean, s.std_error, s.tau_int});
    }
  return rows;
}

std::vector<double> free_pinned_covariance(const LatticeSpec& spec, int x0) {
  const int ns = spec.sites();
  if (x0 < 0 || x0 >= ns) throw std::invalid_argument("covariance: pinned site out of range");
  // kinetic action (1/2) phi^T M phi with M the graph Laplacian; remove the
  // pinned row/column and invert the remaining block
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(ns, ns);
  for (int s = 0; s < ns; ++s)
    for (int mu = 0; mu < 2; ++mu)
      for (int step : {+1, -1}) {
        const int nb = spec.neighbor(s, mu, step);
        m(s, s) += 1.0;
        m(s, nb) -= 1.0;
      }
  Eigen::MatrixXd minor(ns - 1, ns - 1);
  auto packed = [&](int s) { return s < x0 ? s : s - 1; };
  for (int r = 0; r < ns; ++r) {
    if (r == x0) continue;
    for (int col = 0; col < ns; ++col) {
      if (col == x0) continue;
      minor(packed(r), packed(col)) = m(r, col);
    }
  }
  const Eigen::MatrixXd cov = minor.ldlt().solve(Eigen::MatrixXd::Identity(ns - 1, ns - 1));
  std::vector<double> out(static_cast<size_t>(ns) * ns, 0.0);
  for (int r = 0; r < ns; ++r) {
    if (r == x0) continue;
    for (int col = 0; col < ns; ++col) {
      if (col == x0) continue;
      out[static_cast<size_t>(r) * ns + col] = cov(packed(r), packed(col));
    }
  }
  return out;
}

TLimitReport compare_t_limit(const ActionSpec& base, const std::vector<double>& t_values,
                             const McConfig& cfg) {
  if (t_values.empty()) throw std::invalid_argument("compare: no horizons given");
  ActionSpec ref = base;
  ref.kind = ActionKind::Liouville;
  const McRun ref_run = metropolis_run(ref, cfg);

  TLimitReport report;
  report.bound_monotone = true;
  double prev_bound = std::numeric_limits<double>::infinity();
  for (double t : t_values) {
    ActionSpec mapped = base;
    mapped.kind = ActionKind::MappedFiniteT;
    mapped.couplings.tt = t;
    const McRun run = metropolis_run(mapped, cfg);

    TLimitEntry entry;
    entry.t_horizon = t;
    entry.bound = interaction_bound(base, t);
    for (const auto& [key, s] : run.summaries) {
      const auto& r = ref_run.summaries.at(key);
      const double sigma = std::sqrt(s.std_error * s.std_error + r.std_error * r.std_error);
      const double dist = sigma > 0.0 ? std::abs(s.mean - r.mean) / sigma
                                      : (s.mean == r.mean ? 0.0 : std::numeric_limits<double>::infinity());
      entry.max_sigma_distance = std::max(entry.max_sigma_distance, dist);
    }
    if (entry.bound > prev_bound) report.bound_monotone = false;
    prev_bound = entry.bound;
    report.entries.push_back(entry);
  }
  report.bound_over_scale_at_largest = report.entries.back().bound / interaction_scale(base);
  report.matches_at_largest = report.entries.back().max_sigma_distance <= 3.0;
  return report;
}

TrivialityReport triviality_check(const std::vector<double>& g_values, const ActionSpec& base,
                                  const McConfig& cfg) {
  if (g_values.size() < 2) throw std::invalid_argument("triviality: need at least two couplings");
  TrivialityReport report;
  for (double g : g_values) {
    ActionSpec as = base;
    as.couplings.g = g;
    as.couplings.b = 0.0;
    const McRun run = metropolis_run(as, cfg);
    report.g_values.push_back(g);
    report.interaction_means.push_back(run.summaries.at("s_int").mean);
  }
  // least squares on (log g, log <s_int>)
  const size_t n = report.g_values.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double x = std::log(report.g_values[i]);
    const double y = std::log(report.interaction_means[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  report.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return report;
}

}  // namespace liouwalk
