// Command-line experiment runner. Every subcommand is configuration driven,
// writes machine-readable artifacts (CSV tables, JSON manifests) without
// timestamps, and reruns byte-identically for a fixed configuration.
//
// Exit codes: 0 all checks passed, 1 tolerance failure, 2 unknown
// subcommand, 3 invalid configuration or arguments.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "liouwalk/acceptance.hpp"
#include "liouwalk/diffusion.hpp"
#include "liouwalk/gaussian.hpp"
#include "liouwalk/io.hpp"
#include "liouwalk/lattice.hpp"
#include "liouwalk/liouville_mc.hpp"
#include "liouwalk/rng.hpp"
#include "liouwalk/walkers.hpp"

namespace {

using nlohmann::json;
using namespace liouwalk;

constexpr int kExitTolerance = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitConfig = 3;

// FNV-1a over the canonical text of the run inputs; stable across platforms
std::string inputs_digest(const std::vector<std::string>& parts) {
  uint64_t h = 1469598103934665603ull;
  for (const std::string& p : parts)
    for (const unsigned char c : p) {
      h ^= c;
      h *= 1099511628211ull;
    }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::filesystem::path out_file(const std::string& out_dir, const char* name) {
  std::filesystem::create_directories(out_dir);
  return std::filesystem::path(out_dir) / name;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
}

json couplings_json(const Couplings& c) {
  return {{"g", c.g}, {"b", c.b}, {"tt", c.tt}, {"mu", c.mu}, {"alpha", c.alpha}};
}

json lattice_json(const LatticeSpec& spec) {
  return {{"nx", spec.nx}, {"ny", spec.ny}, {"a", spec.a},
          {"nt", spec.nt}, {"dt", spec.dt}, {"bc", "periodic"}};
}

struct PairOption {
  std::vector<std::string> raw;

  std::vector<std::pair<int, int>> parse(const LatticeSpec& spec) const {
    std::vector<std::pair<int, int>> pairs;
    for (const std::string& s : raw) {
      const size_t colon = s.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("pair must look like SITE:SITE, got " + s);
      const int p = std::stoi(s.substr(0, colon));
      const int q = std::stoi(s.substr(colon + 1));
      if (p < 0 || p >= spec.sites() || q < 0 || q >= spec.sites())
        throw std::invalid_argument("pair site out of range in " + s);
      pairs.emplace_back(p, q);
    }
    return pairs;
  }
};

// ---- kernel: diffusion solve plus closed-form comparison -------------------

struct KernelCmd {
  int n = 16;
  double a = 0.25;
  double dt = 0.0;  // 0 means a^2/8
  double t = 0.5;
  double g = 1.0;
  double tol = 0.01;
  std::string out = ".";

  int run() const {
    const double step = dt > 0.0 ? dt : a * a / 8.0;
    const int steps = static_cast<int>(std::lround(t / step));
    if (steps < 1 || std::abs(steps * step - t) > 1e-9 * t)
      throw std::invalid_argument("kernel: t must be a positive multiple of dt");
    const LatticeSpec spec(n, n, a, steps + 1, step);
    Couplings c;
    c.g = g;
    const int x0 = spec.site(n / 2, n / 2);
    const SpaceTimeField psi = evolve(delta_source(spec, x0), VectorField(spec), c);

    std::ofstream csv(out_file(out, "kernel.csv"));
    csv << "t,x1,x2,value\n";
    for (int k = 0; k < spec.nt; ++k)
      for (int s = 0; s < spec.sites(); ++s) {
        const auto [ix, iy] = spec.coords(s);
        csv << format_double(k * step) << "," << ix << "," << iy << ","
            << format_double(psi.at(k, s)) << "\n";
      }

    double max_err = 0.0, max_ref = 0.0;
    for (int s = 0; s < spec.sites(); ++s) {
      const double ref = free_kernel_periodic(spec, t, s, x0, g);
      max_err = std::max(max_err, std::abs(psi.at(steps, s) - ref));
      max_ref = std::max(max_ref, ref);
    }
    const double rel = max_err / max_ref;
    const bool ok = rel <= tol;

    write_json_file(out_file(out, "kernel_meta.json"),
                    json{{"lattice", lattice_json(spec)},
                         {"couplings", couplings_json(c)},
                         {"source_site", x0},
                         {"columns", {"t", "x1", "x2", "value"}},
                         {"closed_form_comparison",
                          {{"time", t},
                           {"linf_relative_error", rel},
                           {"tolerance", tol},
                           {"pass", ok}}}});
    std::printf("kernel: L-inf relative error vs closed form %.3e (tol %.3e) -> %s\n", rel, tol,
                ok ? "pass" : "FAIL");
    return ok ? 0 : kExitTolerance;
  }
};

// ---- walk: path ensemble vs the deterministic evolution --------------------

struct WalkCmd {
  int n = 16;
  double a = 0.25;
  double g = 1.0;
  double b = 0.0;
  double t = 0.25;
  long walkers = 0;
  uint64_t seed = 0;
  int batches = 20;
  std::string gamma_file;
  double sigma = 3.0;
  double min_fraction = 0.95;
  long min_count = 50;
  std::string out = ".";

  int run() const {
    const double dt = a * a / (4.0 * g);  // the walk is exact at this step
    const int steps = static_cast<int>(std::lround(t / dt));
    if (steps < 1 || std::abs(steps * dt - t) > 1e-9 * t)
      throw std::invalid_argument("walk: t must be a positive multiple of a^2/(4g)");
    const LatticeSpec spec(n, n, a, steps + 1, dt);
    Couplings c;
    c.g = g;
    c.b = b;
    const int x0 = spec.site(n / 2, n / 2);

    ScalarField gamma(spec);
    if (!gamma_file.empty()) {
      gamma = read_scalar_json(gamma_file);
      if (!(gamma.spec.nx == spec.nx && gamma.spec.ny == spec.ny))
        throw std::invalid_argument("walk: background field size mismatch");
      gamma.spec = spec;
    }
    const VectorField a_field = gradient(gamma);
    const SpaceTimeField psi = evolve_similarity(delta_source(spec, x0), gamma, c);
    const EnsembleEstimate est = estimate_kernel(spec, x0, t, a_field, c, walkers, seed, batches);

    std::ofstream csv(out_file(out, "walk.csv"));
    csv << "x1,x2,mean,stderr,count\n";
    for (int s = 0; s < spec.sites(); ++s) {
      const auto [ix, iy] = spec.coords(s);
      csv << ix << "," << iy << "," << format_double(est.mean[s]) << ","
          << format_double(est.std_error[s]) << "," << est.counts[s] << "\n";
    }

    int eligible = 0, within = 0;
    for (int s = 0; s < spec.sites(); ++s) {
      if (est.counts[s] <= min_count) continue;
      ++eligible;
      if (std::abs(est.mean[s] - psi.at(steps, s)) <= sigma * est.std_error[s]) ++within;
    }
    const double fraction = eligible > 0 ? static_cast<double>(within) / eligible : 1.0;
    const bool ok = fraction >= min_fraction;

    write_json_file(out_file(out, "walk_manifest.json"),
                    json{{"lattice", lattice_json(spec)},
                         {"couplings", couplings_json(c)},
                         {"source_site", x0},
                         {"walkers", walkers},
                         {"batches", batches},
                         {"seed", seed},
                         {"background", gamma_file.empty() ? "none" : gamma_file},
                         {"columns", {"x1", "x2", "mean", "stderr", "count"}},
                         {"pde_comparison",
                          {{"sigma", sigma},
                           {"min_count", min_count},
                           {"eligible_sites", eligible},
                           {"fraction_within", fraction},
                           {"required_fraction", min_fraction},
                           {"pass", ok}}}});
    std::printf("walk: %.1f%% of %d occupied sites within %.1f SE (need %.1f%%) -> %s\n",
                100.0 * fraction, eligible, sigma, 100.0 * min_fraction, ok ? "pass" : "FAIL");
    return ok ? 0 : kExitTolerance;
  }
};

// ---- identity: constrained solve vs Green bilinear --------------------------

struct IdentityCmd {
  int nx = 3, ny = 3, nt = 5;
  double dt = 0.1;
  double g = 1.0;
  double b = 0.7;
  int trials = 10;
  uint64_t seed = 0;
  double tol = 1e-10;
  std::string out = ".";

  int run() const {
    const LatticeSpec spec(nx, ny, 1.0, nt, dt);
    Couplings c;
    c.g = g;
    c.b = b;
    c.tt = (nt - 1) * dt;
    Rng rng(seed);
    double worst = 0.0, worst_lhs = 0.0, worst_rhs = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      ScalarField phi(spec);
      for (double& v : phi.values) v = 2.0 * rng.uniform() - 1.0;
      SourcePair sources{SpaceTimeField(spec), SpaceTimeField(spec)};
      for (double& v : sources.j1.values) v = 2.0 * rng.uniform() - 1.0;
      for (double& v : sources.j2.values) v = 2.0 * rng.uniform() - 1.0;
      const double lhs = sector_log_z(phi, sources, c, spec);
      const double rhs = sector_log_z_bilinear(phi, sources, c, spec);
      const double rel = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
      if (rel > worst) {
        worst = rel;
        worst_lhs = lhs;
        worst_rhs = rhs;
      }
    }
    const bool ok = worst <= tol;
    const std::string digest = inputs_digest(
        {std::to_string(nx), std::to_string(ny), std::to_string(nt), format_double(dt),
         format_double(g), format_double(b), std::to_string(trials), std::to_string(seed)});
    write_json_file(out_file(out, "identity_report.json"),
                    json{{"inputs_digest", digest},
                         {"lattice", lattice_json(spec)},
                         {"couplings", couplings_json(c)},
                         {"trials", trials},
                         {"seed", seed},
                         {"worst_case", {{"lhs", worst_lhs}, {"rhs", worst_rhs}}},
                         {"residual", worst},
                         {"tolerance", tol},
                         {"pass", ok}});
    std::printf("identity: worst relative residual %.3e over %d trials (tol %.3e) -> %s\n", worst,
                trials, tol, ok ? "pass" : "FAIL");
    return ok ? 0 : kExitTolerance;
  }
};

// ---- detk: determinant ratio report -----------------------------------------

struct DetkCmd {
  int nx = 3, ny = 3, nt = 4;
  double dt = 0.1;
  double b = 0.7;
  int trials = 20;
  uint64_t seed = 0;
  double tol = 1e-12;
  std::string out = ".";

  int run() const {
    const LatticeSpec spec(nx, ny, 1.0, nt, dt);
    Couplings c;
    c.b = b;
    Rng rng(seed);
    double worst = 0.0, worst_ratio = 1.0;
    for (int trial = 0; trial < trials; ++trial) {
      ScalarField phi(spec);
      for (double& v : phi.values) v = 2.0 * rng.uniform() - 1.0;
      const double ratio = det_ratio(phi, c, spec);
      if (std::abs(ratio - 1.0) > worst) {
        worst = std::abs(ratio - 1.0);
        worst_ratio = ratio;
      }
    }
    const bool ok = worst <= tol;
    const std::string digest = inputs_digest({std::to_string(nx), std::to_string(ny),
                                              std::to_string(nt), format_double(dt),
                                              format_double(b), std::to_string(trials),
                                              std::to_string(seed)});
    write_json_file(out_file(out, "detk_report.json"),
                    json{{"inputs_digest", digest},
                         {"lattice", lattice_json(spec)},
                         {"couplings", couplings_json(c)},
                         {"trials", trials},
                         {"seed", seed},
                         {"worst_case", {{"ratio", worst_ratio}, {"target", 1.0}}},
                         {"residual", worst},
                         {"tolerance", tol},
                         {"pass", ok}});
    std::printf("detk: worst |ratio - 1| = %.3e over %d trials (tol %.3e) -> %s\n", worst, trials,
                tol, ok ? "pass" : "FAIL");
    return ok ? 0 : kExitTolerance;
  }
};

// ---- lambda: multiplier identity grid ----------------------------------------

struct LambdaCmd {
  std::vector<double> alphas = {0.5, 2.0, 8.0};
  std::vector<double> fs = {0.0, 0.5, 1.0, 3.0};
  double tol = 1e-12;
  std::string out = ".";

  int run() const {
    json rows = json::array();
    double worst = 0.0;
    for (const double alpha : alphas)
      for (const double f : fs) {
        const MultiplierIdentity id = curl_constraint_identity(f, alpha);
        worst = std::max(worst, std::max(id.residual, std::abs(id.imag_part)));
        rows.push_back({{"alpha", alpha},
                        {"f", f},
                        {"lhs", id.lhs},
                        {"rhs", id.rhs},
                        {"imag_part", id.imag_part},
                        {"residual", id.residual}});
        std::printf("lambda: alpha=%-6g F=%-6g lhs=%.15g rhs=%.15g residual=%.3e\n", alpha, f,
                    id.lhs, id.rhs, id.residual);
      }
    const bool ok = worst <= tol;
    std::vector<std::string> parts;
    for (const double a : alphas) parts.push_back(format_double(a));
    for (const double f : fs) parts.push_back(format_double(f));
    write_json_file(out_file(out, "lambda_report.json"),
                    json{{"inputs_digest", inputs_digest(parts)},
                         {"rows", rows},
                         {"residual", worst},
                         {"tolerance", tol},
                         {"pass", ok}});
    std::printf("lambda: worst residual %.3e (tol %.3e) -> %s\n", worst, tol, ok ? "pass" : "FAIL");
    return ok ? 0 : kExitTolerance;
  }
};

// ---- shared Monte Carlo plumbing ----------------------------------------------

struct McCommon {
  int n = 8;
  double a = 1.0;
  double g = 1.0;
  double b = 0.5;
  int x0x = 0, x0y = 0;
  long sweeps = 20000;
  long therm = 2000;
  int stride = 1;
  double width = 0.5;
  uint64_t seed = 0;
  PairOption pairs;
  std::string out = ".";

  ActionSpec action(ActionKind kind, double horizon) const {
    ActionSpec as;
    as.kind = kind;
    as.lattice = LatticeSpec(n, n, a);
    as.couplings.g = g;
    as.couplings.b = b;
    if (horizon > 0.0) as.couplings.tt = horizon;
    as.x0 = as.lattice.site(x0x, x0y);
    return as;
  }

  McConfig config(const LatticeSpec& spec) const {
    McConfig cfg;
    cfg.sweeps = sweeps;
    cfg.thermalization = therm;
    cfg.stride = stride;
    cfg.proposal_width = width;
    cfg.seed = seed;
    cfg.pairs = pairs.raw.empty()
                    ? std::vector<std::pair<int, int>>{{spec.site(x0x + 1, x0y),
                                                        spec.site(x0x - 1, x0y)}}
                    : pairs.parse(spec);
    return cfg;
  }
};

void write_observables_csv(const std::filesystem::path& path, const McRun& run) {
  std::ofstream csv(path);
  csv << "observable,pair,mean,stderr,tau_int\n";
  for (const auto& row : diff_correlators(run))
    csv << row.observable << "," << row.site_a << ":" << row.site_b << ","
        << format_double(row.mean) << "," << format_double(row.std_error) << ","
        << format_double(row.tau_int) << "\n";
  const auto& s = run.summaries.at("s_int");
  csv << "s_int,-," << format_double(s.mean) << "," << format_double(s.std_error) << ","
      << format_double(s.tau_int) << "\n";
}

json run_manifest(const McRun& run) {
  return {{"lattice", lattice_json(run.action.lattice)},
          {"couplings", couplings_json(run.action.couplings)},
          {"pinned_site", run.action.x0},
          {"seed", run.config.seed},
          {"sweeps", run.config.sweeps},
          {"thermalization", run.config.thermalization},
          {"stride", run.config.stride},
          {"samples", run.samples},
          {"acceptance", run.acceptance},
          {"proposal_width_final", run.width_final}};
}

int run_mc(const McCommon& mc, ActionKind kind, double horizon, const char* label) {
  const ActionSpec as = mc.action(kind, horizon);
  const McRun run = metropolis_run(as, mc.config(as.lattice));
  write_observables_csv(out_file(mc.out, "observables.csv"), run);
  json manifest = run_manifest(run);
  manifest["action"] = label;
  write_json_file(out_file(mc.out, "run_manifest.json"), manifest);
  std::printf("%s: %ld samples, acceptance %.3f, width %.3f\n", label, run.samples,
              run.acceptance, run.width_final);
  return 0;
}

// ---- compare: horizon study -----------------------------------------------------

struct CompareCmd {
  McCommon mc;
  std::vector<double> horizons = {1.0, 10.0, 100.0, 1000.0};

  int run() const {
    ActionSpec base = mc.action(ActionKind::Liouville, 0.0);
    const TLimitReport report = compare_t_limit(base, horizons, mc.config(base.lattice));

    std::ofstream csv(out_file(mc.out, "compare.csv"));
    csv << "t_horizon,bound,bound_over_scale,max_sigma\n";
    const double scale = interaction_scale(base);
    for (const auto& e : report.entries)
      csv << format_double(e.t_horizon) << "," << format_double(e.bound) << ","
          << format_double(e.bound / scale) << "," << format_double(e.max_sigma_distance) << "\n";

    const bool ok = report.bound_monotone && report.matches_at_largest;
    write_json_file(out_file(mc.out, "compare_manifest.json"),
                    json{{"lattice", lattice_json(base.lattice)},
                         {"couplings", couplings_json(base.couplings)},
                         {"pinned_site", base.x0},
                         {"seed", mc.seed},
                         {"horizons", horizons},
                         {"interaction_scale", scale},
                         {"bound_over_scale_at_largest", report.bound_over_scale_at_largest},
                         {"bound_monotone", report.bound_monotone},
                         {"matches_at_largest", report.matches_at_largest},
                         {"pass", ok}});
    std::printf(
        "compare: bound/scale at T=%g is %.3e, monotone %s, largest-horizon match %s -> %s\n",
        horizons.back(), report.bound_over_scale_at_largest, report.bound_monotone ? "yes" : "no",
        report.matches_at_largest ? "yes" : "no", ok ? "pass" : "FAIL");
    return ok ? 0 : kExitTolerance;
  }
};

// ---- verify-all -----------------------------------------------------------------

int run_verify(int only, const std::string& out) {
  int failures = 0;
  json rows = json::array();
  for (const auto& check : run_acceptance(only)) {
    std::printf("[%s] %2d %s: %s\n", check.passed ? "PASS" : "FAIL", check.id, check.name.c_str(),
                check.detail.c_str());
    std::fflush(stdout);
    if (!check.passed) ++failures;
    rows.push_back({{"id", check.id},
                    {"name", check.name},
                    {"passed", check.passed},
                    {"detail", check.detail},
                    {"metrics", check.metrics}});
  }
  write_json_file(out_file(out, "verify_report.json"),
                  json{{"checks", rows}, {"failures", failures}});
  return failures > 0 ? kExitTolerance : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice toolkit for gauge-coupled diffusion, Gaussian sector identities,\n"
               "and exponential-interaction Monte Carlo."};
  app.set_config("--config", "", "configuration file, one section per subcommand");
  app.set_version_flag("--version", "liouwalk 0.1.0");
  app.require_subcommand(0, 1);

  KernelCmd kernel;
  auto* kernel_cmd = app.add_subcommand("kernel", "evolve a point source and compare to the closed-form kernel");
  kernel_cmd->add_option("--n", kernel.n, "lattice sites per side")->check(CLI::Range(2, 512));
  kernel_cmd->add_option("--a", kernel.a, "lattice spacing")->check(CLI::PositiveNumber);
  kernel_cmd->add_option("--dt", kernel.dt, "time step (default a^2/8)");
  kernel_cmd->add_option("--t", kernel.t, "total diffusion time")->check(CLI::PositiveNumber);
  kernel_cmd->add_option("--g", kernel.g, "diffusion coupling")->check(CLI::PositiveNumber);
  kernel_cmd->add_option("--tol-kernel", kernel.tol, "relative error tolerance")
      ->check(CLI::PositiveNumber);
  kernel_cmd->add_option("--out", kernel.out, "output directory");

  WalkCmd walk;
  auto* walk_cmd = app.add_subcommand("walk", "walker ensemble estimate checked against the evolution");
  walk_cmd->add_option("--n", walk.n, "lattice sites per side")->check(CLI::Range(2, 512));
  walk_cmd->add_option("--a", walk.a, "lattice spacing")->check(CLI::PositiveNumber);
  walk_cmd->add_option("--g", walk.g, "diffusion coupling")->check(CLI::PositiveNumber);
  walk_cmd->add_option("--b", walk.b, "background coupling");
  walk_cmd->add_option("--t", walk.t, "total diffusion time")->check(CLI::PositiveNumber);
  walk_cmd->add_option("--walkers", walk.walkers, "number of walkers")->required();
  walk_cmd->add_option("--seed", walk.seed, "rng seed")->required();
  walk_cmd->add_option("--batches", walk.batches, "error-bar batches");
  walk_cmd->add_option("--gamma", walk.gamma_file, "scalar background field (json)");
  walk_cmd->add_option("--sigma", walk.sigma, "per-site agreement window in standard errors");
  walk_cmd->add_option("--min-fraction", walk.min_fraction, "required fraction of agreeing sites");
  walk_cmd->add_option("--min-count", walk.min_count, "occupancy needed to grade a site");
  walk_cmd->add_option("--out", walk.out, "output directory");

  IdentityCmd identity;
  auto* identity_cmd = app.add_subcommand("identity", "constrained-solve vs Green-bilinear report");
  identity_cmd->add_option("--nx", identity.nx)->check(CLI::Range(2, 64));
  identity_cmd->add_option("--ny", identity.ny)->check(CLI::Range(2, 64));
  identity_cmd->add_option("--nt", identity.nt)->check(CLI::Range(2, 64));
  identity_cmd->add_option("--dt", identity.dt)->check(CLI::PositiveNumber);
  identity_cmd->add_option("--g", identity.g)->check(CLI::PositiveNumber);
  identity_cmd->add_option("--b", identity.b);
  identity_cmd->add_option("--trials", identity.trials)->check(CLI::PositiveNumber);
  identity_cmd->add_option("--seed", identity.seed, "rng seed")->required();
  identity_cmd->add_option("--tol-identity", identity.tol)->check(CLI::PositiveNumber);
  identity_cmd->add_option("--out", identity.out, "output directory");

  DetkCmd detk;
  auto* detk_cmd = app.add_subcommand("detk", "dressed/free determinant ratio report");
  detk_cmd->add_option("--nx", detk.nx)->check(CLI::Range(2, 64));
  detk_cmd->add_option("--ny", detk.ny)->check(CLI::Range(2, 64));
  detk_cmd->add_option("--nt", detk.nt)->check(CLI::Range(2, 64));
  detk_cmd->add_option("--dt", detk.dt)->check(CLI::PositiveNumber);
  detk_cmd->add_option("--b", detk.b);
  detk_cmd->add_option("--trials", detk.trials)->check(CLI::PositiveNumber);
  detk_cmd->add_option("--seed", detk.seed, "rng seed")->required();
  detk_cmd->add_option("--tol-det", detk.tol)->check(CLI::PositiveNumber);
  detk_cmd->add_option("--out", detk.out, "output directory");

  LambdaCmd lambda;
  auto* lambda_cmd = app.add_subcommand("lambda", "constraint multiplier identity over a grid");
  lambda_cmd->add_option("--alpha", lambda.alphas, "stiffness values");
  lambda_cmd->add_option("--f", lambda.fs, "field values");
  lambda_cmd->add_option("--tol", lambda.tol)->check(CLI::PositiveNumber);
  lambda_cmd->add_option("--out", lambda.out, "output directory");

  const auto add_mc_options = [](CLI::App* cmd, McCommon& mc) {
    cmd->add_option("--n", mc.n, "lattice sites per side")->check(CLI::Range(2, 256));
    cmd->add_option("--a", mc.a, "lattice spacing")->check(CLI::PositiveNumber);
    cmd->add_option("--g", mc.g, "diffusion coupling")->check(CLI::PositiveNumber);
    cmd->add_option("--b", mc.b, "exponential coupling");
    cmd->add_option("--x0x", mc.x0x, "pinned site x index");
    cmd->add_option("--x0y", mc.x0y, "pinned site y index");
    cmd->add_option("--sweeps", mc.sweeps, "measurement sweeps")->check(CLI::PositiveNumber);
    cmd->add_option("--therm", mc.therm, "thermalization sweeps");
    cmd->add_option("--stride", mc.stride, "sweeps between measurements")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--width", mc.width, "initial proposal width");
    cmd->add_option("--seed", mc.seed, "rng seed")->required();
    cmd->add_option("--pair", mc.pairs.raw, "tracked site pair SITE:SITE (repeatable)");
    cmd->add_option("--out", mc.out, "output directory");
  };

  McCommon mc_liouville;
  auto* mcl_cmd = app.add_subcommand("mc-liouville", "sample the exponential-interaction action");
  add_mc_options(mcl_cmd, mc_liouville);

  McCommon mc_mapped;
  double horizon = 10.0;
  auto* mcm_cmd = app.add_subcommand("mc-mapped", "sample the finite-horizon windowed action");
  add_mc_options(mcm_cmd, mc_mapped);
  mcm_cmd->add_option("--horizon", horizon, "diffusion-time horizon T")
      ->check(CLI::PositiveNumber)
      ->required();

  CompareCmd compare;
  auto* compare_cmd = app.add_subcommand("compare", "windowed-action runs against the plain one");
  add_mc_options(compare_cmd, compare.mc);
  compare_cmd->add_option("--horizons", compare.horizons, "horizon values (ascending)");

  int verify_only = 0;
  std::string verify_out = ".";
  auto* verify_cmd = app.add_subcommand("verify-all", "run the full acceptance battery");
  verify_cmd->add_option("--only", verify_only, "run a single check id (0 = all)")
      ->check(CLI::Range(0, 11));
  verify_cmd->add_option("--out", verify_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ExtrasError& e) {
    app.exit(e);
    return kExitUnknown;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (app.get_subcommands().empty()) {
    std::fprintf(stderr, "%s\n", app.help().c_str());
    return kExitUnknown;
  }

  try {
    if (kernel_cmd->parsed()) return kernel.run();
    if (walk_cmd->parsed()) return walk.run();
    if (identity_cmd->parsed()) return identity.run();
    if (detk_cmd->parsed()) return detk.run();
    if (lambda_cmd->parsed()) return lambda.run();
    if (mcl_cmd->parsed()) return run_mc(mc_liouville, ActionKind::Liouville, 0.0, "mc-liouville");
    if (mcm_cmd->parsed()) return run_mc(mc_mapped, ActionKind::MappedFiniteT, horizon, "mc-mapped");
    if (compare_cmd->parsed()) return compare.run();
    if (verify_cmd->parsed()) return run_verify(verify_only, verify_out);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kExitConfig;
  } catch (const size_guard_error& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitUnknown;
}
