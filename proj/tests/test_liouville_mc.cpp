#include <cmath>

#include "doctest.h"
#include "liouwalk/lattice.hpp"
#include "liouwalk/liouville_mc.hpp"

using namespace liouwalk;

namespace {

ActionSpec small_action(ActionKind kind, double a = 1.0) {
  ActionSpec as;
  as.kind = kind;
  as.lattice = LatticeSpec(4, 4, a);
  as.couplings.g = 1.0;
  as.couplings.b = 0.5;
  as.couplings.tt = 2.0;
  as.x0 = 0;
  return as;
}

}  // namespace

TEST_CASE("acceptance rule satisfies detailed balance") {
  CHECK(accept_probability(-3.0) == 1.0);
  CHECK(accept_probability(0.0) == 1.0);
  CHECK(accept_probability(1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  for (const double delta : {0.1, 0.9, 2.5, 7.0})
    CHECK(accept_probability(delta) / accept_probability(-delta) ==
          doctest::Approx(std::exp(-delta)).epsilon(1e-14));
}

TEST_CASE("action value on a 2x2 lattice matches the hand-expanded form") {
  ActionSpec as;
  as.kind = ActionKind::Liouville;
  as.lattice = LatticeSpec(2, 2, 1.5);
  as.couplings.g = 0.8;
  as.couplings.b = 0.6;
  as.x0 = 0;
  const double p1 = 0.4, p2 = -0.7, p3 = 0.2;
  const ScalarField phi(as.lattice, {0.0, p1, p2, p3});
  // every 2x2 link is doubled by periodicity; spacing cancels in the kinetic
  // term and multiplies the potential by a^2
  const double kinetic = (0.0 - p2) * (0.0 - p2) + (p1 - p3) * (p1 - p3) +
                         (0.0 - p1) * (0.0 - p1) + (p2 - p3) * (p2 - p3);
  const double v = 1.0 / (4.0 * 3.14159265358979323846 * as.couplings.g * as.couplings.g);
  const double potential =
      1.5 * 1.5 * v *
      (1.0 + std::exp(0.6 * p1) + std::exp(0.6 * p2) + std::exp(0.6 * p3));
  CHECK(action_value(phi, as) == doctest::Approx(kinetic + potential).epsilon(1e-14));
  CHECK(interaction_value(phi, as) == doctest::Approx(potential).epsilon(1e-14));
}

TEST_CASE("the pinned site must hold exactly zero") {
  const ActionSpec as = small_action(ActionKind::Liouville);
  ScalarField phi(as.lattice);
  phi.at(as.x0) = 1e-14;
  CHECK_THROWS_AS(action_value(phi, as), std::invalid_argument);
}

TEST_CASE("interaction weights: plain, windowed, and free") {
  const ActionSpec plain = small_action(ActionKind::Liouville);
  ActionSpec mapped = small_action(ActionKind::MappedFiniteT);
  const ActionSpec free_kind = small_action(ActionKind::FreeGaussian);
  const ScalarField zero(plain.lattice);

  CHECK(interaction_value(zero, plain) == doctest::Approx(interaction_scale(plain)).epsilon(1e-14));
  CHECK(interaction_value(zero, free_kind) == 0.0);

  // at zero field the plain/windowed gap is exactly the deterministic bound
  const double gap = interaction_value(zero, plain) - interaction_value(zero, mapped);
  CHECK(gap == doctest::Approx(interaction_bound(mapped, mapped.couplings.tt)).epsilon(1e-12));

  // the bound decreases monotonically in the horizon and stays below the scale
  double prev = interaction_scale(mapped);
  for (const double t : {0.5, 2.0, 8.0, 32.0, 128.0}) {
    const double bound = interaction_bound(mapped, t);
    CHECK(bound <= prev * (1.0 + 1e-15));
    CHECK(bound >= 0.0);
    prev = bound;
  }
  CHECK(interaction_bound(mapped, 1e9) < 1e-6 * interaction_scale(mapped));
  CHECK_THROWS_AS(interaction_bound(mapped, 0.0), std::invalid_argument);
}

TEST_CASE("pinned free covariance matches the hand-inverted 2x2 case") {
  const LatticeSpec spec(2, 2, 1.0);
  const std::vector<double> cov = free_pinned_covariance(spec, 0);
  const int ns = 4;
  // minor of the doubled-link Laplacian: [[4,0,-2],[0,4,-2],[-2,-2,4]]
  CHECK(cov[1 * ns + 1] == doctest::Approx(0.375).epsilon(1e-13));
  CHECK(cov[3 * ns + 3] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(cov[1 * ns + 3] == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(cov[1 * ns + 2] == doctest::Approx(0.125).epsilon(1e-13));
  for (int s = 0; s < ns; ++s) {
    CHECK(cov[0 * ns + s] == 0.0);
    CHECK(cov[s * ns + 0] == 0.0);
  }
  for (int p = 0; p < ns; ++p)
    for (int q = 0; q < ns; ++q) CHECK(cov[p * ns + q] == doctest::Approx(cov[q * ns + p]));
}

TEST_CASE("pinned free covariance solves its defining equations on a 4x4 lattice") {
  const LatticeSpec spec(4, 4, 1.0);
  const int x0 = 5;
  const std::vector<double> cov = free_pinned_covariance(spec, x0);
  const int ns = spec.sites();
  // L C = identity on the unpinned block, zero on the pinned row
  for (int p = 0; p < ns; ++p) {
    if (p == x0) continue;
    for (int q = 0; q < ns; ++q) {
      if (q == x0) continue;
      double acc = 4.0 * cov[static_cast<size_t>(p) * ns + q];
      for (int mu = 0; mu < 2; ++mu)
        for (int step : {+1, -1}) {
          const int nb = spec.neighbor(p, mu, step);
          acc -= cov[static_cast<size_t>(nb) * ns + q];
        }
      CHECK(acc == doctest::Approx(p == q ? 1.0 : 0.0).epsilon(1e-11));
    }
  }
}

TEST_CASE("metropolis runs are deterministic for a fixed configuration") {
  const ActionSpec as = small_action(ActionKind::Liouville);
  McConfig cfg;
  cfg.sweeps = 400;
  cfg.thermalization = 100;
  cfg.seed = 17;
  cfg.pairs = {{1, 2}};
  const McRun first = metropolis_run(as, cfg);
  const McRun second = metropolis_run(as, cfg);
  CHECK(first.acceptance == second.acceptance);
  CHECK(first.width_final == second.width_final);
  CHECK(first.chains.at("d2:1-2") == second.chains.at("d2:1-2"));
  CHECK(first.chains.at("s_int") == second.chains.at("s_int"));
  CHECK(first.samples == 400);
}

TEST_CASE("zero proposal width freezes the chain and accepts everything") {
  const ActionSpec as = small_action(ActionKind::Liouville);
  McConfig cfg;
  cfg.sweeps = 50;
  cfg.thermalization = 10;
  cfg.proposal_width = 0.0;
  cfg.tune = false;
  cfg.seed = 4;
  cfg.pairs = {{1, 2}};
  const McRun run = metropolis_run(as, cfg);
  CHECK(run.acceptance == 1.0);
  for (const double v : run.chains.at("d2:1-2")) CHECK(v == 0.0);
  const auto& s = run.summaries.at("d2:1-2");
  CHECK(s.mean == 0.0);
  CHECK(s.std_error == 0.0);
}

TEST_CASE("tuning drives the acceptance rate into the target window") {
  ActionSpec as = small_action(ActionKind::Liouville);
  McConfig cfg;
  cfg.sweeps = 4000;
  cfg.thermalization = 6000;  // enough tuning windows to walk the width down
  cfg.proposal_width = 40.0;  // absurd start; adaptation must recover
  cfg.seed = 23;
  const McRun run = metropolis_run(as, cfg);
  CHECK(run.acceptance > 0.3);
  CHECK(run.acceptance < 0.7);
  CHECK(run.width_final < 40.0);
}

TEST_CASE("mc configuration is validated against the lattice") {
  const ActionSpec as = small_action(ActionKind::Liouville);
  McConfig cfg;
  cfg.sweeps = 0;
  CHECK_THROWS_AS(metropolis_run(as, cfg), std::invalid_argument);
  cfg.sweeps = 10;
  cfg.stride = 0;
  CHECK_THROWS_AS(metropolis_run(as, cfg), std::invalid_argument);
  cfg.stride = 1;
  cfg.proposal_width = -0.5;
  CHECK_THROWS_AS(metropolis_run(as, cfg), std::invalid_argument);
  cfg.proposal_width = 0.5;
  cfg.pairs = {{0, 99}};
  CHECK_THROWS_AS(metropolis_run(as, cfg), std::invalid_argument);
  ActionSpec bad = as;
  bad.x0 = -3;
  CHECK_THROWS_AS(metropolis_run(bad, McConfig{}), std::invalid_argument);
}

TEST_CASE("difference correlators expose one row per tracked observable") {
  const ActionSpec as = small_action(ActionKind::Liouville);
  McConfig cfg;
  cfg.sweeps = 200;
  cfg.thermalization = 50;
  cfg.seed = 6;
  cfg.pairs = {{1, 2}, {3, 7}};
  const McRun run = metropolis_run(as, cfg);
  const auto rows = diff_correlators(run);
  REQUIRE(rows.size() == 4);  // d2 and expb per pair
  for (const auto& row : rows) {
    const std::string key =
        row.observable + ":" + std::to_string(row.site_a) + "-" + std::to_string(row.site_b);
    const auto& s = run.summaries.at(key);
    CHECK(row.mean == s.mean);
    CHECK(row.std_error == s.std_error);
    CHECK(row.tau_int == s.tau_int);
  }
}

TEST_CASE("free-limit sampler reproduces a covariance entry on a small lattice") {
  ActionSpec as = small_action(ActionKind::FreeGaussian);
  as.couplings.b = 0.0;
  McConfig cfg;
  cfg.sweeps = 40000;
  cfg.thermalization = 2000;
  cfg.stride = 2;
  cfg.seed = 31;
  cfg.pairs = {{1, 2}, {5, 10}};
  const McRun run = metropolis_run(as, cfg);
  const std::vector<double> cov = free_pinned_covariance(as.lattice, as.x0);
  const int ns = as.lattice.sites();
  for (const auto& [p, q] : cfg.pairs) {
    const double exact = cov[static_cast<size_t>(p) * ns + p] +
                         cov[static_cast<size_t>(q) * ns + q] -
                         2.0 * cov[static_cast<size_t>(p) * ns + q];
    const auto& s = run.summaries.at("d2:" + std::to_string(p) + "-" + std::to_string(q));
    CHECK(std::abs(s.mean - exact) <= 3.5 * s.std_error);
    CHECK(s.tau_int >= 0.4);
  }
}
