#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "liouwalk/diffusion.hpp"
#include "liouwalk/lattice.hpp"

namespace liouwalk {

// Which exponential-interaction action the sampler targets. The mapped kind
// carries the finite-horizon Gaussian window exp(-(x-x0)^2/(4 g tt)) on the
// interaction; the plain kind is its tt -> infinity limit; free-gaussian
// drops the interaction entirely.
enum class ActionKind { Liouville, MappedFiniteT, FreeGaussian };

struct ActionSpec {
  ActionKind kind = ActionKind::Liouville;
  LatticeSpec lattice;
  Couplings couplings;
  int x0 = 0;  // pinned site, phi(x0) = 0

  void validate() const;
};

// S[phi] = sum_x a^2 [ (1/2) |grad phi|^2 + V(x) exp(b phi(x)) ],
// V(x) = w(x) / (4 pi g^2). Requires phi(x0) == 0.
double action_value(const ScalarField& phi, const ActionSpec& as);

// interaction part of the action only
double interaction_value(const ScalarField& phi, const ActionSpec& as);

// (1/(4 pi g^2)) sum_x a^2 (1 - exp(-(x-x0)^2/(4 g T))): the exact action
// difference between the plain and windowed interactions at phi = 0, and the
// envelope of their difference in general.
double interaction_bound(const ActionSpec& as, double t_horizon);

// (1/(4 pi g^2)) sum_x a^2: the total interaction weight at phi = 0.
double interaction_scale(const ActionSpec& as);

struct McConfig {
  long sweeps = 10000;          // measurement sweeps
  long thermalization = 1000;   // discarded sweeps (tuning happens here)
  int stride = 1;               // measure every stride-th sweep
  double proposal_width = 0.5;  // Gaussian proposal sigma (>= 0)
  bool tune = true;             // adapt width toward 40-60% acceptance, then freeze
  uint64_t seed = 1;
  int batches = 20;
  std::vector<std::pair<int, int>> pairs;  // site pairs to track

  void validate(const LatticeSpec& spec) const;
};

struct ObservableSummary {
  double mean = 0.0;
  double std_error = 0.0;
  double tau_int = 0.5;
};

struct McRun {
  ActionSpec action;
  McConfig config;
  double acceptance = 0.0;    // measured over the measurement phase
  double width_final = 0.0;   // frozen proposal width actually used
  long samples = 0;
  std::map<std::string, std::vector<double>> chains;
  std::map<std::string, ObservableSummary> summaries;
};

// Single-site Metropolis with Gaussian proposals; the pinned site is never
// proposed. Records, per configured pair (p,q), the chains "d2:p-q" of
// (phi_p - phi_q)^2 and "expb:p-q" of exp(b (phi_p - phi_q)), plus "s_int".
McRun metropolis_run(const ActionSpec& as, const McConfig& cfg);

// acceptance probability of the implemented rule for an action change
double accept_probability(double delta_action);

struct CorrelatorRow {
  std::string observable;
  int site_a = 0;
  int site_b = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double tau_int = 0.0;
};

std::vector<CorrelatorRow> diff_correlators(const McRun& run);

// covariance matrix <phi(x) phi(y)> of the pinned free field (row x0 and
// column x0 are zero); ns x ns, row-major. Dense oracle for sampler checks.
std::vector<double> free_pinned_covariance(const LatticeSpec& spec, int x0);

struct TLimitEntry {
  double t_horizon = 0.0;
  double bound = 0.0;
  double max_sigma_distance = 0.0;  // over tracked observables vs reference
};

struct TLimitReport {
  std::vector<TLimitEntry> entries;  // ascending t_horizon
  double bound_over_scale_at_largest = 0.0;
  bool bound_monotone = false;
  bool matches_at_largest = false;  // all tracked observables within 3 sigma
};

// Runs the plain-interaction reference once and the windowed action at each
// horizon, comparing tracked observables and the deterministic bound.
TLimitReport compare_t_limit(const ActionSpec& base, const std::vector<double>& t_values,
                             const McConfig& cfg);

struct TrivialityReport {
  std::vector<double> g_values;
  std::vector<double> interaction_means;
  double slope = 0.0;  // log-log slope of <S_int> against g
};

// At b = 0 the measured interaction term scales as 1/g^2; returns the
// fitted log-log slope across the supplied couplings.
TrivialityReport triviality_check(const std::vector<double>& g_values, const ActionSpec& base,
                                  const McConfig& cfg);

}  // namespace liouwalk
