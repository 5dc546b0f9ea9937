#pragma once

#include <functional>
#include <optional>

#include "rtu/scoring.hpp"
#include "rtu/utility.hpp"

namespace rtu {

/// A certified estimation budget: m capped samples at the stated captime
/// guarantee |estimate - E[u]| < epsilon with probability at least 1 - delta.
struct SamplePlan {
  double epsilon = 0.0;
  double delta = 0.0;
  std::size_t m = 0;
  double captime = 0.0;  // u^{-1}(epsilon / 2)
  /// u^{-1}(2 epsilon): any captime below this admits an instance on which the
  /// capped mean is off by epsilon no matter how many samples are drawn.
  /// Omitted when epsilon >= 1/2 (2 epsilon exceeds the utility's range).
  std::optional<double> lower_bound_captime;
  double worst_case_compute = 0.0;  // m * captime
  std::string utility_tag;
};

/// Budget for estimating E[u] to within epsilon with probability 1 - delta:
/// m = ceil(ln(2/delta)/2 * ((2-epsilon)/epsilon)^2), captime = u^{-1}(eps/2).
/// Throws NotInvertible for utilities without a one-argument inverse.
SamplePlan plan(const UtilityFunction& u, double epsilon, double delta);

/// External run oracle: given a captime budget in seconds, performs one run
/// and returns (elapsed seconds, completed flag). Elapsed equals the budget
/// when the run was cut off.
using RunOracle = std::function<std::pair<double, bool>(double captime)>;

/// Draws exactly plan.m capped samples from `source` and returns the capped
/// sample-mean utility. The report's CI is the plan's (epsilon, 1 - delta)
/// guarantee around the estimate. Deterministic given the rng seed.
ScoreReport estimate(const RuntimeDist& source, const SamplePlan& plan,
                     const UtilityFunction& u, Rng& rng);

/// As above against an external oracle. If the oracle throws mid-run, the
/// partial mean over completed draws is returned and *partial is set.
ScoreReport estimate(const RunOracle& oracle, const SamplePlan& plan,
                     const UtilityFunction& u, bool* partial = nullptr);

/// A deterministic instance on which capping below u^{-1}(2 epsilon) forces
/// estimation error >= epsilon for every sample count.
struct AdversarialInstance {
  RuntimeDist dist;       // Dirac at a time t with u(t) < epsilon
  double bad_captime;     // strictly below u^{-1}(2 epsilon); u(bad) > 2 eps
  double true_mean;       // exact E[u] of dist
};

/// Requires epsilon < 1/2 (else no captime has utility above 2 epsilon) and a
/// one-argument inverse; throws NoSuchInstance otherwise.
AdversarialInstance adversarial_instance(const UtilityFunction& u, double epsilon);

}  // namespace rtu
