#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "rtu/distributions.hpp"
#include "rtu/utility.hpp"

namespace rtu {

/// A small, fully discrete scoring problem used by the brute-force axiom
/// oracle: every expectation is a finite double sum.
struct DiscreteInstance {
  std::vector<RuntimeDist> algorithms;  // purely discrete, at most 8 atoms each
  std::vector<Atom> captime_atoms;      // at most 4 atoms, probabilities summing to 1
  UtilityFunction utility;              // normalized
};

struct AxiomReport {
  bool passed = true;
  std::vector<std::string> violations;
  void fail(std::string msg) {
    passed = false;
    violations.push_back(std::move(msg));
  }
};

/// Exact expected truncated utility E[p(t, kappa)] by brute-force double sum
/// over atoms. Mass at infinity contributes 0.
double expected_p(const RuntimeDist& a, const std::vector<Atom>& captime_atoms,
                  const UtilityFunction& u);

/// The synthetic algorithm of the representation theorem's proof: replace
/// each runtime draw t by the lottery [p(t, kappa) : instant success,
/// (1 - p) : never], compounded over the captime distribution. Its expected
/// utility must equal the original algorithm's.
RuntimeDist synthetic_mixture(const RuntimeDist& a, const std::vector<Atom>& captime_atoms,
                              const UtilityFunction& u);

/// Checks on one instance:
///  (i) the synthetic-mixture construction preserves expected utility
///      (residual <= 1e-12),
///  (ii) rankings are invariant under 20 random positive affine rescalings
///       of the utility,
///  (iii) shape of p at every (atom, captime) pair: p(0, kappa) = 1,
///        nonincreasing in t, and p(t, kappa) = 0 exactly when t >= kappa.
AxiomReport check_theorem1(const DiscreteInstance& instance);

/// Mixture-monotonicity: with E[a] >= E[b], the score of [p : a, (1-p) : b]
/// is nondecreasing in p over the given grids, strictly when E[a] > E[b].
AxiomReport check_monotonicity_axiom(const RuntimeDist& a, const RuntimeDist& b,
                                     const std::vector<Atom>& captime_atoms,
                                     const UtilityFunction& u,
                                     const std::vector<double>& p_grid,
                                     const std::vector<double>& q_grid);

struct ContinuityResult {
  double p_star = 0.0;   // weight making [p* : a, (1 - p*) : c] indifferent to b
  double residual = 0.0; // |score(mixture) - score(b)|
  bool degenerate = false;  // all three scores equal; p* = 0.5 by convention
};

/// Requires E[a] >= E[b] >= E[c]; returns the calibration weight
/// p* = (E[b] - E[c]) / (E[a] - E[c]) with residual <= 1e-12.
ContinuityResult check_continuity_axiom(const RuntimeDist& a, const RuntimeDist& b,
                                        const RuntimeDist& c,
                                        const std::vector<Atom>& captime_atoms,
                                        const UtilityFunction& u);

/// Deterministic random instance with rational atom probabilities
/// (denominator <= 10^6) for property sweeps.
DiscreteInstance random_discrete_instance(Rng& rng, UtilityFunction u);

// --- Exact-arithmetic path ---------------------------------------------------
// For rational atom probabilities and the step utility, expectations are
// rational and the oracle equalities hold exactly, not merely within
// tolerance.

using Rational = boost::rational<boost::multiprecision::cpp_int>;

struct ExactAtom {
  Rational t;               // ignored when infinite
  bool infinite = false;
  Rational p;
};

/// Exact E[1{t < kappa}] over atom pairs (step utility, exact arithmetic).
Rational exact_step_score(const std::vector<ExactAtom>& algorithm,
                          const std::vector<ExactAtom>& captime);

/// Exact success probability of the synthetic mixture under the step
/// utility; equals exact_step_score identically (zero residual).
Rational exact_synthetic_success(const std::vector<ExactAtom>& algorithm,
                                 const std::vector<ExactAtom>& captime);

/// Exact continuity weight (eb - ec) / (ea - ec); 1/2 when degenerate.
Rational exact_continuity_weight(const Rational& ea, const Rational& eb, const Rational& ec);

}  // namespace rtu
