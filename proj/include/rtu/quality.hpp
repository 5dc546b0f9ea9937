#pragma once

#include <vector>

#include "rtu/axioms.hpp"
#include "rtu/utility.hpp"

namespace rtu {

/// One atom of a discrete distribution over (runtime, quality) pairs.
struct QualityAtom {
  double t = 0.0;
  double q = 0.0;
  double p = 0.0;
};

/// A fully discrete scoring problem over (t, q) outcomes.
struct QualityInstance {
  std::vector<std::vector<QualityAtom>> algorithms;  // each a distribution over (t, q)
  std::vector<Atom> captime_atoms;
  QualityUtility utility;
};

/// Exact expected quality-weighted p by brute-force sum: E[w(q) p(t, kappa)].
/// Runs at infinite t contribute 0.
double expected_quality_p(const std::vector<QualityAtom>& algorithm,
                          const std::vector<Atom>& captime_atoms, const QualityUtility& uq);

/// Verifies the quality-extended p shape at every (atom, captime) pair:
///   1. p(0, q1, kappa) = 1
///   2. nonincreasing in t at fixed q
///   3. nondecreasing in q at fixed t
///   4. p(t, q, kappa) > 0 for t < kappa, q > q0, wherever the base p is positive
///   5. p = 0 at t >= kappa and at q = q0
/// plus affine-invariance of the algorithm ranking (20 random rescalings).
AxiomReport check_theorem3(const QualityInstance& instance);

}  // namespace rtu
