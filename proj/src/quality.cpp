#include "rtu/quality.hpp"

#include <cmath>
#include <sstream>

#include "rtu/errors.hpp"

namespace rtu {

namespace {

double quality_p(const QualityUtility& uq, double t, double q, double kappa) {
  return uq.weight(q) * uq.base().p(t, kappa);
}

}  // namespace

double expected_quality_p(const std::vector<QualityAtom>& algorithm,
                          const std::vector<Atom>& captime_atoms, const QualityUtility& uq) {
  double total_mass = 0.0, e = 0.0;
  for (const QualityAtom& a : algorithm) {
    if (!(a.p > 0.0)) throw BadParameters("expected_quality_p: atom masses must be > 0");
    total_mass += a.p;
    if (std::isinf(a.t)) continue;
    for (const Atom& k : captime_atoms) {
      e += a.p * k.p * quality_p(uq, a.t, a.q, k.t);
    }
  }
  if (std::abs(total_mass - 1.0) > 1e-12) {
    throw BadParameters("expected_quality_p: atom masses must sum to 1");
  }
  return e;
}

AxiomReport check_theorem3(const QualityInstance& instance) {
  AxiomReport report;
  const QualityUtility& uq = instance.utility;
  const double q0 = uq.q0(), q1 = uq.q1();

  std::vector<double> scores;
  for (std::size_t ai = 0; ai < instance.algorithms.size(); ++ai) {
    const auto& atoms = instance.algorithms[ai];
    scores.push_back(expected_quality_p(atoms, instance.captime_atoms, uq));

    for (const Atom& ka : instance.captime_atoms) {
      const double kappa = ka.t;
      if (std::abs(quality_p(uq, 0.0, q1, kappa) - 1.0) > 1e-12) {
        report.fail("p(0, q1, kappa) != 1");
      }
      for (const QualityAtom& a : atoms) {
        if (std::isinf(a.t)) continue;
        const double pv = quality_p(uq, a.t, a.q, kappa);
        if (pv < 0.0 || pv > 1.0) report.fail("p outside [0, 1]");
        // 2: nonincreasing in t — compare against a slightly earlier time.
        if (a.t > 0.0 && quality_p(uq, 0.5 * a.t, a.q, kappa) < pv - 1e-15) {
          report.fail("p not nonincreasing in t");
        }
        // 3: nondecreasing in q.
        const double hi_q = std::min(q1, a.q + 0.5 * (q1 - a.q));
        if (quality_p(uq, a.t, hi_q, kappa) < pv - 1e-15) {
          report.fail("p not nondecreasing in q");
        }
        // 4: strictly positive in the interior wherever the base p is.
        if (a.t < kappa && a.q > q0 && uq.base().p(a.t, kappa) > 0.0 && !(pv > 0.0)) {
          report.fail("p not positive for t < kappa, q > q0");
        }
        // 5: zero at the boundary.
        if (a.t >= kappa && pv != 0.0) report.fail("p nonzero at t >= kappa");
        if (quality_p(uq, a.t, q0, kappa) != 0.0) report.fail("p nonzero at q = q0");
      }
    }
  }

  Rng rng(0x7ea1ULL);
  for (int trial = 0; trial < 20; ++trial) {
    const double c1 = 10.0 * rng.uniform();
    const double c0 = 10.0 * rng.uniform() - 5.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      for (std::size_t j = i + 1; j < scores.size(); ++j) {
        const double d = scores[i] - scores[j];
        const double ds = (c1 * scores[i] + c0) - (c1 * scores[j] + c0);
        if ((d > 1e-12 && ds < 0.0) || (d < -1e-12 && ds > 0.0)) {
          report.fail("affine rescaling changed a strict ordering");
        }
      }
    }
  }
  return report;
}

}  // namespace rtu
