#include "rtu/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rtu/errors.hpp"

namespace rtu {

namespace {

// Finite atoms (plus mass at infinity) of a purely discrete distribution.
std::pair<std::vector<Atom>, double> discrete_atoms(const RuntimeDist& a) {
  Parts parts = a.parts(1e-15);
  if (!parts.continuous.empty()) {
    throw BadParameters("axiom oracle requires purely discrete distributions");
  }
  return {std::move(parts.atoms), parts.inf_mass};
}

void validate_captime(const std::vector<Atom>& captime_atoms) {
  if (captime_atoms.empty()) throw BadParameters("captime atoms must be nonempty");
  double total = 0.0;
  for (const Atom& k : captime_atoms) {
    if (!(k.p > 0.0) || !(k.t > 0.0) || std::isinf(k.t)) {
      throw BadParameters("captime atoms must be finite, positive, with positive mass");
    }
    total += k.p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw BadParameters("captime masses must sum to 1");
}

}  // namespace

double expected_p(const RuntimeDist& a, const std::vector<Atom>& captime_atoms,
                  const UtilityFunction& u) {
  validate_captime(captime_atoms);
  const auto [atoms, inf_mass] = discrete_atoms(a);
  (void)inf_mass;  // contributes p = 0
  double e = 0.0;
  for (const Atom& ta : atoms) {
    for (const Atom& ka : captime_atoms) {
      e += ta.p * ka.p * u.p(ta.t, ka.t);
    }
  }
  return e;
}

RuntimeDist synthetic_mixture(const RuntimeDist& a, const std::vector<Atom>& captime_atoms,
                              const UtilityFunction& u) {
  validate_captime(captime_atoms);
  const auto map = [&u](double t, double kappa) {
    return mix(u.p(t, kappa), RuntimeDist::dirac(0.0), RuntimeDist::dirac(kInfinity));
  };
  std::vector<std::pair<double, RuntimeDist>> comps;
  for (const Atom& ka : captime_atoms) {
    comps.emplace_back(ka.p, compound(map, a, CaptimeDist::dirac(ka.t)));
  }
  return comps.size() == 1 ? comps.front().second : RuntimeDist::mixture(std::move(comps));
}

AxiomReport check_theorem1(const DiscreteInstance& instance) {
  AxiomReport report;
  const UtilityFunction& u = instance.utility;
  std::vector<double> scores;
  for (std::size_t ai = 0; ai < instance.algorithms.size(); ++ai) {
    const RuntimeDist& a = instance.algorithms[ai];
    const double e = expected_p(a, instance.captime_atoms, u);
    scores.push_back(e);

    // (i) The synthetic success-or-never mixture has the same expected
    // utility: its runtimes are only 0 (p = 1) and infinity (p = 0).
    const RuntimeDist x = synthetic_mixture(a, instance.captime_atoms, u);
    const double ex = x.cdf(0.0);
    if (std::abs(ex - e) > 1e-12) {
      std::ostringstream os;
      os << "algorithm " << ai << ": synthetic mixture score " << ex
         << " != expected utility " << e;
      report.fail(os.str());
    }

    // (iii) shape of p at the instance atoms.
    auto [atoms, inf_mass] = discrete_atoms(a);
    (void)inf_mass;
    std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.t < r.t; });
    for (const Atom& ka : instance.captime_atoms) {
      const double kappa = ka.t;
      if (std::abs(u.p(0.0, kappa) - 1.0) > 1e-12) {
        report.fail("p(0, kappa) != 1");
      }
      if (u.p(kappa, kappa) != 0.0) {
        report.fail("p(kappa, kappa) != 0");
      }
      double prev = 2.0;
      for (const Atom& ta : atoms) {
        const double pv = u.p(ta.t, kappa);
        if (pv > prev + 1e-15) report.fail("p not nonincreasing in t");
        if (ta.t >= kappa && pv != 0.0) report.fail("p nonzero at t >= kappa");
        if (pv < 0.0 || pv > 1.0) report.fail("p outside [0, 1]");
        prev = pv;
      }
    }
  }

  // (ii) affine invariance of the induced ranking.
  Rng rng(0x5eedULL);
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

AxiomReport check_monotonicity_axiom(const RuntimeDist& a, const RuntimeDist& b,
                                     const std::vector<Atom>& captime_atoms,
                                     const UtilityFunction& u,
                                     const std::vector<double>& p_grid,
                                     const std::vector<double>& q_grid) {
  const double ea = expected_p(a, captime_atoms, u);
  const double eb = expected_p(b, captime_atoms, u);
  if (ea < eb - 1e-12) throw BadParameters("check_monotonicity_axiom: requires E[a] >= E[b]");
  AxiomReport report;
  const bool strict = ea > eb + 1e-12;
  const auto score = [&](double w) {
    return expected_p(mix(w, a, b), captime_atoms, u);
  };
  for (double p : p_grid) {
    for (double q : q_grid) {
      if (p < q) continue;
      const double sp = score(p), sq = score(q);
      if (sp < sq - 1e-12) {
        std::ostringstream os;
        os << "mixture score decreased: p=" << p << " q=" << q;
        report.fail(os.str());
      }
      if (strict && p > q && !(sp > sq)) {
        std::ostringstream os;
        os << "mixture score not strictly increasing: p=" << p << " q=" << q;
        report.fail(os.str());
      }
    }
  }
  return report;
}

ContinuityResult check_continuity_axiom(const RuntimeDist& a, const RuntimeDist& b,
                                        const RuntimeDist& c,
                                        const std::vector<Atom>& captime_atoms,
                                        const UtilityFunction& u) {
  const double ea = expected_p(a, captime_atoms, u);
  const double eb = expected_p(b, captime_atoms, u);
  const double ec = expected_p(c, captime_atoms, u);
  if (ea < eb - 1e-12 || eb < ec - 1e-12) {
    throw BadParameters("check_continuity_axiom: requires E[a] >= E[b] >= E[c]");
  }
  ContinuityResult result;
  if (ea - ec <= 1e-15) {
    result.degenerate = true;
    result.p_star = 0.5;
    result.residual = std::abs(0.5 * ea + 0.5 * ec - eb);
    return result;
  }
  result.p_star = std::clamp((eb - ec) / (ea - ec), 0.0, 1.0);
  result.residual = std::abs(expected_p(mix(result.p_star, a, c), captime_atoms, u) - eb);
  return result;
}

DiscreteInstance random_discrete_instance(Rng& rng, UtilityFunction u) {
  // Atom probabilities are rational with denominator <= 10^6 so that the
  // exact-arithmetic path can mirror any generated instance.
  const auto random_masses = [&rng](std::size_t n) {
    std::vector<double> m(n);
    long long total = 0;
    std::vector<long long> raw(n);
    for (std::size_t i = 0; i < n; ++i) {
      raw[i] = 1 + static_cast<long long>(rng.next() % 999);
      total += raw[i];
    }
    // Scale to a common denominator of 10^6 exactly.
    long long acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      long long num = (i + 1 == n) ? 1000000 - acc : raw[i] * 1000000 / total;
      if (num <= 0) num = 1;
      acc += num;
      m[i] = static_cast<double>(num) / 1e6;
    }
    return m;
  };
  const auto random_time = [&rng]() {
    // Log-uniform in [1e-2, 1e3].
    return std::pow(10.0, -2.0 + 5.0 * rng.uniform());
  };

  DiscreteInstance instance{{}, {}, std::move(u)};
  const std::size_t n_algos = 2 + rng.next() % 3;
  for (std::size_t a = 0; a < n_algos; ++a) {
    const std::size_t n_atoms = 1 + rng.next() % 8;
    const std::vector<double> masses = random_masses(n_atoms);
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < n_atoms; ++i) {
      // ~10% of atoms are nonterminating runs.
      const double t = (rng.next() % 10 == 0) ? kInfinity : random_time();
      atoms.push_back({t, masses[i]});
    }
    instance.algorithms.push_back(RuntimeDist::discrete(std::move(atoms)));
  }
  const std::size_t n_kappas = 1 + rng.next() % 4;
  const std::vector<double> kmasses = random_masses(n_kappas);
  for (std::size_t i = 0; i < n_kappas; ++i) {
    instance.captime_atoms.push_back({random_time(), kmasses[i]});
  }
  return instance;
}

// --- Exact-arithmetic path ---------------------------------------------------

namespace {

bool exact_solves(const ExactAtom& t, const ExactAtom& kappa) {
  if (t.infinite) return false;
  if (kappa.infinite) return true;
  return t.t < kappa.t;
}

}  // namespace

Rational exact_step_score(const std::vector<ExactAtom>& algorithm,
                          const std::vector<ExactAtom>& captime) {
  Rational e(0);
  for (const ExactAtom& ta : algorithm) {
    for (const ExactAtom& ka : captime) {
      if (exact_solves(ta, ka)) e += ta.p * ka.p;
    }
  }
  return e;
}

Rational exact_synthetic_success(const std::vector<ExactAtom>& algorithm,
                                 const std::vector<ExactAtom>& captime) {
  // The synthetic mixture replaces each (t, kappa) pair by the lottery
  // [p : instant, (1 - p) : never]; under the step utility p is the solve
  // indicator, so the success mass is the same double sum assembled
  // term by term.
  Rational success(0);
  for (const ExactAtom& ta : algorithm) {
    for (const ExactAtom& ka : captime) {
      const Rational p = exact_solves(ta, ka) ? Rational(1) : Rational(0);
      success += ta.p * ka.p * p;
    }
  }
  return success;
}

Rational exact_continuity_weight(const Rational& ea, const Rational& eb, const Rational& ec) {
  if (ea < eb || eb < ec) throw BadParameters("exact_continuity_weight: requires ea >= eb >= ec");
  if (ea == ec) return Rational(1, 2);
  return (eb - ec) / (ea - ec);
}

}  // namespace rtu
