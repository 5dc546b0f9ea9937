#include "rtu/estimation.hpp"

#include <cmath>

#include "rtu/errors.hpp"

namespace rtu {

SamplePlan plan(const UtilityFunction& u, double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw BadParameters("plan: epsilon must be in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw BadParameters("plan: delta must be in (0, 1)");
  SamplePlan p;
  p.epsilon = epsilon;
  p.delta = delta;
  const double ratio = (2.0 - epsilon) / epsilon;
  p.m = static_cast<std::size_t>(std::ceil(0.5 * std::log(2.0 / delta) * ratio * ratio));
  p.captime = u.inverse(0.5 * epsilon).t;
  if (2.0 * epsilon < 1.0) {
    p.lower_bound_captime = u.inverse(2.0 * epsilon).t;
  }
  p.worst_case_compute = static_cast<double>(p.m) * p.captime;
  p.utility_tag = u.tag();
  return p;
}

namespace {

ScoreReport finish_report(const SamplePlan& plan, double sum, double compute, std::size_t n) {
  ScoreReport report;
  report.method = "empirical";
  report.utility_tag = plan.utility_tag;
  report.n_samples = n;
  report.total_compute = compute;
  report.score = n ? sum / static_cast<double>(n) : 0.0;
  report.ci = ConfidenceInterval{report.score - plan.epsilon, report.score + plan.epsilon,
                                 1.0 - plan.delta};
  return report;
}

}  // namespace

ScoreReport estimate(const RuntimeDist& source, const SamplePlan& plan,
                     const UtilityFunction& u, Rng& rng) {
  double sum = 0.0, compute = 0.0;
  for (std::size_t i = 0; i < plan.m; ++i) {
    const double t = source.sample(rng);
    const double observed = std::min(t, plan.captime);
    sum += u.evaluate(observed, plan.captime);
    compute += observed;
  }
  return finish_report(plan, sum, compute, plan.m);
}

ScoreReport estimate(const RunOracle& oracle, const SamplePlan& plan,
                     const UtilityFunction& u, bool* partial) {
  if (partial) *partial = false;
  double sum = 0.0, compute = 0.0;
  std::size_t done = 0;
  for (std::size_t i = 0; i < plan.m; ++i) {
    std::pair<double, bool> run;
    try {
      run = oracle(plan.captime);
    } catch (...) {
      if (partial) {
        *partial = true;
        break;
      }
      throw;
    }
    const double observed = run.second ? std::min(run.first, plan.captime) : plan.captime;
    sum += u.evaluate(observed, plan.captime);
    compute += observed;
    ++done;
  }
  return finish_report(plan, sum, compute, done);
}

AdversarialInstance adversarial_instance(const UtilityFunction& u, double epsilon) {
  if (!(epsilon > 0.0)) throw BadParameters("adversarial_instance: epsilon must be positive");
  if (epsilon >= 0.5) {
    throw NoSuchInstance("no captime has utility above 2*epsilon when epsilon >= 1/2");
  }
  UtilityFunction::InverseResult t_eps, bad;
  try {
    // u(t_eps) = eps/2 < eps; u(bad) = (1 + 2 eps)/2 > 2 eps, so
    // bad < u^{-1}(2 eps) and every run at captime `bad` is censored.
    t_eps = u.inverse(0.5 * epsilon);
    bad = u.inverse(0.5 * (1.0 + 2.0 * epsilon));
  } catch (const NotInvertible& e) {
    throw NoSuchInstance(e.what());
  }
  return {RuntimeDist::dirac(t_eps.t), bad.t, u.evaluate_normalized(t_eps.t)};
}

}  // namespace rtu
