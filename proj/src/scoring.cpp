#include "rtu/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "rtu/errors.hpp"

namespace rtu {

namespace {

constexpr std::size_t kInitialCells = 256;
constexpr std::size_t kMaxCells = 1u << 21;

// Riemann-Stieltjes sum of f dF over [lo, hi] with n log-spaced cells per
// smooth segment; f is evaluated at geometric cell midpoints. Mass outside
// [lo, hi] is assigned the boundary value of f.
double stieltjes(const ContinuousPart& part, const std::function<double(double)>& f,
                 const std::vector<double>& breakpoints, std::size_t n) {
  std::vector<double> cuts{std::max(part.lo, 1e-300)};
  for (double b : breakpoints) {
    if (b > cuts.front() && b < part.hi) cuts.push_back(b);
  }
  cuts.push_back(part.hi);
  std::sort(cuts.begin(), cuts.end());

  double total = part.cdf(cuts.front()) * f(cuts.front());
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    const double la = std::log(a), lb = std::log(b);
    double prev_edge = a;
    double prev_cdf = part.cdf(a);
    for (std::size_t i = 1; i <= n; ++i) {
      const double edge = (i == n) ? b : std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n));
      const double c = part.cdf(edge);
      if (c > prev_cdf) total += (c - prev_cdf) * f(std::sqrt(prev_edge * edge));
      prev_edge = edge;
      prev_cdf = c;
    }
  }
  total += (1.0 - part.cdf(part.hi)) * f(part.hi);
  return part.weight * total;
}

double integrate_part(const ContinuousPart& part, const std::function<double(double)>& f,
                      const std::vector<double>& breakpoints, double quad_tol) {
  std::size_t n = kInitialCells;
  double prev = stieltjes(part, f, breakpoints, n);
  while (n <= kMaxCells) {
    n *= 2;
    const double cur = stieltjes(part, f, breakpoints, n);
    if (std::abs(cur - prev) < 0.5 * quad_tol) return cur;
    prev = cur;
  }
  throw QuadratureNotConverged("runtime expectation did not converge");
}

// E over t ~ a of f(t), where f(infinity) = value_at_inf.
double expect_runtime(const RuntimeDist& a, const std::function<double(double)>& f,
                      double value_at_inf, const std::vector<double>& breakpoints,
                      double quad_tol) {
  const Parts parts = a.parts(1e-15);
  double total = parts.inf_mass * value_at_inf;
  for (const Atom& atom : parts.atoms) total += atom.p * f(atom.t);
  if (!parts.continuous.empty()) {
    const double per_part = quad_tol / static_cast<double>(parts.continuous.size());
    for (const ContinuousPart& part : parts.continuous) {
      total += integrate_part(part, f, breakpoints, per_part);
    }
  }
  return total;
}

double expect_utility_at_kappa(const RuntimeDist& a, const UtilityFunction& u, double kappa,
                               double quad_tol) {
  return expect_runtime(
      a, [&](double t) { return u.evaluate(t, kappa); }, u.c0(), u.breakpoints(kappa), quad_tol);
}

ConfidenceInterval hoeffding_ci(double score, std::size_t n, double confidence) {
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw BadParameters("confidence must be in (0, 1)");
  }
  const double half = std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(n)));
  return {score - half, score + half, confidence};
}

}  // namespace

ScoreReport score_analytic(const RuntimeDist& a, const CaptimeDist& k,
                           const UtilityFunction& u, double quad_tol) {
  ScoreReport report;
  report.method = "analytic";
  report.utility_tag = u.tag();

  if (!u.depends_on_kappa()) {
    report.score = expect_utility_at_kappa(a, u, kInfinity, quad_tol);
    return report;
  }
  if (k.is_dirac()) {
    report.score = expect_utility_at_kappa(a, u, k.params()[0], quad_tol);
    return report;
  }
  if (u.family() == UtilityFunction::Family::Step) {
    // E_kappa[1{t < kappa}] = 1 - F_K(t): the survival utility of K.
    const UtilityFunction surv = UtilityFunction::survival_of(k).with_affine(u.c1(), u.c0());
    report.score = expect_utility_at_kappa(a, surv, kInfinity, quad_tol);
    return report;
  }
  // Remaining case: utility depends on a random kappa in a non-step way
  // (LinearMoney). Outer quadrature over kappa with grid doubling.
  const double klo = std::max(k.quantile(1e-13), 1e-300);
  double khi = k.quantile(1.0 - 1e-13);
  if (std::isinf(khi)) khi = k.quantile(1.0 - 1e-9);
  // E[u(t, kappa)] jumps in kappa wherever the runtime has an atom, so force
  // grid edges onto those times; midpoint evaluation then never straddles a
  // discontinuity and the doubling iteration can actually converge.
  std::vector<double> jump_edges;
  for (const Atom& atom : a.parts(1e-15).atoms) {
    if (atom.t > klo && atom.t < khi) jump_edges.push_back(atom.t);
  }
  std::size_t n = kInitialCells;
  const auto outer = [&](std::size_t cells) {
    std::vector<double> edges = log_grid(klo, khi * (1.0 + 1e-12), cells);
    edges.insert(edges.end(), jump_edges.begin(), jump_edges.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    // Midpoint Riemann-Stieltjes sum in kappa; the clipped boundary mass
    // (about 1e-13 on each side) is assigned the boundary value.
    double total = k.cdf(edges.front()) * expect_utility_at_kappa(a, u, edges.front(), quad_tol * 0.25);
    double prev_cdf = k.cdf(edges.front());
    for (std::size_t i = 1; i < edges.size(); ++i) {
      const double c = k.cdf(edges[i]);
      if (c > prev_cdf) {
        const double mid = std::sqrt(edges[i - 1] * edges[i]);
        total += (c - prev_cdf) * expect_utility_at_kappa(a, u, mid, quad_tol * 0.25);
      }
      prev_cdf = c;
    }
    total += (1.0 - prev_cdf) * expect_utility_at_kappa(a, u, edges.back(), quad_tol * 0.25);
    return total;
  };
  double prev = outer(n);
  while (n <= kMaxCells) {
    n *= 2;
    const double cur = outer(n);
    if (std::abs(cur - prev) < 0.25 * quad_tol) {
      report.score = cur;
      return report;
    }
    prev = cur;
  }
  throw QuadratureNotConverged("captime expectation did not converge");
}

namespace {

double common_captime(const std::vector<RuntimeSample>& samples) {
  double captime = samples.front().captime_used;
  for (const RuntimeSample& s : samples) {
    if (s.captime_used != captime) {
      throw MixedCaptimes("samples must share a single captime");
    }
    if (s.censored && s.observed != s.captime_used) {
      throw BadParameters("censored sample must have observed == captime");
    }
    if (!s.censored && !(s.observed < s.captime_used)) {
      throw BadParameters("uncensored sample must have observed < captime");
    }
  }
  return captime;
}

}  // namespace

ScoreReport score_empirical(const std::vector<RuntimeSample>& samples,
                            const UtilityFunction& u, double confidence) {
  if (samples.empty()) throw EmptyInput("no samples");
  const double captime = common_captime(samples);
  ScoreReport report;
  report.method = "empirical";
  report.utility_tag = u.tag();
  report.n_samples = samples.size();
  double sum = 0.0;
  for (const RuntimeSample& s : samples) {
    sum += u.evaluate(s.observed, captime);
    report.total_compute += s.observed;
  }
  report.score = sum / static_cast<double>(samples.size());
  report.ci = hoeffding_ci(report.score, samples.size(), confidence);
  return report;
}

ScoreReport score_quality(const std::vector<QualitySample>& samples,
                          const QualityUtility& uq, double confidence) {
  if (samples.empty()) throw EmptyInput("no samples");
  const double captime = samples.front().captime_used;
  ScoreReport report;
  report.method = "empirical";
  report.utility_tag = "quality|" + uq.base().tag();
  report.n_samples = samples.size();
  double sum = 0.0;
  for (const QualitySample& s : samples) {
    if (s.captime_used != captime) throw MixedCaptimes("samples must share a single captime");
    // Censored runs yield the default action: quality q0, weight 0.
    sum += s.censored ? uq.base().c0() : uq.evaluate(s.runtime, s.quality, captime);
    report.total_compute += s.runtime;
  }
  report.score = sum / static_cast<double>(samples.size());
  report.ci = hoeffding_ci(report.score, samples.size(), confidence);
  return report;
}

ClassicalScores classical_scores(const std::vector<RuntimeSample>& samples,
                                 double captime, double par_factor) {
  if (samples.empty()) throw EmptyInput("no samples");
  if (!(par_factor >= 1.0)) throw BadParameters("par factor must be >= 1");
  ClassicalScores out;
  const double n = static_cast<double>(samples.size());
  std::size_t solved = 0;
  double sum_capped = 0.0, sum_par = 0.0, sum_raw = 0.0;
  for (const RuntimeSample& s : samples) {
    const double capped = std::min(s.observed, captime);
    sum_capped += capped;
    if (s.censored) {
      out.any_censored = true;
      sum_par += par_factor * captime;
    } else {
      ++solved;
      sum_par += capped;
      sum_raw += s.observed;
    }
  }
  out.capped_mean = sum_capped / n;
  out.par_c = sum_par / n;
  out.fraction_solved = static_cast<double>(solved) / n;
  out.mean = out.any_censored ? kInfinity : sum_raw / n;
  return out;
}

ClassicalScores classical_scores_analytic(const RuntimeDist& a, double captime,
                                          double par_factor) {
  if (!(par_factor >= 1.0)) throw BadParameters("par factor must be >= 1");
  if (!(captime > 0.0) || std::isinf(captime)) throw BadParameters("captime must be finite positive");
  const Parts parts = a.parts(1e-15);
  if (!parts.continuous.empty()) {
    throw BadParameters("analytic classical scores require a discrete distribution");
  }
  ClassicalScores out;
  double solved_mass = 0.0, solved_time = 0.0;
  for (const Atom& atom : parts.atoms) {
    if (atom.t < captime) {
      solved_mass += atom.p;
      solved_time += atom.p * atom.t;
    }
  }
  const double censored_mass = 1.0 - solved_mass;
  out.fraction_solved = solved_mass;
  out.any_censored = censored_mass > 0.0;
  out.capped_mean = solved_time + censored_mass * captime;
  out.par_c = solved_time + censored_mass * par_factor * captime;
  out.mean = out.any_censored ? kInfinity : solved_time;
  return out;
}

std::vector<RankedEntry> rank(const std::map<std::string, ScoreReport>& reports) {
  if (reports.empty()) throw EmptyInput("no reports to rank");
  const std::string& tag = reports.begin()->second.utility_tag;
  for (const auto& [name, r] : reports) {
    if (r.utility_tag != tag) {
      throw IncomparableReports("reports were scored under different utilities");
    }
  }
  std::vector<RankedEntry> out;
  std::vector<const ScoreReport*> ptrs;
  std::vector<std::string> names;
  for (const auto& [name, r] : reports) {
    out.push_back({name, r.score, 0});
    ptrs.push_back(&r);
  }
  std::vector<std::size_t> idx(out.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    if (out[i].score != out[j].score) return out[i].score > out[j].score;
    return out[i].name < out[j].name;
  });

  std::vector<RankedEntry> sorted;
  std::size_t group = 0;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    RankedEntry e = out[idx[r]];
    if (r > 0) {
      const ScoreReport& prev = *ptrs[idx[r - 1]];
      const ScoreReport& cur = *ptrs[idx[r]];
      double slack = 1e-12;
      if (prev.ci) slack += prev.score - prev.ci->low;
      if (cur.ci) slack += cur.ci->high - cur.score;
      if (sorted.back().score - e.score > slack) ++group;
    }
    e.tie_group = group;
    sorted.push_back(e);
  }
  return sorted;
}

}  // namespace rtu
