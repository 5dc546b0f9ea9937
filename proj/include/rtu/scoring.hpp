#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtu/distributions.hpp"
#include "rtu/utility.hpp"

namespace rtu {

/// One capped runtime observation.
struct RuntimeSample {
  double observed = 0.0;       // min(t, captime)
  bool censored = false;       // run was cut off at captime
  double captime_used = 0.0;
};

/// Capped observation with solution quality (quality extension).
struct QualitySample {
  double runtime = 0.0;
  double quality = 0.0;  // q0 for censored runs (the default action)
  bool censored = false;
  double captime_used = 0.0;
};

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;
  double confidence = 0.0;
};

struct ScoreReport {
  std::string name;
  double score = 0.0;
  std::string method;  // "analytic" or "empirical"
  std::optional<ConfidenceInterval> ci;
  std::size_t n_samples = 0;
  double total_compute = 0.0;  // seconds of (capped) runtime consumed
  std::string utility_tag;
};

/// s_K(A) = E[u(t, kappa)] by quadrature with grid-doubling convergence to
/// quad_tol. Mass at infinity contributes u = c0.
ScoreReport score_analytic(const RuntimeDist& a, const CaptimeDist& k,
                           const UtilityFunction& u, double quad_tol = 1e-9);

/// Capped sample mean utility with a Hoeffding confidence interval of
/// half-width sqrt(ln(2 / (1 - confidence)) / (2n)). All samples must share
/// one captime. Censored samples contribute u(captime).
ScoreReport score_empirical(const std::vector<RuntimeSample>& samples,
                            const UtilityFunction& u, double confidence = 0.95);

/// As score_empirical but over (t, q) pairs; censored samples contribute the
/// default-action utility c0.
ScoreReport score_quality(const std::vector<QualitySample>& samples,
                          const QualityUtility& uq, double confidence = 0.95);

/// The classical scoring baselines over capped samples.
struct ClassicalScores {
  double mean = 0.0;  // infinity when any sample was censored
  double capped_mean = 0.0;
  double par_c = 0.0;
  double fraction_solved = 0.0;
  bool any_censored = false;
};

ClassicalScores classical_scores(const std::vector<RuntimeSample>& samples,
                                 double captime, double par_factor);

/// Exact classical scores of a purely discrete distribution capped at
/// `captime` (runs with t >= captime are censored).
ClassicalScores classical_scores_analytic(const RuntimeDist& a, double captime,
                                          double par_factor);

struct RankedEntry {
  std::string name;
  double score = 0.0;
  std::size_t tie_group = 0;  // 0-based, increasing down the ranking
};

/// Descending by score, ties grouped when scores differ by at most the
/// combined CI slack (or 1e-12 for analytic reports); names break ties
/// deterministically. Reports must share one utility.
std::vector<RankedEntry> rank(const std::map<std::string, ScoreReport>& reports);

}  // namespace rtu
