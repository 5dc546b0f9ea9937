#pragma once

#include <cstddef>
#include <vector>

#include "rtu/distributions.hpp"

namespace rtu {

/// One constraint of a maximum-differential-entropy problem over captimes.
struct Constraint {
  enum class Kind {
    Normalize,                // total mass 1 (always enforced; listed for clarity)
    BoundedSupport,           // support restricted to [0, kappa0]
    Mean,                     // E[kappa] = kappa0
    LogMeanAbove,             // support [kappa0, inf); E[log(kappa/kappa0)] = 1/alpha
    TwoTailLog,               // E[log(kappa0/kappa)^-] = p/beta; E[log(kappa/kappa0)^+] = (1-p)/alpha
    CenteredLogSecondMoment,  // E[log(kappa/kappa0)] = 0; E[log^2(kappa/kappa0)] = sigma^2
    TailProbability,          // P(kappa <= kappa1) = delta
    ContinuityAt,             // density continuous at kappa0 (emerges from the solution form)
  };

  Kind kind = Kind::Normalize;
  double kappa0 = 0.0;
  double kappa1 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double p = 0.0;
  double sigma = 0.0;
  double delta = 0.0;

  static Constraint normalize();
  static Constraint bounded_support(double kappa0);
  static Constraint mean(double kappa0);
  static Constraint log_mean_above(double kappa0, double alpha);
  static Constraint two_tail_log(double kappa0, double alpha, double beta, double p);
  static Constraint centered_log_second_moment(double kappa0, double sigma);
  static Constraint tail_probability(double kappa1, double delta);
  static Constraint continuity_at(double kappa0);
};

/// Maximize the discretized differential entropy -sum m_j log(m_j / w_j)
/// over cell masses m_j subject to the constraints. Unbounded-support
/// problems must be truncated by the caller where the expected tail mass is
/// negligible.
struct EntropyProblem {
  std::vector<double> grid_edges;       // ascending; at least 513 edges (512 cells)
  std::vector<Constraint> constraints;
};

struct SolveInfo {
  std::size_t iterations = 0;
  double max_residual = 0.0;
  double entropy = 0.0;  // discretized entropy of the solution, nats
};

/// Solves via the Lagrange dual: the stationarity condition gives the
/// exponential family f = exp(-1 - lambda_0 - sum lambda_i g_i), so Newton
/// iteration on the moment-matching residuals (Jacobian = negative moment
/// covariance) converges to the unique maximizer. Throws Infeasible when a
/// target lies outside the achievable range on the grid, NotConverged when
/// the iteration cap is hit.
CaptimeDist solve_maxent(const EntropyProblem& problem, double tol = 1e-8,
                         SolveInfo* info = nullptr);

/// The exact parametric maximizer for a recognized constraint set:
///   {BoundedSupport}                  -> Uniform(kappa0)
///   {Mean}                            -> Exponential(kappa0)
///   {LogMeanAbove}                    -> Pareto(kappa0, alpha)
///   {TwoTailLog [, ContinuityAt]}     -> GeneralizedLogLaplace(kappa0, alpha, beta),
///                                        requires p = alpha / (alpha + beta)
///   {CenteredLogSecondMoment}         -> LogNormal(kappa0, sigma)
///   {TailProbability, BoundedSupport} -> PiecewiseTail(kappa0, kappa1, delta)
/// Normalize is implicit. Throws UnknownConstraintSet otherwise.
CaptimeDist closed_form(const std::vector<Constraint>& constraints);

/// Per-cell masses of k on the grid; mass outside the grid is folded into
/// the end cells.
std::vector<double> cell_masses(const CaptimeDist& k, const std::vector<double>& edges);

/// Discretized differential entropy -sum m_j log(m_j / w_j) in nats.
double grid_entropy(const std::vector<double>& masses, const std::vector<double>& edges);

/// Total-variation distance between two mass vectors on a common grid.
double total_variation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace rtu
