#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rtu/math.hpp"

namespace rtu {

/// A point mass in a discretized distribution.
struct Atom {
  double t = 0.0;
  double p = 0.0;
};

/// Result of collapsing a distribution to point masses.
struct Atomization {
  std::vector<Atom> atoms;      // finite support, ascending t, probabilities > 0
  double inf_mass = 0.0;        // mass at t = infinity
  double truncated_tail = 0.0;  // mass folded into the last atom by truncation
};

/// One continuous component of a distribution, for quadrature.
struct ContinuousPart {
  double weight = 1.0;
  std::function<double(double)> cdf;  // conditional CDF of this component
  double lo = 0.0;                    // F(lo) <= tail tolerance
  double hi = 0.0;                    // 1 - F(hi) <= tail tolerance
};

/// Split of a distribution into exact atoms plus continuous components.
struct Parts {
  std::vector<Atom> atoms;
  double inf_mass = 0.0;
  std::vector<ContinuousPart> continuous;
};

/// Log-spaced grid of n points spanning [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// Evenly spaced grid of n points spanning [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

/// The default discretization grid: 2048 log-spaced points on [1e-6, 1e6].
const std::vector<double>& default_grid();

/// A probability distribution over runtimes in [0, infinity]. Mass at
/// infinity models runs that never finish. Values are immutable after
/// construction; instances are cheap to copy and safe to read concurrently.
class RuntimeDist {
 public:
  static RuntimeDist dirac(double t);
  static RuntimeDist discrete(std::vector<Atom> points);
  static RuntimeDist st_petersburg();
  static RuntimeDist exponential(double rate);
  static RuntimeDist log_normal(double mu, double sigma);
  static RuntimeDist weibull(double shape, double scale);
  static RuntimeDist pareto(double xmin, double alpha);
  static RuntimeDist mixture(std::vector<std::pair<double, RuntimeDist>> components);

  /// Loads a DiscreteEmpirical distribution from CSV with header
  /// `runtime_seconds,probability`; infinity is the literal `inf`.
  static RuntimeDist from_csv(std::istream& in);
  static RuntimeDist from_csv_file(const std::string& path);

  /// P(T <= t), right-continuous. cdf(infinity) counts all mass including
  /// the atom at infinity, i.e. it is always 1.
  double cdf(double t) const;

  /// Total mass strictly at t = infinity.
  double mass_at_infinity() const;

  /// Deterministic inverse-CDF draw; may return kInfinity.
  double sample(Rng& rng) const;

  /// True when the distribution is composed only of point masses.
  bool purely_discrete() const;

  /// Exact atoms plus continuous components with tail bounds for quadrature.
  Parts parts(double tail_tol = 1e-12) const;

  /// Collapses to point masses. Discrete components keep their exact atoms;
  /// continuous components put each grid cell's mass at the cell's right
  /// edge. Throws NonDiscretizable if more than tail_tol mass lies beyond
  /// the grid or the truncation of an infinite discrete support.
  Atomization atomize(const std::vector<double>& grid, double tail_tol = 1e-9) const;

  struct Node;
  explicit RuntimeDist(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node& node() const { return *node_; }

 private:
  std::shared_ptr<const Node> node_;
};

/// Mixture [p : a, (1-p) : b].
RuntimeDist mix(double p, const RuntimeDist& a, const RuntimeDist& b);

/// Distribution over captimes. Dirac or one of the maximum-entropy families.
class CaptimeDist {
 public:
  enum class Family {
    Dirac,
    Uniform,
    Exponential,
    Pareto,
    LogLaplace,
    GeneralizedLogLaplace,
    LogNormal,
    PiecewiseTail,
    GridEmpirical,
  };

  static CaptimeDist dirac(double kappa);
  static CaptimeDist uniform(double kappa0);
  static CaptimeDist exponential(double mean_kappa0);
  static CaptimeDist pareto(double kappa0, double alpha);
  static CaptimeDist log_laplace(double kappa0, double alpha);
  static CaptimeDist generalized_log_laplace(double kappa0, double alpha, double beta);
  static CaptimeDist log_normal(double kappa0, double sigma);
  static CaptimeDist piecewise_tail(double kappa0, double kappa1, double delta);
  /// Piecewise-constant density: edges has n+1 ascending entries, density n.
  static CaptimeDist grid_empirical(std::vector<double> edges, std::vector<double> density);

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }

  double cdf(double kappa) const;
  double pdf(double kappa) const;  // 0 for Dirac
  double quantile(double p) const;
  double sample(Rng& rng) const;

  bool is_dirac() const { return family_ == Family::Dirac; }

  /// Collapses to point masses on the grid, as RuntimeDist::atomize.
  Atomization atomize(const std::vector<double>& grid, double tail_tol = 1e-9) const;

  /// Grid edges and per-cell density for GridEmpirical.
  const std::vector<double>& grid_edges() const;
  const std::vector<double>& grid_density() const;

 private:
  CaptimeDist(Family f, std::vector<double> params) : family_(f), params_(std::move(params)) {}
  Family family_;
  std::vector<double> params_;
  std::shared_ptr<const std::pair<std::vector<double>, std::vector<double>>> grid_;
};

/// Compound distribution [map(t, kappa) | t ~ a, kappa ~ k], discretized.
/// Atoms of a and k are taken exactly; continuous components use the grid.
RuntimeDist compound(
    const std::function<RuntimeDist(double, double)>& map, const RuntimeDist& a,
    const CaptimeDist& k, const std::vector<double>& grid = default_grid());

}  // namespace rtu
