#include "rtu/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rtu/errors.hpp"

namespace rtu {

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw BadParameters("log_grid: bad range");
  std::vector<double> g(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (!(hi > lo) || n < 2) throw BadParameters("linear_grid: bad range");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

const std::vector<double>& default_grid() {
  static const std::vector<double> grid = log_grid(1e-6, 1e6, 2048);
  return grid;
}

namespace {

// Sort, merge equal support points, drop zero mass.
std::vector<Atom> merge_atoms(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.t < b.t; });
  std::vector<Atom> out;
  for (const Atom& a : atoms) {
    if (a.p <= 0.0) continue;
    if (!out.empty() && out.back().t == a.t) {
      out.back().p += a.p;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

// Distribute a continuous CDF's mass onto grid points; cell mass goes to the
// cell's right edge.
void grid_masses(const std::function<double(double)>& cdf, double total_mass,
                 const std::vector<double>& grid, double tail_tol, Atomization* out) {
  double prev = 0.0;
  for (double g : grid) {
    const double c = cdf(g);
    if (c > prev) out->atoms.push_back({g, total_mass * (c - prev)});
    prev = c;
  }
  const double tail = total_mass * (1.0 - prev);
  if (tail > tail_tol) {
    throw NonDiscretizable("atomize: tail mass beyond grid exceeds tolerance");
  }
  if (tail > 0.0) {
    out->atoms.push_back({grid.back(), tail});
    out->truncated_tail += tail;
  }
}

}  // namespace

struct RuntimeDist::Node {
  enum class Kind { Dirac, Discrete, StPetersburg, Exponential, LogNormal, Weibull, Pareto, Mixture };
  Kind kind;
  double a = 0.0;  // Dirac t | Exponential rate | LogNormal mu | Weibull shape | Pareto xmin
  double b = 0.0;  // LogNormal sigma | Weibull scale | Pareto alpha
  std::vector<Atom> atoms;  // Discrete, finite support
  double inf_mass = 0.0;    // Dirac(inf) and Discrete
  std::vector<std::pair<double, RuntimeDist>> comps;  // Mixture
};

RuntimeDist RuntimeDist::dirac(double t) {
  if (!(t >= 0.0)) throw BadParameters("dirac: t must be >= 0 or infinity");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Dirac;
  if (std::isinf(t)) {
    n->inf_mass = 1.0;
  } else {
    n->a = t;
  }
  return RuntimeDist(std::move(n));
}

RuntimeDist RuntimeDist::discrete(std::vector<Atom> points) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Discrete;
  double total = 0.0;
  std::vector<Atom> finite;
  for (const Atom& a : points) {
    if (!(a.p > 0.0)) throw BadParameters("discrete: probabilities must be > 0");
    if (!(a.t >= 0.0)) throw BadParameters("discrete: runtimes must be >= 0");
    total += a.p;
    if (std::isinf(a.t)) {
      n->inf_mass += a.p;
    } else {
      finite.push_back(a);
    }
  }
  if (std::abs(total - 1.0) > 1e-12) throw BadParameters("discrete: probabilities must sum to 1");
  n->atoms = merge_atoms(std::move(finite));
  return RuntimeDist(std::move(n));
}

RuntimeDist RuntimeDist::st_petersburg() {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::StPetersburg;
  return RuntimeDist(std::move(n));
}

RuntimeDist RuntimeDist::exponential(double rate) {
  if (!(rate > 0.0) || std::isinf(rate)) throw BadParameters("exponential: rate must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Exponential;
  n->a = rate;
  return RuntimeDist(std::move(n));
}

RuntimeDist RuntimeDist::log_normal(double mu, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(sigma)) {
    throw BadParameters("log_normal: need finite mu and sigma > 0");
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::LogNormal;
  n->a = mu;
  n->b = sigma;
  return RuntimeDist(std::move(n));
}

RuntimeDist RuntimeDist::weibull(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) throw BadParameters("weibull: parameters must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Weibull;
  n->a = shape;
  n->b = scale;
  return RuntimeDist(std::move(n));
}

RuntimeDist RuntimeDist::pareto(double xmin, double alpha) {
  if (!(xmin > 0.0) || !(alpha > 0.0)) throw BadParameters("pareto: parameters must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Pareto;
  n->a = xmin;
  n->b = alpha;
  return RuntimeDist(std::move(n));
}

RuntimeDist RuntimeDist::mixture(std::vector<std::pair<double, RuntimeDist>> components) {
  if (components.empty()) throw BadParameters("mixture: no components");
  double total = 0.0;
  for (const auto& [w, d] : components) {
    if (!(w > 0.0)) throw BadParameters("mixture: weights must be > 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw BadParameters("mixture: weights must sum to 1");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Mixture;
  n->comps = std::move(components);
  return RuntimeDist(std::move(n));
}

RuntimeDist mix(double p, const RuntimeDist& a, const RuntimeDist& b) {
  if (!(p >= 0.0 && p <= 1.0)) throw BadParameters("mix: p must be in [0, 1]");
  std::vector<std::pair<double, RuntimeDist>> comps;
  if (p > 0.0) comps.emplace_back(p, a);
  if (p < 1.0) comps.emplace_back(1.0 - p, b);
  return RuntimeDist::mixture(std::move(comps));
}

double RuntimeDist::cdf(double t) const {
  if (std::isinf(t)) return 1.0;
  if (t < 0.0) return 0.0;
  const Node& n = *node_;
  switch (n.kind) {
    case Node::Kind::Dirac:
      if (n.inf_mass > 0.0) return 0.0;
      return t >= n.a ? 1.0 : 0.0;
    case Node::Kind::Discrete: {
      double c = 0.0;
      for (const Atom& a : n.atoms) {
        if (a.t <= t) c += a.p;
      }
      return c;
    }
    case Node::Kind::StPetersburg: {
      if (t < 2.0) return 0.0;
      double pow2 = 2.0;
      double c = 0.0, mass = 0.5;
      while (pow2 <= t && mass > 0.0) {
        c += mass;
        pow2 *= 2.0;
        mass *= 0.5;
      }
      return c;
    }
    case Node::Kind::Exponential:
      return -std::expm1(-n.a * t);
    case Node::Kind::LogNormal:
      if (t == 0.0) return 0.0;
      return normal_cdf((std::log(t) - n.a) / n.b);
    case Node::Kind::Weibull:
      return -std::expm1(-std::pow(t / n.b, n.a));
    case Node::Kind::Pareto:
      if (t < n.a) return 0.0;
      return 1.0 - std::pow(n.a / t, n.b);
    case Node::Kind::Mixture: {
      double c = 0.0;
      for (const auto& [w, d] : n.comps) c += w * d.cdf(t);
      return c;
    }
  }
  return 0.0;
}

double RuntimeDist::mass_at_infinity() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Node::Kind::Dirac:
    case Node::Kind::Discrete:
      return n.inf_mass;
    case Node::Kind::Mixture: {
      double m = 0.0;
      for (const auto& [w, d] : n.comps) m += w * d.mass_at_infinity();
      return m;
    }
    default:
      return 0.0;
  }
}

double RuntimeDist::sample(Rng& rng) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Node::Kind::Dirac:
      return n.inf_mass > 0.0 ? kInfinity : n.a;
    case Node::Kind::Discrete: {
      double u = rng.uniform();
      for (const Atom& a : n.atoms) {
        if (u <= a.p) return a.t;
        u -= a.p;
      }
      return n.inf_mass > 0.0 ? kInfinity : n.atoms.back().t;
    }
    case Node::Kind::StPetersburg: {
      const double u = rng.uniform();  // (0, 1]
      double t = 2.0, threshold = 0.5;
      while (u <= threshold && t < 0x1p62) {
        t *= 2.0;
        threshold *= 0.5;
      }
      return t;
    }
    case Node::Kind::Exponential:
      return -std::log(rng.uniform()) / n.a;
    case Node::Kind::LogNormal: {
      const double u = std::min(rng.uniform(), 1.0 - 0x1.0p-53);
      return std::exp(n.a + n.b * normal_quantile(u));
    }
    case Node::Kind::Weibull:
      return n.b * std::pow(-std::log(rng.uniform()), 1.0 / n.a);
    case Node::Kind::Pareto:
      return n.a * std::pow(rng.uniform(), -1.0 / n.b);
    case Node::Kind::Mixture: {
      double u = rng.uniform();
      for (const auto& [w, d] : n.comps) {
        if (u <= w) return d.sample(rng);
        u -= w;
      }
      return n.comps.back().second.sample(rng);
    }
  }
  return 0.0;
}

bool RuntimeDist::purely_discrete() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Node::Kind::Dirac:
    case Node::Kind::Discrete:
    case Node::Kind::StPetersburg:
      return true;
    case Node::Kind::Mixture:
      return std::all_of(n.comps.begin(), n.comps.end(),
                         [](const auto& c) { return c.second.purely_discrete(); });
    default:
      return false;
  }
}

namespace {

void collect_st_petersburg(double weight, double tail_tol, Parts* out) {
  // Atoms at 2^k with mass 2^-k until the remaining tail drops below
  // tail_tol; the remainder is folded into the next support point, so total
  // mass is conserved exactly.
  double t = 2.0, remaining = 1.0;
  while (remaining > tail_tol && t < 0x1p62) {
    out->atoms.push_back({t, weight * remaining * 0.5});
    remaining *= 0.5;
    t *= 2.0;
  }
  if (remaining > 0.0) out->atoms.push_back({t, weight * remaining});
}

void collect_parts(const RuntimeDist& dist, double weight, double tail_tol, Parts* out) {
  using Kind = RuntimeDist::Node::Kind;
  const RuntimeDist::Node& n = dist.node();
  switch (n.kind) {
    case Kind::Dirac:
      if (n.inf_mass > 0.0) {
        out->inf_mass += weight;
      } else {
        out->atoms.push_back({n.a, weight});
      }
      return;
    case Kind::Discrete:
      for (const Atom& a : n.atoms) out->atoms.push_back({a.t, weight * a.p});
      out->inf_mass += weight * n.inf_mass;
      return;
    case Kind::StPetersburg:
      collect_st_petersburg(weight, tail_tol, out);
      return;
    case Kind::Mixture:
      for (const auto& [w, d] : n.comps) collect_parts(d, weight * w, tail_tol, out);
      return;
    default:
      break;
  }
  ContinuousPart part;
  part.weight = weight;
  part.cdf = [dist](double t) { return dist.cdf(t); };
  const double q = std::max(tail_tol, 1e-15);
  switch (n.kind) {
    case Kind::Exponential:
      part.lo = -std::log1p(-q) / n.a;
      part.hi = -std::log(q) / n.a;
      break;
    case Kind::LogNormal:
      part.lo = std::exp(n.a + n.b * normal_quantile(q));
      part.hi = std::exp(n.a + n.b * normal_quantile(1.0 - q));
      break;
    case Kind::Weibull:
      part.lo = n.b * std::pow(-std::log1p(-q), 1.0 / n.a);
      part.hi = n.b * std::pow(-std::log(q), 1.0 / n.a);
      break;
    case Kind::Pareto:
      part.lo = n.a;
      part.hi = n.a * std::pow(q, -1.0 / n.b);
      break;
    default:
      break;
  }
  out->continuous.push_back(std::move(part));
}

}  // namespace

Parts RuntimeDist::parts(double tail_tol) const {
  Parts out;
  collect_parts(*this, 1.0, tail_tol, &out);
  out.atoms = merge_atoms(std::move(out.atoms));
  return out;
}

Atomization RuntimeDist::atomize(const std::vector<double>& grid, double tail_tol) const {
  Parts p = parts(tail_tol);
  Atomization out;
  out.atoms = std::move(p.atoms);
  out.inf_mass = p.inf_mass;
  for (const ContinuousPart& c : p.continuous) {
    grid_masses(c.cdf, c.weight, grid, tail_tol, &out);
  }
  out.atoms = merge_atoms(std::move(out.atoms));
  return out;
}

RuntimeDist RuntimeDist::from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "runtime_seconds,probability") {
    throw ParseError("expected header `runtime_seconds,probability`, got `" + line + "`");
  }
  std::vector<Atom> atoms;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected two columns");
    }
    const std::string ts = line.substr(0, comma);
    const std::string ps = line.substr(comma + 1);
    Atom a;
    try {
      a.t = (ts == "inf") ? kInfinity : std::stod(ts);
      a.p = std::stod(ps);
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(lineno) + ": bad number");
    }
    atoms.push_back(a);
  }
  return discrete(std::move(atoms));
}

RuntimeDist RuntimeDist::from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return from_csv(in);
}

// ---------------------------------------------------------------------------
// CaptimeDist

CaptimeDist CaptimeDist::dirac(double kappa) {
  if (!(kappa > 0.0) || std::isinf(kappa)) throw BadParameters("captime dirac: kappa must be finite positive");
  return CaptimeDist(Family::Dirac, {kappa});
}

CaptimeDist CaptimeDist::uniform(double kappa0) {
  if (!(kappa0 > 0.0)) throw BadParameters("captime uniform: kappa0 must be positive");
  return CaptimeDist(Family::Uniform, {kappa0});
}

CaptimeDist CaptimeDist::exponential(double mean_kappa0) {
  if (!(mean_kappa0 > 0.0)) throw BadParameters("captime exponential: mean must be positive");
  return CaptimeDist(Family::Exponential, {mean_kappa0});
}

CaptimeDist CaptimeDist::pareto(double kappa0, double alpha) {
  if (!(kappa0 > 0.0) || !(alpha > 0.0)) throw BadParameters("captime pareto: parameters must be positive");
  return CaptimeDist(Family::Pareto, {kappa0, alpha});
}

CaptimeDist CaptimeDist::log_laplace(double kappa0, double alpha) {
  if (!(kappa0 > 0.0) || !(alpha > 0.0)) throw BadParameters("log_laplace: parameters must be positive");
  return CaptimeDist(Family::LogLaplace, {kappa0, alpha});
}

CaptimeDist CaptimeDist::generalized_log_laplace(double kappa0, double alpha, double beta) {
  if (!(kappa0 > 0.0) || !(alpha > 0.0) || !(beta > 0.0)) {
    throw BadParameters("generalized_log_laplace: parameters must be positive");
  }
  return CaptimeDist(Family::GeneralizedLogLaplace, {kappa0, alpha, beta});
}

CaptimeDist CaptimeDist::log_normal(double kappa0, double sigma) {
  if (!(kappa0 > 0.0) || !(sigma > 0.0)) throw BadParameters("captime log_normal: parameters must be positive");
  return CaptimeDist(Family::LogNormal, {kappa0, sigma});
}

CaptimeDist CaptimeDist::piecewise_tail(double kappa0, double kappa1, double delta) {
  if (!(kappa0 > 0.0) || !(kappa1 > 0.0) || kappa1 >= kappa0 || delta < 0.0 || delta > 1.0) {
    throw BadParameters("piecewise_tail: need 0 < kappa1 < kappa0 and delta in [0, 1]");
  }
  return CaptimeDist(Family::PiecewiseTail, {kappa0, kappa1, delta});
}

CaptimeDist CaptimeDist::grid_empirical(std::vector<double> edges, std::vector<double> density) {
  if (edges.size() < 2 || density.size() + 1 != edges.size()) {
    throw BadParameters("grid_empirical: need n+1 edges for n cells");
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) throw BadParameters("grid_empirical: edges must be ascending");
    if (density[i] < 0.0) throw BadParameters("grid_empirical: density must be nonnegative");
    mass += density[i] * (edges[i + 1] - edges[i]);
  }
  if (std::abs(mass - 1.0) > 1e-9) throw BadParameters("grid_empirical: density must integrate to 1");
  CaptimeDist d(Family::GridEmpirical, {});
  d.grid_ = std::make_shared<const std::pair<std::vector<double>, std::vector<double>>>(
      std::move(edges), std::move(density));
  return d;
}

const std::vector<double>& CaptimeDist::grid_edges() const {
  if (family_ != Family::GridEmpirical) throw BadParameters("grid_edges: not a grid distribution");
  return grid_->first;
}

const std::vector<double>& CaptimeDist::grid_density() const {
  if (family_ != Family::GridEmpirical) throw BadParameters("grid_density: not a grid distribution");
  return grid_->second;
}

double CaptimeDist::cdf(double kappa) const {
  if (std::isinf(kappa)) return 1.0;
  if (kappa <= 0.0) return 0.0;
  const auto& q = params_;
  switch (family_) {
    case Family::Dirac:
      return kappa >= q[0] ? 1.0 : 0.0;
    case Family::Uniform:
      return std::min(kappa / q[0], 1.0);
    case Family::Exponential:
      return -std::expm1(-kappa / q[0]);
    case Family::Pareto:
      return kappa < q[0] ? 0.0 : 1.0 - std::pow(q[0] / kappa, q[1]);
    case Family::LogLaplace:
      return kappa < q[0] ? 0.5 * std::pow(kappa / q[0], q[1])
                          : 1.0 - 0.5 * std::pow(q[0] / kappa, q[1]);
    case Family::GeneralizedLogLaplace: {
      const double p = q[1] / (q[1] + q[2]);  // alpha / (alpha + beta)
      return kappa < q[0] ? p * std::pow(kappa / q[0], q[2])
                          : 1.0 - (1.0 - p) * std::pow(q[0] / kappa, q[1]);
    }
    case Family::LogNormal:
      return normal_cdf(std::log(kappa / q[0]) / q[1]);
    case Family::PiecewiseTail: {
      const double kappa0 = q[0], kappa1 = q[1], delta = q[2];
      if (kappa <= kappa1) return delta * kappa / kappa1;
      if (kappa >= kappa0) return 1.0;
      return delta + (1.0 - delta) * (kappa - kappa1) / (kappa0 - kappa1);
    }
    case Family::GridEmpirical: {
      const auto& edges = grid_->first;
      const auto& dens = grid_->second;
      if (kappa <= edges.front()) return 0.0;
      double c = 0.0;
      for (std::size_t i = 0; i < dens.size(); ++i) {
        const double hi = edges[i + 1];
        if (kappa >= hi) {
          c += dens[i] * (hi - edges[i]);
        } else {
          c += dens[i] * (kappa - edges[i]);
          break;
        }
      }
      return std::min(c, 1.0);
    }
  }
  return 0.0;
}

double CaptimeDist::pdf(double kappa) const {
  if (kappa <= 0.0 || std::isinf(kappa)) return 0.0;
  const auto& q = params_;
  switch (family_) {
    case Family::Dirac:
      return 0.0;
    case Family::Uniform:
      return kappa < q[0] ? 1.0 / q[0] : 0.0;
    case Family::Exponential:
      return std::exp(-kappa / q[0]) / q[0];
    case Family::Pareto:
      return kappa < q[0] ? 0.0 : q[1] * std::pow(q[0] / kappa, q[1]) / kappa;
    case Family::LogLaplace: {
      const double alpha = q[1];
      return kappa < q[0] ? 0.5 * alpha / q[0] * std::pow(kappa / q[0], alpha - 1.0)
                          : 0.5 * alpha / kappa * std::pow(q[0] / kappa, alpha);
    }
    case Family::GeneralizedLogLaplace: {
      const double alpha = q[1], beta = q[2];
      const double p = alpha / (alpha + beta);
      return kappa < q[0] ? p * beta / q[0] * std::pow(kappa / q[0], beta - 1.0)
                          : (1.0 - p) * alpha / kappa * std::pow(q[0] / kappa, alpha);
    }
    case Family::LogNormal: {
      const double x = std::log(kappa / q[0]) / q[1];
      return std::exp(-0.5 * x * x) / (kappa * q[1] * std::sqrt(2.0 * M_PI));
    }
    case Family::PiecewiseTail: {
      const double kappa0 = q[0], kappa1 = q[1], delta = q[2];
      if (kappa <= kappa1) return delta / kappa1;
      if (kappa < kappa0) return (1.0 - delta) / (kappa0 - kappa1);
      return 0.0;
    }
    case Family::GridEmpirical: {
      const auto& edges = grid_->first;
      const auto& dens = grid_->second;
      if (kappa < edges.front() || kappa >= edges.back()) return 0.0;
      const auto it = std::upper_bound(edges.begin(), edges.end(), kappa);
      const std::size_t cell = static_cast<std::size_t>(it - edges.begin()) - 1;
      return dens[std::min(cell, dens.size() - 1)];
    }
  }
  return 0.0;
}

double CaptimeDist::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw BadParameters("quantile: p must be in [0, 1]");
  const auto& q = params_;
  switch (family_) {
    case Family::Dirac:
      return q[0];
    case Family::Uniform:
      return p * q[0];
    case Family::Exponential:
      return p == 1.0 ? kInfinity : -q[0] * std::log1p(-p);
    case Family::Pareto:
      return p == 1.0 ? kInfinity : q[0] * std::pow(1.0 - p, -1.0 / q[1]);
    case Family::LogLaplace:
      if (p <= 0.5) return q[0] * std::pow(2.0 * p, 1.0 / q[1]);
      return p == 1.0 ? kInfinity : q[0] * std::pow(2.0 * (1.0 - p), -1.0 / q[1]);
    case Family::GeneralizedLogLaplace: {
      const double alpha = q[1], beta = q[2];
      const double split = alpha / (alpha + beta);
      if (p <= split) return q[0] * std::pow(p / split, 1.0 / beta);
      if (p == 1.0) return kInfinity;
      return q[0] * std::pow((1.0 - split) / (1.0 - p), 1.0 / alpha);
    }
    case Family::LogNormal:
      if (p == 0.0) return 0.0;
      if (p == 1.0) return kInfinity;
      return q[0] * std::exp(q[1] * normal_quantile(p));
    case Family::PiecewiseTail: {
      const double kappa0 = q[0], kappa1 = q[1], delta = q[2];
      if (p <= delta) return delta == 0.0 ? kappa1 : kappa1 * p / delta;
      return kappa1 + (p - delta) * (kappa0 - kappa1) / (1.0 - delta);
    }
    case Family::GridEmpirical: {
      const auto& edges = grid_->first;
      const auto& dens = grid_->second;
      double c = 0.0;
      for (std::size_t i = 0; i < dens.size(); ++i) {
        const double cell = dens[i] * (edges[i + 1] - edges[i]);
        if (c + cell >= p) {
          if (cell == 0.0) return edges[i + 1];
          return edges[i] + (p - c) / dens[i];
        }
        c += cell;
      }
      return edges.back();
    }
  }
  return 0.0;
}

double CaptimeDist::sample(Rng& rng) const {
  if (family_ == Family::Dirac) return params_[0];
  return quantile(std::min(rng.uniform(), 1.0 - 0x1.0p-53));
}

Atomization CaptimeDist::atomize(const std::vector<double>& grid, double tail_tol) const {
  Atomization out;
  if (family_ == Family::Dirac) {
    out.atoms.push_back({params_[0], 1.0});
    return out;
  }
  if (family_ == Family::GridEmpirical) {
    const auto& edges = grid_->first;
    const auto& dens = grid_->second;
    for (std::size_t i = 0; i < dens.size(); ++i) {
      const double mass = dens[i] * (edges[i + 1] - edges[i]);
      if (mass > 0.0) out.atoms.push_back({edges[i + 1], mass});
    }
    return out;
  }
  grid_masses([this](double t) { return cdf(t); }, 1.0, grid, tail_tol, &out);
  out.atoms = merge_atoms(std::move(out.atoms));
  return out;
}

// ---------------------------------------------------------------------------
// compound

RuntimeDist compound(const std::function<RuntimeDist(double, double)>& map,
                     const RuntimeDist& a, const CaptimeDist& k,
                     const std::vector<double>& grid) {
  const double tail_tol = 1e-9;
  Atomization at = a.atomize(grid, tail_tol);
  if (at.inf_mass > 0.0) at.atoms.push_back({kInfinity, at.inf_mass});
  const Atomization kt = k.atomize(grid, tail_tol);

  std::map<double, double> mass;  // result support -> probability
  double inf_mass = 0.0;
  for (const Atom& ta : at.atoms) {
    for (const Atom& ka : kt.atoms) {
      const double w = ta.p * ka.p;
      const RuntimeDist inner = map(ta.t, ka.t);
      Atomization it = inner.atomize(grid, tail_tol);
      for (const Atom& ia : it.atoms) mass[ia.t] += w * ia.p;
      inf_mass += w * it.inf_mass;
    }
  }
  std::vector<Atom> atoms;
  atoms.reserve(mass.size() + 1);
  for (const auto& [t, p] : mass) atoms.push_back({t, p});
  if (inf_mass > 0.0) atoms.push_back({kInfinity, inf_mass});
  return RuntimeDist::discrete(std::move(atoms));
}

}  // namespace rtu
