#include "rtu/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "rtu/errors.hpp"

namespace rtu {

Constraint Constraint::normalize() { return {}; }

Constraint Constraint::bounded_support(double kappa0) {
  if (!(kappa0 > 0.0)) throw BadParameters("bounded_support: kappa0 must be positive");
  Constraint c;
  c.kind = Kind::BoundedSupport;
  c.kappa0 = kappa0;
  return c;
}

Constraint Constraint::mean(double kappa0) {
  if (!(kappa0 > 0.0)) throw BadParameters("mean: kappa0 must be positive");
  Constraint c;
  c.kind = Kind::Mean;
  c.kappa0 = kappa0;
  return c;
}

Constraint Constraint::log_mean_above(double kappa0, double alpha) {
  if (!(kappa0 > 0.0) || !(alpha > 0.0)) throw BadParameters("log_mean_above: parameters must be positive");
  Constraint c;
  c.kind = Kind::LogMeanAbove;
  c.kappa0 = kappa0;
  c.alpha = alpha;
  return c;
}

Constraint Constraint::two_tail_log(double kappa0, double alpha, double beta, double p) {
  if (!(kappa0 > 0.0) || !(alpha > 0.0) || !(beta > 0.0) || !(p > 0.0 && p < 1.0)) {
    throw BadParameters("two_tail_log: need positive parameters and p in (0, 1)");
  }
  Constraint c;
  c.kind = Kind::TwoTailLog;
  c.kappa0 = kappa0;
  c.alpha = alpha;
  c.beta = beta;
  c.p = p;
  return c;
}

Constraint Constraint::centered_log_second_moment(double kappa0, double sigma) {
  if (!(kappa0 > 0.0) || !(sigma > 0.0)) {
    throw BadParameters("centered_log_second_moment: parameters must be positive");
  }
  Constraint c;
  c.kind = Kind::CenteredLogSecondMoment;
  c.kappa0 = kappa0;
  c.sigma = sigma;
  return c;
}

Constraint Constraint::tail_probability(double kappa1, double delta) {
  if (!(kappa1 > 0.0) || delta < 0.0 || delta > 1.0) {
    throw BadParameters("tail_probability: need kappa1 > 0 and delta in [0, 1]");
  }
  Constraint c;
  c.kind = Kind::TailProbability;
  c.kappa1 = kappa1;
  c.delta = delta;
  return c;
}

Constraint Constraint::continuity_at(double kappa0) {
  if (!(kappa0 > 0.0)) throw BadParameters("continuity_at: kappa0 must be positive");
  Constraint c;
  c.kind = Kind::ContinuityAt;
  c.kappa0 = kappa0;
  return c;
}

namespace {

struct Moment {
  std::function<double(double)> g;
  double target = 0.0;
};

// Solve the small linear system J s = r in place (partial pivoting).
std::vector<double> solve_linear(std::vector<std::vector<double>> j, std::vector<double> r) {
  const std::size_t n = r.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::abs(j[row][col]) > std::abs(j[piv][col])) piv = row;
    }
    std::swap(j[col], j[piv]);
    std::swap(r[col], r[piv]);
    if (j[col][col] == 0.0) j[col][col] = 1e-300;
    for (std::size_t row = col + 1; row < n; ++row) {
      const double f = j[row][col] / j[col][col];
      for (std::size_t k = col; k < n; ++k) j[row][k] -= f * j[col][k];
      r[row] -= f * r[col];
    }
  }
  std::vector<double> s(n);
  for (std::size_t col = n; col-- > 0;) {
    double v = r[col];
    for (std::size_t k = col + 1; k < n; ++k) v -= j[col][k] * s[k];
    s[col] = v / j[col][col];
  }
  return s;
}

}  // namespace

CaptimeDist solve_maxent(const EntropyProblem& problem, double tol, SolveInfo* info) {
  const std::vector<double>& edges = problem.grid_edges;
  if (edges.size() < 513) throw BadParameters("solve_maxent: need at least 512 grid cells");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) throw BadParameters("solve_maxent: edges must be ascending");
  }

  double support_lo = -kInfinity, support_hi = kInfinity;
  std::vector<Moment> moments;
  for (const Constraint& c : problem.constraints) {
    switch (c.kind) {
      case Constraint::Kind::Normalize:
      case Constraint::Kind::ContinuityAt:
        break;
      case Constraint::Kind::BoundedSupport:
        support_hi = std::min(support_hi, c.kappa0);
        break;
      case Constraint::Kind::Mean:
        moments.push_back({[](double x) { return x; }, c.kappa0});
        break;
      case Constraint::Kind::LogMeanAbove:
        support_lo = std::max(support_lo, c.kappa0);
        moments.push_back(
            {[k0 = c.kappa0](double x) { return std::log(x / k0); }, 1.0 / c.alpha});
        break;
      case Constraint::Kind::TwoTailLog:
        moments.push_back({[k0 = c.kappa0](double x) { return std::max(0.0, std::log(k0 / x)); },
                           c.p / c.beta});
        moments.push_back({[k0 = c.kappa0](double x) { return std::max(0.0, std::log(x / k0)); },
                           (1.0 - c.p) / c.alpha});
        break;
      case Constraint::Kind::CenteredLogSecondMoment:
        moments.push_back({[k0 = c.kappa0](double x) { return std::log(x / k0); }, 0.0});
        moments.push_back({[k0 = c.kappa0](double x) {
                             const double l = std::log(x / k0);
                             return l * l;
                           },
                           c.sigma * c.sigma});
        break;
      case Constraint::Kind::TailProbability:
        moments.push_back(
            {[k1 = c.kappa1](double x) { return x <= k1 ? 1.0 : 0.0; }, c.delta});
        break;
    }
  }

  // Cells inside the support, by midpoint.
  std::vector<std::size_t> cells;
  std::vector<double> mid, width;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double x = 0.5 * (edges[i] + edges[i + 1]);
    if (x > support_lo && x < support_hi) {
      cells.push_back(i);
      mid.push_back(x);
      width.push_back(edges[i + 1] - edges[i]);
    }
  }
  const std::size_t nc = cells.size();
  if (nc == 0) throw Infeasible("solve_maxent: no grid cells inside the support");

  const std::size_t nm = moments.size();
  std::vector<std::vector<double>> g(nm, std::vector<double>(nc));
  for (std::size_t i = 0; i < nm; ++i) {
    double glo = kInfinity, ghi = -kInfinity;
    for (std::size_t j = 0; j < nc; ++j) {
      g[i][j] = moments[i].g(mid[j]);
      glo = std::min(glo, g[i][j]);
      ghi = std::max(ghi, g[i][j]);
    }
    if (moments[i].target < glo - 1e-12 || moments[i].target > ghi + 1e-12) {
      std::ostringstream os;
      os << "solve_maxent: target " << moments[i].target << " outside achievable range ["
         << glo << ", " << ghi << "]";
      throw Infeasible(os.str());
    }
  }

  std::vector<double> lambda(nm, 0.0), q(nc);
  const auto masses = [&](const std::vector<double>& lam) {
    double top = -kInfinity;
    std::vector<double> logit(nc);
    for (std::size_t j = 0; j < nc; ++j) {
      double l = std::log(width[j]);
      for (std::size_t i = 0; i < nm; ++i) l -= lam[i] * g[i][j];
      logit[j] = l;
      top = std::max(top, l);
    }
    double z = 0.0;
    for (std::size_t j = 0; j < nc; ++j) z += (logit[j] = std::exp(logit[j] - top));
    for (double& v : logit) v /= z;
    return logit;
  };
  const auto residual = [&](const std::vector<double>& qq, std::vector<double>* r) {
    double worst = 0.0;
    for (std::size_t i = 0; i < nm; ++i) {
      double e = 0.0;
      for (std::size_t j = 0; j < nc; ++j) e += qq[j] * g[i][j];
      (*r)[i] = e - moments[i].target;
      worst = std::max(worst, std::abs((*r)[i]));
    }
    return worst;
  };

  constexpr std::size_t kMaxIter = 100000;
  std::size_t iter = 0;
  std::vector<double> r(nm);
  q = masses(lambda);
  double worst = residual(q, &r);
  while (worst >= tol && iter < kMaxIter) {
    // Newton on the dual: d E_q[g_i] / d lambda_k = -Cov(g_i, g_k).
    std::vector<double> eg(nm, 0.0);
    for (std::size_t i = 0; i < nm; ++i) {
      for (std::size_t j = 0; j < nc; ++j) eg[i] += q[j] * g[i][j];
    }
    std::vector<std::vector<double>> cov(nm, std::vector<double>(nm, 0.0));
    for (std::size_t i = 0; i < nm; ++i) {
      for (std::size_t k = i; k < nm; ++k) {
        double e = 0.0;
        for (std::size_t j = 0; j < nc; ++j) e += q[j] * g[i][j] * g[k][j];
        cov[i][k] = cov[k][i] = e - eg[i] * eg[k];
      }
      cov[i][i] += 1e-300;
    }
    const std::vector<double> step = solve_linear(cov, r);
    double scale = 1.0;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      std::vector<double> trial(nm);
      for (std::size_t i = 0; i < nm; ++i) trial[i] = lambda[i] + scale * step[i];
      const std::vector<double> tq = masses(trial);
      std::vector<double> tr(nm);
      const double tw = residual(tq, &tr);
      ++iter;
      if (tw < worst || backtrack == 59) {
        lambda = std::move(trial);
        q = tq;
        r = std::move(tr);
        worst = tw;
        break;
      }
      scale *= 0.5;
    }
  }
  if (worst >= tol) {
    std::ostringstream os;
    os << "solve_maxent: residual " << worst << " after " << iter << " iterations (tol " << tol << ")";
    throw NotConverged(os.str());
  }

  std::vector<double> density(edges.size() - 1, 0.0);
  double total = 0.0;
  for (double v : q) total += v;
  double entropy = 0.0;
  for (std::size_t j = 0; j < nc; ++j) {
    const double m = q[j] / total;
    density[cells[j]] = m / width[j];
    if (m > 0.0) entropy -= m * std::log(m / width[j]);
  }
  if (info) {
    info->iterations = iter;
    info->max_residual = worst;
    info->entropy = entropy;
  }
  return CaptimeDist::grid_empirical(edges, density);
}

CaptimeDist closed_form(const std::vector<Constraint>& constraints) {
  std::vector<const Constraint*> active;
  for (const Constraint& c : constraints) {
    if (c.kind != Constraint::Kind::Normalize && c.kind != Constraint::Kind::ContinuityAt) {
      active.push_back(&c);
    }
  }
  const auto only = [&](Constraint::Kind k) -> const Constraint* {
    return active.size() == 1 && active[0]->kind == k ? active[0] : nullptr;
  };
  if (const Constraint* c = only(Constraint::Kind::BoundedSupport)) {
    return CaptimeDist::uniform(c->kappa0);
  }
  if (const Constraint* c = only(Constraint::Kind::Mean)) {
    return CaptimeDist::exponential(c->kappa0);
  }
  if (const Constraint* c = only(Constraint::Kind::LogMeanAbove)) {
    return CaptimeDist::pareto(c->kappa0, c->alpha);
  }
  if (const Constraint* c = only(Constraint::Kind::TwoTailLog)) {
    if (std::abs(c->p - c->alpha / (c->alpha + c->beta)) > 1e-9) {
      throw UnknownConstraintSet("two-tail mass split must equal alpha / (alpha + beta)");
    }
    return CaptimeDist::generalized_log_laplace(c->kappa0, c->alpha, c->beta);
  }
  if (const Constraint* c = only(Constraint::Kind::CenteredLogSecondMoment)) {
    return CaptimeDist::log_normal(c->kappa0, c->sigma);
  }
  if (active.size() == 2) {
    const Constraint* tail = nullptr;
    const Constraint* bound = nullptr;
    for (const Constraint* c : active) {
      if (c->kind == Constraint::Kind::TailProbability) tail = c;
      if (c->kind == Constraint::Kind::BoundedSupport) bound = c;
    }
    if (tail && bound) {
      return CaptimeDist::piecewise_tail(bound->kappa0, tail->kappa1, tail->delta);
    }
  }
  throw UnknownConstraintSet("constraint set matches no closed-form derivation");
}

std::vector<double> cell_masses(const CaptimeDist& k, const std::vector<double>& edges) {
  if (edges.size() < 2) throw BadParameters("cell_masses: need at least one cell");
  std::vector<double> m(edges.size() - 1, 0.0);
  double prev = k.cdf(edges.front());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double c = k.cdf(edges[i + 1]);
    m[i] = std::max(0.0, c - prev);
    prev = c;
  }
  m.front() += k.cdf(edges.front());
  m.back() += 1.0 - prev;
  return m;
}

double grid_entropy(const std::vector<double>& masses, const std::vector<double>& edges) {
  if (masses.size() + 1 != edges.size()) throw BadParameters("grid_entropy: size mismatch");
  double h = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (masses[i] > 0.0) h -= masses[i] * std::log(masses[i] / (edges[i + 1] - edges[i]));
  }
  return h;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw BadParameters("total_variation: size mismatch");
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return 0.5 * tv;
}

}  // namespace rtu
