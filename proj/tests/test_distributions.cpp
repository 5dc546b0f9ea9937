#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rtu/distributions.hpp"
#include "rtu/errors.hpp"

using namespace rtu;

namespace {

// Dvoretzky-Kiefer-Wolfowitz band check: sup |empirical CDF - F| over the
// sample points, n = 1e5, band at delta = 1e-3.
void check_dkw(const RuntimeDist& d, std::uint64_t seed) {
  const std::size_t n = 100000;
  Rng rng(seed);
  std::vector<double> xs;
  xs.reserve(n);
  std::size_t inf_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = d.sample(rng);
    if (std::isinf(x)) {
      ++inf_count;
    } else {
      xs.push_back(x);
    }
  }
  std::sort(xs.begin(), xs.end());
  const double band = std::sqrt(std::log(2.0 / 1e-3) / (2.0 * n));
  double worst = std::abs(static_cast<double>(inf_count) / n - d.mass_at_infinity());
  // The sup is attained at sample points (from above) or just before them
  // (from below); walk runs of equal samples so atoms are handled exactly.
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double f = d.cdf(xs[i]);
    const double f_left = d.cdf(std::nextafter(xs[i], -1.0));
    worst = std::max(worst, std::abs(static_cast<double>(j) / n - f));
    worst = std::max(worst, std::abs(static_cast<double>(i) / n - f_left));
    i = j;
  }
  CHECK(worst <= band);
}

}  // namespace

TEST_CASE("cdf golden values") {
  CHECK(RuntimeDist::st_petersburg().cdf(64.0) == 63.0 / 64.0);
  CHECK(RuntimeDist::st_petersburg().cdf(1.9) == 0.0);
  CHECK(RuntimeDist::st_petersburg().cdf(2.0) == 0.5);
  const RuntimeDist d5 = RuntimeDist::dirac(5.0);
  CHECK(d5.cdf(4.9) == 0.0);
  CHECK(d5.cdf(5.0) == 1.0);  // right-continuous at the atom
  CHECK(CaptimeDist::uniform(10.0).cdf(5.0) == 0.5);
  CHECK(RuntimeDist::dirac(kInfinity).cdf(1e308) == 0.0);
  CHECK(RuntimeDist::dirac(kInfinity).cdf(kInfinity) == 1.0);
}

TEST_CASE("cdf is nondecreasing with limit <= 1") {
  const std::vector<RuntimeDist> dists = {
      RuntimeDist::exponential(0.3), RuntimeDist::log_normal(1.0, 2.0),
      RuntimeDist::weibull(0.7, 3.0), RuntimeDist::pareto(0.5, 1.2),
      mix(0.3, RuntimeDist::dirac(2.0), RuntimeDist::exponential(1.0))};
  for (const RuntimeDist& d : dists) {
    double prev = 0.0;
    for (double t : log_grid(1e-8, 1e8, 200)) {
      const double c = d.cdf(t);
      CHECK(c >= prev);
      CHECK(c <= 1.0);
      prev = c;
    }
  }
}

TEST_CASE("sampling is deterministic and matches point masses") {
  Rng r1(42), r2(42);
  const RuntimeDist d = RuntimeDist::dirac(3.0);
  CHECK(d.sample(r1) == 3.0);
  CHECK(d.sample(r2) == 3.0);
  const RuntimeDist degenerate = RuntimeDist::mixture({{1.0, RuntimeDist::dirac(2.0)}});
  Rng r3(7);
  for (int i = 0; i < 10; ++i) CHECK(degenerate.sample(r3) == 2.0);
}

TEST_CASE("st petersburg head frequency") {
  Rng rng(2024);
  const RuntimeDist sp = RuntimeDist::st_petersburg();
  std::size_t twos = 0;
  const std::size_t n = 1000000;
  for (std::size_t i = 0; i < n; ++i) {
    if (sp.sample(rng) == 2.0) ++twos;
  }
  const double freq = static_cast<double>(twos) / n;
  CHECK(freq >= 0.498);
  CHECK(freq <= 0.502);
}

TEST_CASE("monte carlo CDFs stay inside the DKW band") {
  check_dkw(RuntimeDist::dirac(4.0), 11);
  check_dkw(RuntimeDist::discrete({{1.0, 0.25}, {2.0, 0.5}, {kInfinity, 0.25}}), 12);
  check_dkw(RuntimeDist::st_petersburg(), 13);
  check_dkw(RuntimeDist::exponential(2.0), 14);
  check_dkw(RuntimeDist::log_normal(0.5, 1.5), 15);
  check_dkw(RuntimeDist::weibull(1.5, 2.0), 16);
  check_dkw(RuntimeDist::pareto(1.0, 2.5), 17);
  check_dkw(mix(0.4, RuntimeDist::exponential(1.0), RuntimeDist::dirac(3.0)), 18);
}

TEST_CASE("mix is affine in p") {
  const RuntimeDist a = RuntimeDist::exponential(1.0);
  const RuntimeDist b = RuntimeDist::discrete({{0.5, 0.5}, {4.0, 0.5}});
  for (double p : {0.0, 0.1, 0.33, 0.5, 0.9, 1.0}) {
    const RuntimeDist m = mix(p, a, b);
    for (double t : {0.0, 0.4, 0.5, 1.0, 3.9, 4.0, 10.0}) {
      CHECK(m.cdf(t) == doctest::Approx(p * a.cdf(t) + (1.0 - p) * b.cdf(t)).epsilon(1e-14));
    }
  }
}

TEST_CASE("mix golden values") {
  const RuntimeDist a = RuntimeDist::exponential(1.0);
  const RuntimeDist b = RuntimeDist::dirac(2.0);
  const RuntimeDist m1 = mix(1.0, a, b);
  for (double t : {0.1, 1.0, 5.0}) CHECK(m1.cdf(t) == a.cdf(t));
  const RuntimeDist half = mix(0.5, RuntimeDist::dirac(0.0), RuntimeDist::dirac(kInfinity));
  CHECK(half.cdf(0.0) == 0.5);
  CHECK(half.cdf(1e300) == 0.5);
  CHECK(half.mass_at_infinity() == 0.5);
  CHECK(mix(0.25, RuntimeDist::dirac(1.0), RuntimeDist::dirac(3.0)).cdf(2.0) == 0.25);
}

TEST_CASE("compound with the identity map reproduces its input") {
  const std::vector<RuntimeDist> inputs = {
      RuntimeDist::discrete({{1.0, 0.3}, {5.0, 0.5}, {kInfinity, 0.2}}),
      RuntimeDist::dirac(7.0), RuntimeDist::st_petersburg()};
  const auto identity = [](double t, double) { return RuntimeDist::dirac(t); };
  for (const RuntimeDist& a : inputs) {
    for (const CaptimeDist& k : {CaptimeDist::dirac(10.0), CaptimeDist::uniform(4.0)}) {
      const RuntimeDist c = compound(identity, a, k);
      double sup = std::abs(c.mass_at_infinity() - a.mass_at_infinity());
      for (double t : log_grid(1e-3, 1e6, 300)) {
        sup = std::max(sup, std::abs(c.cdf(t) - a.cdf(t)));
      }
      CHECK(sup < 1e-9);
    }
  }
}

TEST_CASE("compound golden values") {
  const auto const7 = [](double, double) { return RuntimeDist::dirac(7.0); };
  const RuntimeDist c = compound(const7, RuntimeDist::dirac(1.0), CaptimeDist::dirac(10.0));
  CHECK(c.cdf(6.9) == 0.0);
  CHECK(c.cdf(7.0) == 1.0);

  // Success-or-never map with a step p: p(1, 2) = 1, so everything lands at 0.
  const auto step_map = [](double t, double kappa) {
    return mix(t < kappa ? 1.0 : 0.0, RuntimeDist::dirac(0.0), RuntimeDist::dirac(kInfinity));
  };
  const RuntimeDist s = compound(step_map, RuntimeDist::dirac(1.0), CaptimeDist::dirac(2.0));
  CHECK(s.cdf(0.0) == 1.0);
  CHECK(s.mass_at_infinity() == 0.0);
}

TEST_CASE("compound conserves mass") {
  const RuntimeDist a = mix(0.5, RuntimeDist::exponential(1.0), RuntimeDist::dirac(2.0));
  const auto shift = [](double t, double kappa) { return RuntimeDist::dirac(t + kappa); };
  const RuntimeDist c = compound(shift, a, CaptimeDist::uniform(3.0));
  CHECK(c.cdf(kInfinity) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("atomize records truncated tails and rejects hopeless grids") {
  const Atomization at = RuntimeDist::st_petersburg().atomize(default_grid(), 1e-9);
  CHECK(at.truncated_tail == 0.0);  // atoms are exact, only folded past 2^62
  double total = at.inf_mass;
  for (const Atom& a : at.atoms) total += a.p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> tiny = log_grid(1e-3, 1.0, 16);
  CHECK_THROWS_AS(RuntimeDist::exponential(0.001).atomize(tiny, 1e-9), NonDiscretizable);
}

TEST_CASE("captime quantile inverts the cdf") {
  const std::vector<CaptimeDist> ks = {
      CaptimeDist::uniform(10.0),
      CaptimeDist::exponential(2.0),
      CaptimeDist::pareto(1.0, 1.5),
      CaptimeDist::log_laplace(2.0, 1.0),
      CaptimeDist::generalized_log_laplace(1.0, 2.0, 1.0),
      CaptimeDist::log_normal(1.0, 0.7),
      CaptimeDist::piecewise_tail(5.0, 1.0, 0.4)};
  for (const CaptimeDist& k : ks) {
    for (double p : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
      CHECK(k.cdf(k.quantile(p)) == doctest::Approx(p).epsilon(1e-9));
    }
  }
}

TEST_CASE("csv ingestion round-trips including infinity") {
  std::istringstream in(
      "runtime_seconds,probability\n"
      "1.5,0.25\n"
      "inf,0.25\n"
      "2,0.5\n");
  const RuntimeDist d = RuntimeDist::from_csv(in);
  CHECK(d.cdf(1.5) == 0.25);
  CHECK(d.cdf(2.0) == 0.75);
  CHECK(d.mass_at_infinity() == 0.25);

  std::istringstream bad_header("time,prob\n1,1\n");
  CHECK_THROWS_AS(RuntimeDist::from_csv(bad_header), ParseError);
  std::istringstream bad_mass("runtime_seconds,probability\n1,0.5\n");
  CHECK_THROWS_AS(RuntimeDist::from_csv(bad_mass), BadParameters);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(RuntimeDist::discrete({{1.0, 0.5}, {2.0, 0.6}}), BadParameters);
  CHECK_THROWS_AS(RuntimeDist::discrete({{1.0, 0.0}, {2.0, 1.0}}), BadParameters);
  CHECK_THROWS_AS(RuntimeDist::exponential(-1.0), BadParameters);
  CHECK_THROWS_AS(CaptimeDist::piecewise_tail(1.0, 2.0, 0.5), BadParameters);
  CHECK_THROWS_AS(CaptimeDist::uniform(0.0), BadParameters);
  CHECK_THROWS_AS(mix(1.5, RuntimeDist::dirac(1.0), RuntimeDist::dirac(2.0)), BadParameters);
}
