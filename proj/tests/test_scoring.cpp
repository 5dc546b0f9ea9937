#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rtu/distributions.hpp"
#include "rtu/errors.hpp"
#include "rtu/scoring.hpp"
#include "rtu/utility.hpp"

using namespace rtu;

namespace {

std::vector<RuntimeSample> capped(std::initializer_list<double> times, double captime) {
  std::vector<RuntimeSample> out;
  for (double t : times) {
    if (t >= captime) {
      out.push_back({captime, true, captime});
    } else {
      out.push_back({t, false, captime});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("discrete runtimes under a point captime match a direct sum") {
  const RuntimeDist a =
      RuntimeDist::discrete({{0.5, 0.2}, {2.0, 0.3}, {6.0, 0.3}, {kInfinity, 0.2}});
  const std::vector<UtilityFunction> us = {
      UtilityFunction::step(), UtilityFunction::exponential(0.7),
      UtilityFunction::uniform(5.0), UtilityFunction::pareto(0.4, 1.2),
      UtilityFunction::linear_money(3.0, 0.1, 0.5)};
  const double kappa = 4.0;
  for (const UtilityFunction& u : us) {
    const double direct = 0.2 * u.evaluate_normalized(0.5, kappa) +
                          0.3 * u.evaluate_normalized(2.0, kappa) +
                          0.3 * u.evaluate_normalized(6.0, kappa) + 0.2 * 0.0;
    const ScoreReport r = score_analytic(a, CaptimeDist::dirac(kappa), u);
    CHECK(std::abs(r.score - direct) <= 1e-12);
    CHECK(r.method == "analytic");
  }
}

TEST_CASE("runs-or-restarts example with a heavy-tailed captime") {
  // Algorithm A: finishes in 1s with probability 0.99, never otherwise.
  // Algorithm B: always finishes in ten days (864000 s).
  // Captime ~ Pareto(1, 1): s(A) slightly above 0.99, s(B) = 1/864000.
  const RuntimeDist a = mix(0.99, RuntimeDist::dirac(1.0), RuntimeDist::dirac(864000.0));
  const RuntimeDist b = RuntimeDist::dirac(864000.0);
  const CaptimeDist k = CaptimeDist::pareto(1.0, 1.0);
  const UtilityFunction u = UtilityFunction::step();
  const double sa = score_analytic(a, k, u).score;
  const double sb = score_analytic(b, k, u).score;
  CHECK(sa >= 0.99);
  CHECK(sa == doctest::Approx(0.99 + 0.01 / 864000.0).epsilon(1e-9));
  CHECK(sb == doctest::Approx(1.0 / 864000.0).epsilon(1e-9));
  CHECK(sa > sb);
  // A variant that never halts on the bad branch scores exactly 0.99.
  const RuntimeDist never = mix(0.99, RuntimeDist::dirac(1.0), RuntimeDist::dirac(kInfinity));
  CHECK(score_analytic(never, k, u).score == doctest::Approx(0.99).epsilon(1e-12));
}

TEST_CASE("analytic golden values") {
  const UtilityFunction step = UtilityFunction::step();
  CHECK(score_analytic(RuntimeDist::dirac(kInfinity), CaptimeDist::dirac(1.0), step).score == 0.0);
  CHECK(score_analytic(RuntimeDist::dirac(0.0), CaptimeDist::pareto(1.0, 1.0), step).score == 1.0);
  // P(kappa > 1) for Pareto(1, 1) is 1, and the atom sits at the boundary
  // t >= kappa has probability zero.
  CHECK(score_analytic(RuntimeDist::dirac(1.0), CaptimeDist::pareto(1.0, 1.0), step).score ==
        doctest::Approx(1.0).epsilon(1e-9));
  // E[e^-t] for t ~ Exp(2) is 2/3; the captime is irrelevant for a utility
  // that does not depend on it.
  const ScoreReport r = score_analytic(RuntimeDist::exponential(2.0), CaptimeDist::dirac(1.0),
                                       UtilityFunction::exponential(1.0));
  CHECK(r.score == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  // Linear money, point captime: (r + cost(kappa) - cost(t)) normalized.
  const ScoreReport lm = score_analytic(RuntimeDist::dirac(2.0), CaptimeDist::dirac(5.0),
                                        UtilityFunction::linear_money(10.0, 0.0, 1.0));
  CHECK(lm.score == doctest::Approx(13.0 / 15.0).epsilon(1e-12));
}

TEST_CASE("step utility with a random captime equals the survival score") {
  const RuntimeDist a = RuntimeDist::log_normal(0.5, 1.0);
  const CaptimeDist k = CaptimeDist::uniform(6.0);
  const double via_step = score_analytic(a, k, UtilityFunction::step()).score;
  const double via_survival =
      score_analytic(a, CaptimeDist::dirac(1.0), UtilityFunction::survival_of(k)).score;
  CHECK(via_step == doctest::Approx(via_survival).epsilon(1e-9));
}

TEST_CASE("linear money with a uniform captime matches a brute-force double sum") {
  const RuntimeDist a = RuntimeDist::discrete({{0.5, 0.4}, {2.0, 0.4}, {kInfinity, 0.2}});
  const UtilityFunction u = UtilityFunction::linear_money(4.0, 0.2, 0.7);
  // Discretize the uniform captime finely and sum.
  const double hi = 3.0;
  const int cells = 400000;
  double brute = 0.0;
  for (int j = 0; j < cells; ++j) {
    const double kappa = hi * (j + 0.5) / cells;
    const double pk = 1.0 / cells;
    brute += pk * (0.4 * u.evaluate_normalized(0.5, kappa) +
                   0.4 * u.evaluate_normalized(2.0, kappa));
  }
  const double got = score_analytic(a, CaptimeDist::uniform(hi), u).score;
  CHECK(got == doctest::Approx(brute).epsilon(1e-6));
}

TEST_CASE("affine rescaling shifts the score affinely") {
  const RuntimeDist a = RuntimeDist::weibull(1.3, 2.0);
  const CaptimeDist k = CaptimeDist::dirac(1.0);
  const UtilityFunction u = UtilityFunction::exponential(0.5);
  const double base = score_analytic(a, k, u).score;
  const double scaled = score_analytic(a, k, u.with_affine(3.0, -1.0)).score;
  CHECK(scaled == doctest::Approx(3.0 * base - 1.0).epsilon(1e-8));
}

TEST_CASE("empirical scores and confidence intervals") {
  const UtilityFunction u = UtilityFunction::uniform(10.0);
  const std::vector<RuntimeSample> s = capped({2.0, 4.0, 10.0, 12.0}, 10.0);
  const ScoreReport r = score_empirical(s, u);
  // Censored samples contribute u(captime) = 0.
  CHECK(r.score == doctest::Approx((0.8 + 0.6 + 0.0 + 0.0) / 4.0).epsilon(1e-14));
  CHECK(r.method == "empirical");
  CHECK(r.n_samples == 4);
  CHECK(r.total_compute == doctest::Approx(2.0 + 4.0 + 10.0 + 10.0).epsilon(1e-14));
  REQUIRE(r.ci.has_value());
  const double hw = std::sqrt(std::log(2.0 / 0.05) / (2.0 * 4));
  CHECK(r.ci->high - r.ci->low == doctest::Approx(2.0 * hw).epsilon(1e-12));
  CHECK(r.ci->confidence == 0.95);

  // The planned sample count: n = 666, delta = 0.05 gives half-width ~ eps/2.
  std::vector<RuntimeSample> many(666, RuntimeSample{1.0, false, 5.0});
  const ScoreReport big = score_empirical(many, u);
  const double hw666 = std::sqrt(std::log(2.0 / 0.05) / (2.0 * 666));
  CHECK(big.ci->high - big.ci->low == doctest::Approx(2.0 * hw666).epsilon(1e-12));
  CHECK(hw666 <= 0.06);

  CHECK_THROWS_AS(score_empirical({}, u), EmptyInput);
  CHECK_THROWS_AS(score_empirical(capped({1.0}, 2.0), u, 1.0), BadParameters);
  std::vector<RuntimeSample> mixed = capped({1.0}, 2.0);
  mixed.push_back({3.0, true, 3.0});
  CHECK_THROWS_AS(score_empirical(mixed, u), MixedCaptimes);
  // Censoring flags must be consistent with the captime.
  CHECK_THROWS_AS(score_empirical({{2.0, false, 2.0}}, u), BadParameters);
  CHECK_THROWS_AS(score_empirical({{1.0, true, 2.0}}, u), BadParameters);
}

TEST_CASE("classical scores from samples") {
  const ClassicalScores c = classical_scores(capped({1.0, 3.0, 8.0}, 5.0), 5.0, 10.0);
  CHECK(std::isinf(c.mean));
  CHECK(c.any_censored);
  CHECK(c.capped_mean == doctest::Approx((1.0 + 3.0 + 5.0) / 3.0).epsilon(1e-14));
  CHECK(c.par_c == doctest::Approx((1.0 + 3.0 + 50.0) / 3.0).epsilon(1e-14));
  CHECK(c.fraction_solved == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  const ClassicalScores ok = classical_scores(capped({1.0, 3.0}, 5.0), 5.0, 2.0);
  CHECK(ok.mean == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(!ok.any_censored);
}

TEST_CASE("heavy-tail golden scores are exact for the doubling runtimes") {
  // Runtime 2^i with probability 2^-i: capped mean at kappa = 2^k is
  // log2(kappa) + 1 and PAR-c is log2(kappa) + 2c - 1 (t >= kappa censored).
  const RuntimeDist sp = RuntimeDist::st_petersburg();
  for (int k : {1, 5, 10, 20}) {
    const double kappa = std::ldexp(1.0, k);
    const ClassicalScores c = classical_scores_analytic(sp, kappa, 2.0);
    CHECK(c.capped_mean == doctest::Approx(k + 1.0).epsilon(1e-12));
    CHECK(c.par_c == doctest::Approx(k + 3.0).epsilon(1e-12));
    const ClassicalScores c10 = classical_scores_analytic(sp, kappa, 10.0);
    CHECK(c10.par_c == doctest::Approx(k + 19.0).epsilon(1e-12));
    CHECK(std::isinf(c.mean));
  }
}

TEST_CASE("capped mean ranking flips with the captime") {
  // Dirac(10) vs the doubling-runtimes distribution: at kappa = 6 the point
  // mass is censored (capped mean 6 vs ~3.58); at kappa = 11 it finishes
  // (capped mean 10 vs ~4.58) yet PAR-2 and capped-mean orderings disagree
  // with utility orderings across the pair, exhibiting captime sensitivity.
  const RuntimeDist point = RuntimeDist::dirac(10.0);
  const RuntimeDist sp = RuntimeDist::st_petersburg();
  const double cm_point_6 = classical_scores_analytic(point, 6.0, 2.0).capped_mean;
  const double cm_sp_6 = classical_scores_analytic(sp, 6.0, 2.0).capped_mean;
  const double cm_point_11 = classical_scores_analytic(point, 11.0, 2.0).capped_mean;
  const double cm_sp_11 = classical_scores_analytic(sp, 11.0, 2.0).capped_mean;
  CHECK(cm_point_6 == 6.0);
  CHECK(cm_point_11 == 10.0);
  // Relative gap shrinks and par ordering flips.
  const double par_point_6 = classical_scores_analytic(point, 6.0, 2.0).par_c;
  const double par_sp_6 = classical_scores_analytic(sp, 6.0, 2.0).par_c;
  const double par_point_11 = classical_scores_analytic(point, 11.0, 2.0).par_c;
  const double par_sp_11 = classical_scores_analytic(sp, 11.0, 2.0).par_c;
  CHECK(par_point_6 > par_sp_6);    // 12 > ~5.58
  CHECK(par_point_11 > par_sp_11);  // 10 > ~6.58, but the gap halves
  CHECK((par_point_6 - par_sp_6) > (par_point_11 - par_sp_11));
  CHECK(cm_point_6 > cm_sp_6);
  CHECK(cm_point_11 > cm_sp_11);
}

TEST_CASE("capped mean is nondecreasing in the captime") {
  const RuntimeDist a = RuntimeDist::discrete({{1.0, 0.5}, {4.0, 0.3}, {kInfinity, 0.2}});
  double prev = 0.0;
  for (double kappa : {0.5, 1.5, 3.0, 5.0, 100.0}) {
    const double cm = classical_scores_analytic(a, kappa, 2.0).capped_mean;
    CHECK(cm >= prev - 1e-12);
    prev = cm;
  }
}

TEST_CASE("stochastically faster algorithms never score lower") {
  // B is A shifted right: A first-order dominates B, so s(A) >= s(B) for
  // every utility and captime.
  const RuntimeDist a = RuntimeDist::discrete({{1.0, 0.6}, {3.0, 0.4}});
  const RuntimeDist b = RuntimeDist::discrete({{2.0, 0.6}, {4.0, 0.4}});
  const std::vector<UtilityFunction> us = {UtilityFunction::step(),
                                           UtilityFunction::exponential(1.0),
                                           UtilityFunction::uniform(5.0)};
  for (const UtilityFunction& u : us) {
    for (const CaptimeDist& k :
         {CaptimeDist::dirac(2.5), CaptimeDist::uniform(6.0), CaptimeDist::pareto(0.5, 1.5)}) {
      CHECK(score_analytic(a, k, u).score >= score_analytic(b, k, u).score - 1e-10);
    }
  }
}

TEST_CASE("quality scores") {
  const QualityUtility uq(UtilityFunction::step(), 0.0, 1.0);
  const std::vector<QualitySample> s = {
      {1.0, 1.0, false, 5.0}, {2.0, 0.5, false, 5.0}, {5.0, 0.0, true, 5.0}};
  const ScoreReport r = score_quality(s, uq);
  CHECK(r.score == doctest::Approx((1.0 + 0.5 + 0.0) / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(score_quality({}, uq), EmptyInput);
}

TEST_CASE("ranking") {
  std::map<std::string, ScoreReport> reports;
  auto mk = [](double score, double slack) {
    ScoreReport r;
    r.score = score;
    r.method = slack > 0.0 ? "empirical" : "analytic";
    if (slack > 0.0) r.ci = ConfidenceInterval{score - slack, score + slack, 0.95};
    r.utility_tag = "u";
    return r;
  };
  reports["fast"] = mk(0.9, 0.0);
  reports["slow"] = mk(0.1, 0.0);
  reports["mid1"] = mk(0.5, 0.0);
  reports["mid2"] = mk(0.5, 0.0);
  const std::vector<RankedEntry> ranked = rank(reports);
  REQUIRE(ranked.size() == 4);
  CHECK(ranked[0].name == "fast");
  CHECK(ranked[0].tie_group == 0);
  CHECK(ranked[1].name == "mid1");
  CHECK(ranked[2].name == "mid2");
  CHECK(ranked[1].tie_group == ranked[2].tie_group);
  CHECK(ranked[3].name == "slow");
  CHECK(ranked[3].tie_group > ranked[2].tie_group);

  // Overlapping confidence intervals merge into one tie group.
  std::map<std::string, ScoreReport> noisy;
  noisy["a"] = mk(0.52, 0.05);
  noisy["b"] = mk(0.48, 0.05);
  noisy["c"] = mk(0.10, 0.05);
  const std::vector<RankedEntry> nr = rank(noisy);
  CHECK(nr[0].tie_group == nr[1].tie_group);
  CHECK(nr[2].tie_group != nr[1].tie_group);

  // Mismatched utilities cannot be ranked together.
  std::map<std::string, ScoreReport> bad;
  bad["a"] = mk(0.5, 0.0);
  bad["b"] = mk(0.4, 0.0);
  bad["b"].utility_tag = "other";
  CHECK_THROWS_AS(rank(bad), IncomparableReports);
  CHECK_THROWS_AS(rank({}), EmptyInput);
}

TEST_CASE("ranking is invariant under affine utility rescaling") {
  const CaptimeDist k = CaptimeDist::uniform(5.0);
  const std::vector<std::pair<std::string, RuntimeDist>> algos = {
      {"a", RuntimeDist::exponential(1.0)},
      {"b", RuntimeDist::dirac(2.0)},
      {"c", mix(0.5, RuntimeDist::dirac(0.5), RuntimeDist::dirac(kInfinity))}};
  const UtilityFunction u = UtilityFunction::step();
  const UtilityFunction v = u.with_affine(7.0, -2.0);
  std::map<std::string, ScoreReport> ru, rv;
  for (const auto& [name, a] : algos) {
    ru[name] = score_analytic(a, k, u);
    ru[name].name = name;
    rv[name] = score_analytic(a, k, v);
    rv[name].name = name;
  }
  const std::vector<RankedEntry> order_u = rank(ru);
  const std::vector<RankedEntry> order_v = rank(rv);
  REQUIRE(order_u.size() == order_v.size());
  for (std::size_t i = 0; i < order_u.size(); ++i) {
    CHECK(order_u[i].name == order_v[i].name);
    CHECK(order_u[i].tie_group == order_v[i].tie_group);
  }
}
