#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtu/axioms.hpp"
#include "rtu/distributions.hpp"
#include "rtu/errors.hpp"
#include "rtu/estimation.hpp"
#include "rtu/io.hpp"
#include "rtu/maxent.hpp"
#include "rtu/runner.hpp"
#include "rtu/scoring.hpp"
#include "rtu/utility.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitSemantic = 3;
constexpr int kExitChild = 4;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RUNTIME_UTILITY_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw rtu::ParseError("RUNTIME_UTILITY_SEED is not an integer");
    }
  }
  return 1;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rtu::ParseError("cannot open output file `" + path + "`");
  out << content;
}

std::string fixed9(double v) { return rtu::format_seconds(v); }

json finite_or_inf(double v) {
  if (std::isinf(v)) return json("inf");
  return json(v);
}

// --- sample assembly ---------------------------------------------------------

struct AlgorithmSamples {
  std::vector<rtu::RuntimeSample> runtime;
  std::vector<rtu::QualitySample> quality;
  bool has_quality = false;
};

std::map<std::string, AlgorithmSamples> group_samples(const std::vector<rtu::RunRow>& rows,
                                                      std::optional<std::pair<double, double>>
                                                          quality_range) {
  std::map<std::string, AlgorithmSamples> grouped;
  for (const rtu::RunRow& row : rows) {
    AlgorithmSamples& g = grouped[row.algorithm];
    g.runtime.push_back({row.runtime_seconds, row.censored, row.captime_seconds});
    if (quality_range) {
      const double q1 = quality_range->second, q0 = quality_range->first;
      const double q = row.censored ? q0 : row.quality.value_or(q1);
      g.quality.push_back({row.runtime_seconds, q, row.censored, row.captime_seconds});
      g.has_quality = true;
    }
  }
  return grouped;
}

std::map<std::string, rtu::ScoreReport> score_rows(const std::vector<rtu::RunRow>& rows,
                                                   const rtu::UtilityConfig& config,
                                                   double confidence) {
  std::map<std::string, rtu::ScoreReport> reports;
  for (auto& [name, samples] : group_samples(rows, config.quality_range)) {
    rtu::ScoreReport report;
    if (samples.has_quality) {
      const rtu::QualityUtility uq(config.utility, config.quality_range->first,
                                   config.quality_range->second);
      report = rtu::score_quality(samples.quality, uq, confidence);
    } else {
      report = rtu::score_empirical(samples.runtime, config.utility, confidence);
    }
    report.name = name;
    reports.emplace(name, std::move(report));
  }
  if (reports.empty()) throw rtu::EmptyInput("run log has no rows");
  return reports;
}

// --- subcommands ---------------------------------------------------------

int cmd_score(const std::string& runlog_path, const std::string& utility_path,
              double confidence, bool classical, double par_factor,
              const std::string& output) {
  const rtu::UtilityConfig config = rtu::load_utility_config(utility_path);
  const std::vector<rtu::RunRow> rows = rtu::read_runlog_file(runlog_path);
  const auto reports = score_rows(rows, config, confidence);
  json out = json::array();
  const auto grouped = group_samples(rows, config.quality_range);
  for (const auto& [name, report] : reports) {
    json doc = rtu::report_to_json(report);
    if (classical) {
      const auto& samples = grouped.at(name).runtime;
      const rtu::ClassicalScores cs =
          rtu::classical_scores(samples, samples.front().captime_used, par_factor);
      doc["classical"] = {{"mean", finite_or_inf(cs.mean)},
                          {"capped_mean", cs.capped_mean},
                          {"par", cs.par_c},
                          {"par_factor", par_factor},
                          {"fraction_solved", cs.fraction_solved}};
    }
    out.push_back(std::move(doc));
  }
  write_output(output, out.dump(2) + "\n");
  return kExitOk;
}

int cmd_rank(const std::string& runlog_path, const std::string& utility_path,
             double confidence, const std::string& output) {
  const rtu::UtilityConfig config = rtu::load_utility_config(utility_path);
  const auto reports = score_rows(rtu::read_runlog_file(runlog_path), config, confidence);
  std::ostringstream os;
  os << "name,score,tie_group\n";
  for (const rtu::RankedEntry& e : rtu::rank(reports)) {
    os << e.name << ',' << fixed9(e.score) << ',' << e.tie_group << '\n';
  }
  write_output(output, os.str());
  return kExitOk;
}

int cmd_plan(const std::string& utility_path, double epsilon, double delta,
             const std::string& output) {
  const rtu::UtilityConfig config = rtu::load_utility_config(utility_path);
  const rtu::SamplePlan plan = rtu::plan(config.utility, epsilon, delta);
  write_output(output, rtu::plan_to_json(plan).dump(2) + "\n");
  return kExitOk;
}

rtu::RuntimeDist parse_source(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::vector<double> args;
  std::string path;
  if (colon != std::string::npos) {
    path = spec.substr(colon + 1);
    std::stringstream ss(path);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        args.push_back(tok == "inf" ? rtu::kInfinity : std::stod(tok));
      } catch (const std::exception&) {
        args.clear();
        break;
      }
    }
  }
  const auto need = [&](std::size_t n) {
    if (args.size() != n) throw rtu::ParseError("source `" + spec + "`: wrong argument count");
  };
  if (kind == "dirac") {
    need(1);
    return rtu::RuntimeDist::dirac(args[0]);
  }
  if (kind == "exponential") {
    need(1);
    return rtu::RuntimeDist::exponential(args[0]);
  }
  if (kind == "lognormal") {
    need(2);
    return rtu::RuntimeDist::log_normal(args[0], args[1]);
  }
  if (kind == "weibull") {
    need(2);
    return rtu::RuntimeDist::weibull(args[0], args[1]);
  }
  if (kind == "pareto") {
    need(2);
    return rtu::RuntimeDist::pareto(args[0], args[1]);
  }
  if (kind == "stpetersburg") return rtu::RuntimeDist::st_petersburg();
  if (kind == "csv") return rtu::RuntimeDist::from_csv_file(path);
  throw rtu::ParseError("unknown source `" + spec + "`");
}

int cmd_estimate(const std::string& utility_path, const std::string& source_spec,
                 const std::string& plan_path, double epsilon, double delta,
                 std::uint64_t seed, const std::string& output) {
  const rtu::UtilityConfig config = rtu::load_utility_config(utility_path);
  const rtu::SamplePlan plan =
      plan_path.empty() ? rtu::plan(config.utility, epsilon, delta) : rtu::load_plan(plan_path);
  const rtu::RuntimeDist source = parse_source(source_spec);
  rtu::Rng rng(seed);
  rtu::ScoreReport report = rtu::estimate(source, plan, config.utility, rng);
  report.name = source_spec;
  write_output(output, rtu::report_to_json(report).dump(2) + "\n");
  return kExitOk;
}

int cmd_run(const std::string& command_template, const std::string& instances_path,
            const std::string& plan_path, double captime, const std::string& algorithm,
            std::uint64_t seed, unsigned parallel, const std::string& output) {
  if (command_template.find("{instance}") == std::string::npos) {
    throw rtu::ParseError("command template must contain `{instance}`");
  }
  if (!plan_path.empty()) captime = rtu::load_plan(plan_path).captime;
  if (!(captime > 0.0)) throw rtu::ParseError("need --plan or a positive --captime");

  std::ifstream in(instances_path);
  if (!in) throw rtu::ParseError("cannot open instances file `" + instances_path + "`");
  std::vector<std::string> instances;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) instances.push_back(line);
  }
  if (instances.empty()) throw rtu::EmptyInput("instances file is empty");

  std::vector<rtu::RunOutcome> outcomes(instances.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= instances.size()) return;
      std::string cmd = command_template;
      const std::size_t at = cmd.find("{instance}");
      cmd.replace(at, 10, instances[i]);
      outcomes[i] = rtu::run_capped(cmd, captime);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < std::max(1u, parallel); ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::vector<rtu::RunRow> rows;
  bool any_failed = false;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (outcomes[i].spawn_failed) {
      any_failed = true;
      std::cerr << "warning: failed to spawn run for instance `" << instances[i]
                << "`; row excluded\n";
      continue;
    }
    rows.push_back({algorithm, instances[i], seed + i, outcomes[i].runtime_seconds,
                    outcomes[i].censored, captime, std::nullopt});
  }
  std::ostringstream os;
  rtu::write_runlog(os, rows);
  write_output(output, os.str());
  return any_failed ? kExitChild : kExitOk;
}

std::pair<double, double> parse_range(const std::string& range) {
  const std::size_t colon = range.find(':');
  if (colon == std::string::npos) throw rtu::ParseError("range must be `lo:hi`");
  try {
    const double lo = std::stod(range.substr(0, colon));
    const double hi = std::stod(range.substr(colon + 1));
    if (!(hi > lo)) throw std::invalid_argument(range);
    return {lo, hi};
  } catch (const std::exception&) {
    throw rtu::ParseError("bad range `" + range + "`");
  }
}

rtu::EntropyProblem load_maxent_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rtu::ParseError("cannot open constraints file `" + path + "`");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw rtu::ParseError(std::string("constraints file: ") + e.what());
  }
  try {
    rtu::EntropyProblem problem;
    const json& grid = doc.at("grid");
    const double lo = grid.at("lo").get<double>();
    const double hi = grid.at("hi").get<double>();
    const std::size_t cells = grid.value("cells", std::size_t{2048});
    const std::string spacing = grid.value("spacing", std::string("linear"));
    problem.grid_edges = spacing == "log" ? rtu::log_grid(lo, hi, cells + 1)
                                          : rtu::linear_grid(lo, hi, cells + 1);
    for (const json& c : doc.at("constraints")) {
      const std::string kind = c.at("kind").get<std::string>();
      if (kind == "normalize") {
        problem.constraints.push_back(rtu::Constraint::normalize());
      } else if (kind == "bounded_support") {
        problem.constraints.push_back(rtu::Constraint::bounded_support(c.at("kappa0")));
      } else if (kind == "mean") {
        problem.constraints.push_back(rtu::Constraint::mean(c.at("kappa0")));
      } else if (kind == "log_mean_above") {
        problem.constraints.push_back(
            rtu::Constraint::log_mean_above(c.at("kappa0"), c.at("alpha")));
      } else if (kind == "two_tail_log") {
        problem.constraints.push_back(rtu::Constraint::two_tail_log(
            c.at("kappa0"), c.at("alpha"), c.at("beta"), c.at("p")));
      } else if (kind == "centered_log_second_moment") {
        problem.constraints.push_back(
            rtu::Constraint::centered_log_second_moment(c.at("kappa0"), c.at("sigma")));
      } else if (kind == "tail_probability") {
        problem.constraints.push_back(
            rtu::Constraint::tail_probability(c.at("kappa1"), c.at("delta")));
      } else if (kind == "continuity_at") {
        problem.constraints.push_back(rtu::Constraint::continuity_at(c.at("kappa0")));
      } else {
        throw rtu::ParseError("unknown constraint kind `" + kind + "`");
      }
    }
    return problem;
  } catch (const json::exception& e) {
    throw rtu::ParseError(std::string("constraints file: ") + e.what());
  }
}

int cmd_curve(const std::string& utility_path, const std::string& maxent_path,
              std::size_t points, const std::string& range, double captime,
              const std::string& output) {
  std::ostringstream os;
  if (!maxent_path.empty()) {
    const rtu::EntropyProblem problem = load_maxent_problem(maxent_path);
    const rtu::CaptimeDist solution = rtu::solve_maxent(problem);
    const auto& edges = solution.grid_edges();
    const auto& density = solution.grid_density();
    os << "kappa,density\n";
    for (std::size_t i = 0; i < density.size(); ++i) {
      os << fixed9(0.5 * (edges[i] + edges[i + 1])) << ',' << fixed9(density[i]) << '\n';
    }
    write_output(output, os.str());
    return kExitOk;
  }
  if (points < 2) throw rtu::BadParameters("--points must be at least 2");
  const rtu::UtilityConfig config = rtu::load_utility_config(utility_path);
  const rtu::UtilityFunction& u = config.utility;
  double lo = 0.0, hi = 0.0;
  if (!range.empty()) {
    std::tie(lo, hi) = parse_range(range);
  } else if (u.depends_on_kappa()) {
    if (!(captime > 0.0)) {
      throw rtu::BadParameters("this utility needs --captime (or --range) for a curve");
    }
    hi = 2.0 * captime;
  } else {
    hi = 2.0 * u.params()[0];
  }
  if (u.depends_on_kappa() && !(captime > 0.0)) {
    throw rtu::BadParameters("this utility needs --captime for a curve");
  }
  const double kappa = captime > 0.0 ? captime : rtu::kInfinity;
  os << "t,utility\n";
  for (std::size_t i = 0; i < points; ++i) {
    const double t =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    os << fixed9(t) << ',' << fixed9(u.evaluate(t, kappa)) << '\n';
  }
  write_output(output, os.str());
  return kExitOk;
}

int cmd_axiom_check(std::uint64_t seed, std::size_t trials, const std::string& output) {
  const std::vector<std::pair<std::string, rtu::UtilityFunction>> families = {
      {"step", rtu::UtilityFunction::step()},
      {"linear_money", rtu::UtilityFunction::linear_money(10.0, 0.0, 1.0)},
      {"uniform", rtu::UtilityFunction::uniform(1.0)},
      {"exponential", rtu::UtilityFunction::exponential(1.0)},
      {"pareto", rtu::UtilityFunction::pareto(1.0, 1.5)},
      {"log_laplace", rtu::UtilityFunction::log_laplace(1.0, 2.0)},
      {"generalized_log_laplace", rtu::UtilityFunction::generalized_log_laplace(1.0, 2.0, 1.0)},
      {"log_normal", rtu::UtilityFunction::log_normal(1.0, 1.0)},
      {"piecewise_linear", rtu::UtilityFunction::piecewise_linear(2.0, 1.0, 0.3)},
  };
  const std::vector<double> grid = {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
  std::ostringstream os;
  bool all_ok = true;
  for (const auto& [name, u] : families) {
    rtu::Rng rng(seed);
    std::size_t violations = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      const rtu::DiscreteInstance instance = rtu::random_discrete_instance(rng, u);
      const rtu::AxiomReport t1 = rtu::check_theorem1(instance);
      violations += t1.violations.size();
      const double e0 = rtu::expected_p(instance.algorithms[0], instance.captime_atoms, u);
      const double e1 = rtu::expected_p(instance.algorithms[1], instance.captime_atoms, u);
      const rtu::RuntimeDist& hi = e0 >= e1 ? instance.algorithms[0] : instance.algorithms[1];
      const rtu::RuntimeDist& lo = e0 >= e1 ? instance.algorithms[1] : instance.algorithms[0];
      const rtu::AxiomReport mono =
          rtu::check_monotonicity_axiom(hi, lo, instance.captime_atoms, u, grid, grid);
      violations += mono.violations.size();
      const rtu::ContinuityResult cont = rtu::check_continuity_axiom(
          hi, rtu::mix(0.5, hi, lo), lo, instance.captime_atoms, u);
      if (cont.residual > 1e-12) ++violations;
    }
    if (violations) all_ok = false;
    os << (violations ? "FAIL " : "PASS ") << name << " trials=" << trials
       << " violations=" << violations << '\n';
  }
  write_output(output, os.str());
  return all_ok ? kExitOk : kExitSemantic;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Score and rank algorithms by expected utility over runtime distributions"};
  app.require_subcommand(1);

  std::string runlog, utility_path, output, plan_path, source_spec, command_template,
      instances_path, maxent_path, range, algorithm = "algorithm";
  double confidence = 0.95, par_factor = 10.0, epsilon = 0.1, delta = 0.05, captime = 0.0;
  bool classical = false;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t points = 256, trials = 200;
  unsigned parallel = 1;

  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "random seed (default: $RUNTIME_UTILITY_SEED or 1)")
        ->each([&](const std::string&) { seed_given = true; });
  };

  CLI::App* score = app.add_subcommand("score", "score a run log under a utility");
  score->add_option("runlog", runlog)->required();
  score->add_option("utility", utility_path)->required();
  score->add_option("--confidence", confidence);
  score->add_flag("--classical", classical, "also report classical baselines");
  score->add_option("--par-factor", par_factor);
  score->add_option("--output", output);

  CLI::App* rank = app.add_subcommand("rank", "rank algorithms in a run log");
  rank->add_option("runlog", runlog)->required();
  rank->add_option("utility", utility_path)->required();
  rank->add_option("--confidence", confidence);
  rank->add_option("--output", output);

  CLI::App* plan = app.add_subcommand("plan", "emit an estimation budget");
  plan->add_option("utility", utility_path)->required();
  plan->add_option("--epsilon", epsilon)->required();
  plan->add_option("--delta", delta)->required();
  plan->add_option("--output", output);

  CLI::App* estimate = app.add_subcommand("estimate", "estimate a score from a synthetic source");
  estimate->add_option("utility", utility_path)->required();
  estimate->add_option("--source", source_spec, "dirac:T | exponential:R | lognormal:MU,SIGMA | "
                                                "weibull:K,S | pareto:XMIN,A | stpetersburg | csv:PATH")
      ->required();
  estimate->add_option("--plan", plan_path);
  estimate->add_option("--epsilon", epsilon);
  estimate->add_option("--delta", delta);
  estimate->add_option("--output", output);
  add_seed(estimate);

  CLI::App* run = app.add_subcommand("run", "run a command per instance under a captime");
  run->add_option("command", command_template, "shell command with {instance}")->required();
  run->add_option("instances", instances_path)->required();
  run->add_option("--plan", plan_path);
  run->add_option("--captime", captime);
  run->add_option("--algorithm", algorithm);
  run->add_option("--parallel", parallel);
  run->add_option("--output", output);
  add_seed(run);

  CLI::App* curve = app.add_subcommand("curve", "emit utility or maxent density plot data");
  curve->add_option("--utility", utility_path);
  curve->add_option("--maxent", maxent_path);
  curve->add_option("--points", points);
  curve->add_option("--range", range, "lo:hi");
  curve->add_option("--captime", captime);
  curve->add_option("--output", output);

  CLI::App* axioms = app.add_subcommand("axiom-check", "run the axiom oracle suite");
  axioms->add_option("--trials", trials);
  axioms->add_option("--output", output);
  add_seed(axioms);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (!seed_given) seed = default_seed();
    if (score->parsed()) {
      return cmd_score(runlog, utility_path, confidence, classical, par_factor, output);
    }
    if (rank->parsed()) return cmd_rank(runlog, utility_path, confidence, output);
    if (plan->parsed()) return cmd_plan(utility_path, epsilon, delta, output);
    if (estimate->parsed()) {
      return cmd_estimate(utility_path, source_spec, plan_path, epsilon, delta, seed, output);
    }
    if (run->parsed()) {
      return cmd_run(command_template, instances_path, plan_path, captime, algorithm, seed,
                     parallel, output);
    }
    if (curve->parsed()) {
      if (utility_path.empty() == maxent_path.empty()) {
        throw rtu::ParseError("curve needs exactly one of --utility or --maxent");
      }
      return cmd_curve(utility_path, maxent_path, points, range, captime, output);
    }
    if (axioms->parsed()) return cmd_axiom_check(seed, trials, output);
  } catch (const rtu::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSemantic;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSemantic;
  }
  return kExitOk;
}
