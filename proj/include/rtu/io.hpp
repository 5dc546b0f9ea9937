#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtu/estimation.hpp"
#include "rtu/scoring.hpp"
#include "rtu/utility.hpp"

namespace rtu {

/// One row of a run log. CSV header is exactly
/// `algorithm,instance,seed,runtime_seconds,censored,captime_seconds`
/// with an optional trailing `quality` column; infinity is the literal `inf`.
struct RunRow {
  std::string algorithm;
  std::string instance;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;
  bool censored = false;
  double captime_seconds = 0.0;
  std::optional<double> quality;
};

std::vector<RunRow> read_runlog(std::istream& in);
std::vector<RunRow> read_runlog_file(const std::string& path);
void write_runlog(std::ostream& out, const std::vector<RunRow>& rows);

/// Seconds with 9 decimal digits (nanosecond precision); infinity as `inf`.
std::string format_seconds(double t);

/// Utility configuration document:
///   {"family": "...", "params": {...}, "c1": 1.0, "c0": 0.0,
///    "quality": {"q0": ..., "q1": ...}}   (quality block optional)
/// Families and parameter keys: step {}; linear_money {r, cost_fixed,
/// cost_rate}; uniform {kappa0}; exponential {kappa0}; pareto {kappa0,
/// alpha}; log_laplace {kappa0, alpha}; generalized_log_laplace {kappa0,
/// alpha, beta}; log_normal {kappa0, sigma}; piecewise_linear {kappa0,
/// kappa1, delta}.
struct UtilityConfig {
  UtilityFunction utility;
  std::optional<std::pair<double, double>> quality_range;
};

UtilityConfig utility_from_json(const nlohmann::json& doc);
UtilityConfig load_utility_config(const std::string& path);
nlohmann::json utility_to_json(const UtilityFunction& u);

nlohmann::json report_to_json(const ScoreReport& report);
nlohmann::json plan_to_json(const SamplePlan& plan);
SamplePlan plan_from_json(const nlohmann::json& doc);
SamplePlan load_plan(const std::string& path);

}  // namespace rtu
