#include "rtu/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rtu/errors.hpp"

namespace rtu {

namespace {

constexpr const char* kRunlogHeader =
    "algorithm,instance,seed,runtime_seconds,censored,captime_seconds";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_seconds(const std::string& s, std::size_t lineno) {
  if (s == "inf") return kInfinity;
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || v < 0.0 || std::isnan(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(lineno) + ": bad time value `" + s + "`");
  }
}

bool parse_bool(const std::string& s, std::size_t lineno) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ParseError("line " + std::to_string(lineno) + ": bad boolean `" + s + "`");
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::string format_seconds(double t) {
  if (std::isinf(t)) return "inf";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(9);
  os << t;
  return os.str();
}

std::vector<RunRow> read_runlog(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("line 1: empty run log");
  line = strip_cr(line);
  bool with_quality = false;
  if (line == std::string(kRunlogHeader) + ",quality") {
    with_quality = true;
  } else if (line != kRunlogHeader) {
    throw ParseError("line 1: expected header `" + std::string(kRunlogHeader) + "`, got `" +
                     line + "`");
  }
  std::vector<RunRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    const std::size_t expected = with_quality ? 7 : 6;
    if (f.size() != expected) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " +
                       std::to_string(expected) + " fields, got " + std::to_string(f.size()));
    }
    RunRow row;
    row.algorithm = f[0];
    row.instance = f[1];
    try {
      row.seed = std::stoull(f[2]);
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(lineno) + ": bad seed `" + f[2] + "`");
    }
    row.runtime_seconds = parse_seconds(f[3], lineno);
    row.censored = parse_bool(f[4], lineno);
    row.captime_seconds = parse_seconds(f[5], lineno);
    if (with_quality) row.quality = parse_seconds(f[6], lineno);
    if (row.censored && row.runtime_seconds != row.captime_seconds) {
      throw ParseError("line " + std::to_string(lineno) +
                       ": censored row must have runtime_seconds = captime_seconds");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RunRow> read_runlog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open run log `" + path + "`");
  return read_runlog(in);
}

void write_runlog(std::ostream& out, const std::vector<RunRow>& rows) {
  bool with_quality = false;
  for (const RunRow& r : rows) with_quality = with_quality || r.quality.has_value();
  out << kRunlogHeader;
  if (with_quality) out << ",quality";
  out << '\n';
  for (const RunRow& r : rows) {
    out << r.algorithm << ',' << r.instance << ',' << r.seed << ','
        << format_seconds(r.runtime_seconds) << ',' << (r.censored ? "true" : "false") << ','
        << format_seconds(r.captime_seconds);
    if (with_quality) out << ',' << format_seconds(r.quality.value_or(1.0));
    out << '\n';
  }
}

namespace {

double param(const nlohmann::json& params, const std::string& key) {
  if (!params.contains(key)) throw ParseError("utility config: missing param `" + key + "`");
  return params.at(key).get<double>();
}

}  // namespace

UtilityConfig utility_from_json(const nlohmann::json& doc) {
  try {
    const std::string family = doc.at("family").get<std::string>();
    const nlohmann::json params = doc.value("params", nlohmann::json::object());
    UtilityFunction u = [&]() {
      if (family == "step") return UtilityFunction::step();
      if (family == "linear_money") {
        return UtilityFunction::linear_money(param(params, "r"), param(params, "cost_fixed"),
                                             param(params, "cost_rate"));
      }
      if (family == "uniform") return UtilityFunction::uniform(param(params, "kappa0"));
      if (family == "exponential") return UtilityFunction::exponential(param(params, "kappa0"));
      if (family == "pareto") {
        return UtilityFunction::pareto(param(params, "kappa0"), param(params, "alpha"));
      }
      if (family == "log_laplace") {
        return UtilityFunction::log_laplace(param(params, "kappa0"), param(params, "alpha"));
      }
      if (family == "generalized_log_laplace") {
        return UtilityFunction::generalized_log_laplace(
            param(params, "kappa0"), param(params, "alpha"), param(params, "beta"));
      }
      if (family == "log_normal") {
        return UtilityFunction::log_normal(param(params, "kappa0"), param(params, "sigma"));
      }
      if (family == "piecewise_linear") {
        return UtilityFunction::piecewise_linear(param(params, "kappa0"),
                                                 param(params, "kappa1"), param(params, "delta"));
      }
      throw ParseError("utility config: unknown family `" + family + "`");
    }();
    const double c1 = doc.value("c1", 1.0);
    const double c0 = doc.value("c0", 0.0);
    if (c1 != 1.0 || c0 != 0.0) u = u.with_affine(c1, c0);
    UtilityConfig config{std::move(u), std::nullopt};
    if (doc.contains("quality")) {
      const nlohmann::json& q = doc.at("quality");
      config.quality_range = {q.at("q0").get<double>(), q.at("q1").get<double>()};
    }
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("utility config: ") + e.what());
  }
}

UtilityConfig load_utility_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open utility config `" + path + "`");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("utility config `" + path + "`: " + e.what());
  }
  return utility_from_json(doc);
}

nlohmann::json utility_to_json(const UtilityFunction& u) {
  using Family = UtilityFunction::Family;
  nlohmann::json doc;
  nlohmann::json params = nlohmann::json::object();
  const std::vector<double>& q = u.params();
  switch (u.family()) {
    case Family::Step:
      doc["family"] = "step";
      break;
    case Family::LinearMoney:
      doc["family"] = "linear_money";
      params["r"] = q[0];
      params["cost_fixed"] = q[1];
      params["cost_rate"] = q[2];
      break;
    case Family::Uniform:
      doc["family"] = "uniform";
      params["kappa0"] = q[0];
      break;
    case Family::Exponential:
      doc["family"] = "exponential";
      params["kappa0"] = q[0];
      break;
    case Family::Pareto:
      doc["family"] = "pareto";
      params["kappa0"] = q[0];
      params["alpha"] = q[1];
      break;
    case Family::LogLaplace:
      doc["family"] = "log_laplace";
      params["kappa0"] = q[0];
      params["alpha"] = q[1];
      break;
    case Family::GeneralizedLogLaplace:
      doc["family"] = "generalized_log_laplace";
      params["kappa0"] = q[0];
      params["alpha"] = q[1];
      params["beta"] = q[2];
      break;
    case Family::LogNormal:
      doc["family"] = "log_normal";
      params["kappa0"] = q[0];
      params["sigma"] = q[1];
      break;
    case Family::PiecewiseLinear:
      doc["family"] = "piecewise_linear";
      params["kappa0"] = q[0];
      params["kappa1"] = q[1];
      params["delta"] = q[2];
      break;
    case Family::Survival:
      throw BadParameters("utility_to_json: survival utilities have no config form");
  }
  doc["params"] = params;
  doc["c1"] = u.c1();
  doc["c0"] = u.c0();
  return doc;
}

nlohmann::json report_to_json(const ScoreReport& report) {
  nlohmann::json doc;
  doc["name"] = report.name;
  doc["score"] = report.score;
  doc["method"] = report.method;
  if (report.ci) {
    doc["ci_low"] = report.ci->low;
    doc["ci_high"] = report.ci->high;
    doc["confidence"] = report.ci->confidence;
  }
  doc["n"] = report.n_samples;
  doc["total_compute_seconds"] = report.total_compute;
  return doc;
}

nlohmann::json plan_to_json(const SamplePlan& plan) {
  nlohmann::json doc;
  doc["epsilon"] = plan.epsilon;
  doc["delta"] = plan.delta;
  doc["m"] = plan.m;
  doc["captime_seconds"] = plan.captime;
  if (plan.lower_bound_captime) {
    doc["lower_bound_captime_seconds"] = *plan.lower_bound_captime;
  }
  doc["worst_case_compute_seconds"] = plan.worst_case_compute;
  doc["utility_tag"] = plan.utility_tag;
  return doc;
}

SamplePlan plan_from_json(const nlohmann::json& doc) {
  try {
    SamplePlan plan;
    plan.epsilon = doc.at("epsilon").get<double>();
    plan.delta = doc.at("delta").get<double>();
    plan.m = doc.at("m").get<std::size_t>();
    plan.captime = doc.at("captime_seconds").get<double>();
    if (doc.contains("lower_bound_captime_seconds")) {
      plan.lower_bound_captime = doc.at("lower_bound_captime_seconds").get<double>();
    }
    plan.worst_case_compute = doc.at("worst_case_compute_seconds").get<double>();
    plan.utility_tag = doc.value("utility_tag", std::string{});
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("sample plan: ") + e.what());
  }
}

SamplePlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open plan `" + path + "`");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("plan `" + path + "`: " + e.what());
  }
  return plan_from_json(doc);
}

}  // namespace rtu
