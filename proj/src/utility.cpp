#include "rtu/utility.hpp"

#include <cmath>
#include <sstream>

#include "rtu/errors.hpp"

namespace rtu {

UtilityFunction UtilityFunction::step() { return UtilityFunction(Family::Step, {}); }

UtilityFunction UtilityFunction::linear_money(double r, double cost_fixed, double cost_rate) {
  if (!(r > 0.0) || cost_fixed < 0.0 || cost_rate < 0.0) {
    throw BadParameters("linear_money: need r > 0 and nonnegative costs");
  }
  return UtilityFunction(Family::LinearMoney, {r, cost_fixed, cost_rate});
}

UtilityFunction UtilityFunction::survival_of(CaptimeDist k) {
  UtilityFunction u(Family::Survival, {});
  u.survival_ = std::move(k);
  return u;
}

UtilityFunction UtilityFunction::uniform(double kappa0) {
  if (!(kappa0 > 0.0)) throw BadParameters("uniform utility: kappa0 must be positive");
  return UtilityFunction(Family::Uniform, {kappa0});
}

UtilityFunction UtilityFunction::exponential(double kappa0) {
  if (!(kappa0 > 0.0)) throw BadParameters("exponential utility: kappa0 must be positive");
  return UtilityFunction(Family::Exponential, {kappa0});
}

UtilityFunction UtilityFunction::pareto(double kappa0, double alpha) {
  if (!(kappa0 > 0.0) || !(alpha > 0.0)) throw BadParameters("pareto utility: parameters must be positive");
  return UtilityFunction(Family::Pareto, {kappa0, alpha});
}

UtilityFunction UtilityFunction::log_laplace(double kappa0, double alpha) {
  if (!(kappa0 > 0.0) || !(alpha > 0.0)) throw BadParameters("log_laplace utility: parameters must be positive");
  return UtilityFunction(Family::LogLaplace, {kappa0, alpha});
}

UtilityFunction UtilityFunction::generalized_log_laplace(double kappa0, double alpha, double beta) {
  if (!(kappa0 > 0.0) || !(alpha > 0.0) || !(beta > 0.0)) {
    throw BadParameters("generalized_log_laplace utility: parameters must be positive");
  }
  return UtilityFunction(Family::GeneralizedLogLaplace, {kappa0, alpha, beta});
}

UtilityFunction UtilityFunction::log_normal(double kappa0, double sigma) {
  if (!(kappa0 > 0.0) || !(sigma > 0.0)) throw BadParameters("log_normal utility: parameters must be positive");
  return UtilityFunction(Family::LogNormal, {kappa0, sigma});
}

UtilityFunction UtilityFunction::piecewise_linear(double kappa0, double kappa1, double delta) {
  if (!(kappa0 > 0.0) || !(kappa1 > 0.0) || kappa1 >= kappa0 || delta < 0.0 || delta > 1.0) {
    throw BadParameters("piecewise_linear utility: need 0 < kappa1 < kappa0 and delta in [0, 1]");
  }
  return UtilityFunction(Family::PiecewiseLinear, {kappa0, kappa1, delta});
}

UtilityFunction UtilityFunction::with_affine(double c1, double c0) const {
  if (!(c1 > 0.0)) throw BadParameters("with_affine: c1 must be positive");
  UtilityFunction u = *this;
  u.c1_ = c1;
  u.c0_ = c0;
  return u;
}

const CaptimeDist& UtilityFunction::survival_dist() const {
  if (!survival_) throw BadParameters("survival_dist: not a survival utility");
  return *survival_;
}

double UtilityFunction::evaluate_normalized(double t, double kappa) const {
  if (t < 0.0) throw BadParameters("evaluate: t must be >= 0");
  if (std::isinf(t)) return 0.0;
  const auto& q = params_;
  switch (family_) {
    case Family::Step:
      return t < kappa ? 1.0 : 0.0;
    case Family::LinearMoney: {
      if (std::isinf(kappa)) throw BadParameters("linear_money: requires a finite captime");
      if (t >= kappa) return 0.0;
      const double r = q[0], rate = q[2];
      return (r + rate * (kappa - t)) / (r + rate * kappa);
    }
    case Family::Survival:
      return 1.0 - survival_->cdf(t);
    case Family::Uniform:
      return t >= q[0] ? 0.0 : 1.0 - t / q[0];
    case Family::Exponential:
      return std::exp(-t / q[0]);
    case Family::Pareto:
      return t <= q[0] ? 1.0 : std::pow(q[0] / t, q[1]);
    case Family::LogLaplace:
      return t < q[0] ? 1.0 - 0.5 * std::pow(t / q[0], q[1])
                      : 0.5 * std::pow(q[0] / t, q[1]);
    case Family::GeneralizedLogLaplace: {
      const double alpha = q[1], beta = q[2];
      return t < q[0] ? 1.0 - alpha / (alpha + beta) * std::pow(t / q[0], beta)
                      : beta / (alpha + beta) * std::pow(q[0] / t, alpha);
    }
    case Family::LogNormal:
      if (t == 0.0) return 1.0;
      return 0.5 - 0.5 * std::erf(std::log(t / q[0]) / (std::sqrt(2.0) * q[1]));
    case Family::PiecewiseLinear: {
      const double kappa0 = q[0], kappa1 = q[1], delta = q[2];
      if (t <= kappa1) return 1.0 - delta * t / kappa1;
      if (t < kappa0) return (1.0 - delta) * (kappa0 - t) / (kappa0 - kappa1);
      return 0.0;
    }
  }
  return 0.0;
}

double UtilityFunction::evaluate(double t, double kappa) const {
  return c1_ * evaluate_normalized(t, kappa) + c0_;
}

double UtilityFunction::p(double t, double kappa) const {
  if (t >= kappa) return 0.0;
  return evaluate_normalized(t, kappa);
}

UtilityFunction::InverseResult UtilityFunction::inverse(double v) const {
  if (!(v > 0.0 && v <= 1.0)) throw BadParameters("inverse: v must be in (0, 1]");
  const auto& q = params_;
  switch (family_) {
    case Family::Step:
      throw NotInvertible("step utility has no inverse");
    case Family::LinearMoney:
      throw NotInvertible("linear_money utility needs an explicit captime; no one-argument inverse");
    case Family::Uniform:
      return {q[0] * (1.0 - v), false};
    case Family::Exponential:
      return {-q[0] * std::log(v), false};
    case Family::Pareto:
      if (v == 1.0) return {q[0], true};
      return {q[0] * std::pow(v, -1.0 / q[1]), false};
    case Family::LogLaplace:
      if (v >= 0.5) return {q[0] * std::pow(2.0 * (1.0 - v), 1.0 / q[1]), false};
      return {q[0] * std::pow(2.0 * v, -1.0 / q[1]), false};
    case Family::GeneralizedLogLaplace: {
      const double alpha = q[1], beta = q[2];
      const double at_kappa0 = beta / (alpha + beta);
      if (v >= at_kappa0) return {q[0] * std::pow((1.0 - v) * (alpha + beta) / alpha, 1.0 / beta), false};
      return {q[0] * std::pow(beta / ((alpha + beta) * v), 1.0 / alpha), false};
    }
    case Family::LogNormal:
      if (v == 1.0) return {0.0, false};
      return {q[0] * std::exp(std::sqrt(2.0) * q[1] * erf_inv(1.0 - 2.0 * v)), false};
    case Family::PiecewiseLinear: {
      const double kappa0 = q[0], kappa1 = q[1], delta = q[2];
      if (delta == 0.0 && v == 1.0) return {kappa1, true};
      if (v >= 1.0 - delta) return {kappa1 * (1.0 - v) / delta, false};
      return {kappa0 - v * (kappa0 - kappa1) / (1.0 - delta), false};
    }
    case Family::Survival: {
      const CaptimeDist& k = *survival_;
      const auto surv = [&k](double t) { return 1.0 - k.cdf(t); };
      double hi = k.quantile(1.0 - 0.5 * v);
      if (std::isinf(hi)) {
        hi = 1.0;
        while (surv(hi) >= v) hi *= 2.0;
      }
      if (surv(hi) >= v) {
        // v == 1 and survival stays 1 up to hi; extend to the right end
        while (surv(hi) >= v && hi < 1e300) hi *= 2.0;
        if (surv(hi) >= v) return {kInfinity, true};
      }
      const double t = bisect_decreasing(surv, v, 0.0, hi);
      return {t, v == 1.0 && t > 0.0};
    }
  }
  throw NotInvertible("unsupported family");
}

std::string UtilityFunction::tag() const {
  static const char* names[] = {"step", "linear_money", "survival", "uniform", "exponential",
                                "pareto", "log_laplace", "generalized_log_laplace", "log_normal",
                                "piecewise_linear"};
  std::ostringstream os;
  os << names[static_cast<int>(family_)];
  os << '(';
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (i) os << ',';
    os << params_[i];
  }
  if (survival_) {
    os << "K:" << static_cast<int>(survival_->family());
    for (double p : survival_->params()) os << ',' << p;
  }
  os << ")|c1=" << c1_ << ",c0=" << c0_;
  return os.str();
}

std::vector<double> UtilityFunction::breakpoints(double kappa) const {
  switch (family_) {
    case Family::Step:
    case Family::LinearMoney:
      return std::isinf(kappa) ? std::vector<double>{} : std::vector<double>{kappa};
    case Family::Survival:
      if (survival_->family() == CaptimeDist::Family::Dirac) return {survival_->params()[0]};
      if (survival_->family() == CaptimeDist::Family::PiecewiseTail) {
        return {survival_->params()[1], survival_->params()[0]};
      }
      if (!survival_->params().empty()) return {survival_->params()[0]};
      return {};
    case Family::PiecewiseLinear:
      return {params_[1], params_[0]};
    default:
      return {params_[0]};
  }
}

// ---------------------------------------------------------------------------

QualityUtility::QualityUtility(UtilityFunction base, double q0, double q1)
    : QualityUtility(std::move(base), q0, q1,
                     [q0, q1](double q) { return (q - q0) / (q1 - q0); }) {}

QualityUtility::QualityUtility(UtilityFunction base, double q0, double q1,
                               std::function<double(double)> weight)
    : base_(std::move(base)), q0_(q0), q1_(q1), weight_(std::move(weight)) {
  if (!(q1_ > q0_)) throw BadParameters("quality utility: need q1 > q0");
  if (std::abs(weight_(q0_)) > 1e-12 || std::abs(weight_(q1_) - 1.0) > 1e-12) {
    throw BadParameters("quality utility: weight must map q0 -> 0 and q1 -> 1");
  }
}

double QualityUtility::weight(double q) const {
  if (q < q0_ || q > q1_) throw QualityOutOfRange("quality outside [q0, q1]");
  return weight_(q);
}

double QualityUtility::evaluate(double t, double q, double kappa) const {
  return base_.c1() * weight(q) * base_.p(t, kappa) + base_.c0();
}

}  // namespace rtu
