#pragma once

#include <functional>
#include <optional>
#include <string>

#include "rtu/distributions.hpp"
#include "rtu/math.hpp"

namespace rtu {

/// A utility function u(t, kappa) = c1 * p(t, kappa) + c0, where p is the
/// normalized form mapping into [0, 1]. Families derived from a captime
/// distribution (Uniform .. PiecewiseLinear, Survival) are one-argument: they
/// embed K as u(t) = 1 - F_K(t) and ignore the explicit kappa. Step and
/// LinearMoney take kappa explicitly.
class UtilityFunction {
 public:
  enum class Family {
    Step,
    LinearMoney,
    Survival,
    Uniform,
    Exponential,
    Pareto,
    LogLaplace,
    GeneralizedLogLaplace,
    LogNormal,
    PiecewiseLinear,
  };

  static UtilityFunction step();
  static UtilityFunction linear_money(double r, double cost_fixed, double cost_rate);
  static UtilityFunction survival_of(CaptimeDist k);
  static UtilityFunction uniform(double kappa0);
  static UtilityFunction exponential(double kappa0);
  static UtilityFunction pareto(double kappa0, double alpha);
  static UtilityFunction log_laplace(double kappa0, double alpha);
  static UtilityFunction generalized_log_laplace(double kappa0, double alpha, double beta);
  static UtilityFunction log_normal(double kappa0, double sigma);
  static UtilityFunction piecewise_linear(double kappa0, double kappa1, double delta);

  /// Same family with an affine rescaling; requires c1 > 0.
  UtilityFunction with_affine(double c1, double c0) const;

  Family family() const { return family_; }
  double c1() const { return c1_; }
  double c0() const { return c0_; }
  bool normalized() const { return c1_ == 1.0 && c0_ == 0.0; }
  bool depends_on_kappa() const {
    return family_ == Family::Step || family_ == Family::LinearMoney;
  }

  /// u(t, kappa), affine constants applied. u(infinity, .) = c0.
  double evaluate(double t, double kappa = kInfinity) const;

  /// Normalized value in [0, 1], ignoring c1/c0.
  double evaluate_normalized(double t, double kappa = kInfinity) const;

  struct InverseResult {
    double t = 0.0;
    bool flat_region = false;  // v = 1 hit a flat head; t is the largest maximizer
  };

  /// Largest t with normalized u(t) >= v, for 0 < v <= 1 (right-continuous
  /// generalized inverse). Throws NotInvertible for Step and LinearMoney.
  InverseResult inverse(double v) const;

  /// The fundamental utility of the preference representation: normalized
  /// u truncated to 0 at t >= kappa.
  double p(double t, double kappa) const;

  /// Stable identifier of family + parameters + affine constants, used to
  /// reject rankings across different utilities.
  std::string tag() const;

  /// Points where u(., kappa) is non-smooth, for piecewise quadrature.
  std::vector<double> breakpoints(double kappa = kInfinity) const;

  const std::vector<double>& params() const { return params_; }
  const CaptimeDist& survival_dist() const;

 private:
  UtilityFunction(Family f, std::vector<double> params)
      : family_(f), params_(std::move(params)) {}
  Family family_;
  std::vector<double> params_;
  std::optional<CaptimeDist> survival_;
  double c1_ = 1.0;
  double c0_ = 0.0;
};

/// Utility over (runtime, quality) pairs: u(t, q, kappa) =
/// c1 * w(q) * p(t, kappa) + c0 with w monotone from w(q0) = 0 to w(q1) = 1.
/// The product factorization is a modeling choice; the representation theorem
/// constrains shape only.
class QualityUtility {
 public:
  /// Linear quality weight w(q) = (q - q0) / (q1 - q0).
  QualityUtility(UtilityFunction base, double q0, double q1);

  /// Custom monotone weight mapping [q0, q1] to [0, 1].
  QualityUtility(UtilityFunction base, double q0, double q1,
                 std::function<double(double)> weight);

  double q0() const { return q0_; }
  double q1() const { return q1_; }
  const UtilityFunction& base() const { return base_; }

  double weight(double q) const;

  /// Throws QualityOutOfRange for q outside [q0, q1].
  double evaluate(double t, double q, double kappa = kInfinity) const;

 private:
  UtilityFunction base_;
  double q0_, q1_;
  std::function<double(double)> weight_;
};

}  // namespace rtu
