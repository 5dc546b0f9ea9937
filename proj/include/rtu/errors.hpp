#pragma once

#include <stdexcept>
#include <string>

namespace rtu {

struct BadParameters : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotInvertible : std::domain_error {
  using std::domain_error::domain_error;
};

struct NonDiscretizable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureNotConverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MixedCaptimes : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptyInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IncomparableReports : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct QualityOutOfRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotConverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownConstraintSet : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoSuchInstance : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rtu
