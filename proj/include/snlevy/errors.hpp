#pragma once

#include <stdexcept>
#include <string>

namespace snlevy {

/// Thrown when a numeric routine cannot certify its own result
/// (e.g. contour inversion estimates at N and 2N nodes disagree).
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, double first, double second)
      : std::runtime_error(what), first_estimate(first), second_estimate(second) {}
  double first_estimate;
  double second_estimate;
};

/// Operation is well defined mathematically but not supported by the
/// chosen evaluation route (e.g. W'' through numeric inversion).
class UnsupportedOperation : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace snlevy
