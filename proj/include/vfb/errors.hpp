#pragma once

#include <stdexcept>
#include <string>

namespace vfb {

/// Two points (or a point and a set) of different ambient dimension met.
class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                              ", got " + std::to_string(actual)) {}
};

/// A set, operator, or schedule descriptor that cannot describe a valid object.
class InvalidDescriptor : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Hausdorff distance requested for a pair of image variants with no exact formula.
class UnsupportedPairing : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameter preconditions violated. `condition()` names the failing condition.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string condition, const std::string& detail)
      : std::runtime_error(condition + ": " + detail), condition_(std::move(condition)) {}

  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

/// A property checker needs the fixed-point set of the map but none was declared.
class MissingFixedPoints : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A probe offered as a member of the solution set failed certification.
class UncertifiedProbe : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A tabulated parameter sequence was read past its last entry.
class ScheduleExhausted : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// An iterate became non-finite.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reading a configuration or writing an artifact failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vfb
