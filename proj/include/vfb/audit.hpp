#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "vfb/hilbert.hpp"

namespace vfb {

/// Default absolute tolerance for every inequality audit.
inline constexpr double kAuditTolerance = 1e-10;

/// Result of a sample-based certification of an inequality `lhs <= rhs`.
///
/// A passing record certifies only that no violation was found on the samples
/// that were checked. Slack is `rhs - lhs`; the worst (smallest) slack and the
/// pair of points that produced it are kept for diagnostics.
struct AuditRecord {
  std::string property;
  double tolerance = kAuditTolerance;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  double worst_lhs = std::numeric_limits<double>::quiet_NaN();
  double worst_rhs = std::numeric_limits<double>::quiet_NaN();
  std::optional<std::pair<Point, Point>> witness;
  /// Set when the hypotheses of the inequality do not hold, so a pass proves nothing.
  bool vacuous = false;

  AuditRecord() = default;
  explicit AuditRecord(std::string name, double tol = kAuditTolerance)
      : property(std::move(name)), tolerance(tol) {}

  bool passed() const noexcept { return violations == 0; }

  /// Records one evaluation; returns true when `lhs <= rhs + tolerance`.
  bool record(double lhs, double rhs, const Point& a, const Point& b) {
    ++checked;
    const double slack = rhs - lhs;
    const bool ok = lhs <= rhs + tolerance;
    if (!ok) ++violations;
    if (slack < worst_slack || !witness) {
      worst_slack = slack;
      worst_lhs = lhs;
      worst_rhs = rhs;
      witness = std::make_pair(a, b);
    }
    return ok;
  }

  void merge(const AuditRecord& other) {
    checked += other.checked;
    violations += other.violations;
    vacuous = vacuous || other.vacuous;
    if (other.witness && (!witness || other.worst_slack < worst_slack)) {
      worst_slack = other.worst_slack;
      worst_lhs = other.worst_lhs;
      worst_rhs = other.worst_rhs;
      witness = other.witness;
    }
  }
};

}  // namespace vfb
