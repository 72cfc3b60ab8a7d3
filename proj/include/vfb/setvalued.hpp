#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vfb/audit.hpp"
#include "vfb/hilbert.hpp"

namespace vfb {

// ---------------------------------------------------------------------------
// Values of multivalued maps. Each variant is nonempty, closed and bounded, and
// supports exact distance, nearest-point and Hausdorff queries.

struct Singleton {
  Point point;
};

struct FiniteSet {
  std::vector<Point> points;
};

struct BallImage {
  Point center;
  double radius;
};

class SetImage {
 public:
  using Variant = std::variant<Singleton, FiniteSet, BallImage>;

  static SetImage singleton(Point p);
  static SetImage finite(std::vector<Point> points);
  static SetImage ball(Point center, double radius);

  const Variant& shape() const noexcept { return shape_; }
  std::size_t dim() const;

  bool contains(const Point& x, double tol = 1e-12) const;

  /// True when the image is exactly {p} (a singleton, a one-point set, or a
  /// zero-radius ball) up to `tol`.
  bool is_singleton_at(const Point& p, double tol = 1e-12) const;

 private:
  explicit SetImage(Variant v) : shape_(std::move(v)) {}
  Variant shape_;
};

/// inf over s in S of ||x - s||.
double distance_to_set(const Point& x, const SetImage& S);

/// Nearest point of S to x; ties in a finite set go to the lowest index.
Point nearest_point(const Point& x, const SetImage& S);

/// Deterministic representative: the point, the first listed point, or the center.
Point canonical_point(const SetImage& S);

/// Hausdorff distance. Exact for finite/singleton pairs and for ball/ball or
/// ball/singleton pairs; throws UnsupportedPairing for a finite set against a ball.
double hausdorff(const SetImage& A, const SetImage& B);

// ---------------------------------------------------------------------------
// Multivalued maps.

struct Demicontractive {
  double beta;
};
struct QuasiNonexpansive {};
struct StrictlyPseudocontractive {
  double k;
};
struct Nonexpansive {};

using OperatorClass =
    std::variant<Demicontractive, QuasiNonexpansive, StrictlyPseudocontractive, Nonexpansive>;

std::string describe(const OperatorClass& c);

enum class SelectionRule {
  Metric,           ///< nearest point of T(x) to x
  FirstEnumerated,  ///< canonical representative of T(x)
};

std::string to_string(SelectionRule rule);
SelectionRule selection_rule_from_string(const std::string& name);

struct MultiMap {
  std::string name;
  std::function<SetImage(const Point&)> image;
  OperatorClass declared_class = QuasiNonexpansive{};
  std::vector<Point> known_fixed_points;

  SetImage operator()(const Point& x) const { return image(x); }
};

Point select(const MultiMap& T, SelectionRule rule, const Point& x);

/// True when T(q) = {q} for every declared fixed point q.
bool fixes_declared_points_strictly(const MultiMap& T, double tol = 1e-12);

/// H(T x, T p)^2 <= ||x - p||^2 + beta d(x, T x)^2 over samples x and declared p.
AuditRecord check_demicontractive(const MultiMap& T, double beta, std::span<const Point> samples,
                                  double tol = kAuditTolerance);

/// H(T x, T p) <= ||x - p|| over samples x and declared p.
AuditRecord check_quasi_nonexpansive(const MultiMap& T, std::span<const Point> samples,
                                     double tol = kAuditTolerance);

/// H(T x, T y) <= ||x - y|| over sample pairs.
AuditRecord check_nonexpansive(const MultiMap& T, std::span<const std::pair<Point, Point>> pairs,
                               double tol = kAuditTolerance);

/// H(T x, T y)^2 <= ||x - y||^2 + k ||(x - u) - (y - v)||^2 with u, v the metric
/// selections. Accepts k in (0, 1]; k = 1 is the plain pseudocontractive bound.
AuditRecord check_strictly_pseudocontractive(const MultiMap& T, double k,
                                             std::span<const std::pair<Point, Point>> pairs,
                                             double tol = kAuditTolerance);

}  // namespace vfb
