#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <variant>

#include <Eigen/Dense>

namespace vfb {

/// An element of the Hilbert space R^d with the standard dot product.
using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

Point make_point(std::initializer_list<double> coords);

/// Throws DimensionMismatch unless both points live in the same space.
void require_same_dim(const Point& x, const Point& y);

/// Throws InvalidDescriptor if any coordinate is NaN or infinite.
void require_finite(const Point& x, const char* what = "point");

bool is_finite(const Point& x) noexcept;

double inner(const Point& x, const Point& y);
double norm(const Point& x);
double distance(const Point& x, const Point& y);

// ---------------------------------------------------------------------------
// Closed convex sets with closed-form projections.

struct WholeSpace {};

struct Box {
  Point lower;
  Point upper;
};

struct Ball {
  Point center;
  double radius;
};

/// { y : <normal, y> <= offset }
struct HalfSpace {
  Point normal;
  double offset;
};

/// anchor + span(basis columns); the columns must be orthonormal.
struct AffineSet {
  Point anchor;
  Matrix basis;
};

class ConvexSet {
 public:
  using Variant = std::variant<WholeSpace, Box, Ball, HalfSpace, AffineSet>;

  ConvexSet() : shape_(WholeSpace{}) {}

  static ConvexSet whole_space() { return ConvexSet(); }
  static ConvexSet box(Point lower, Point upper);
  static ConvexSet ball(Point center, double radius);
  static ConvexSet half_space(Point normal, double offset);
  static ConvexSet affine(Point anchor, Matrix basis);

  const Variant& shape() const noexcept { return shape_; }

  /// Ambient dimension, or nullopt for the dimension-free whole space.
  std::optional<std::size_t> dim() const;

  bool contains(const Point& x, double tol = 1e-12) const;

 private:
  explicit ConvexSet(Variant v) : shape_(std::move(v)) {}
  Variant shape_;
};

/// Nearest point of K to x.
Point project(const ConvexSet& K, const Point& x);

// ---------------------------------------------------------------------------
// Two elementary Hilbert-space inequalities, evaluated at concrete points.

struct InequalitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct HilbertIdentityAudit {
  /// ||x - y||^2 <= ||x||^2 + 2<y, x + y>. Fails whenever 4<x,y> + ||y||^2 < 0.
  InequalitySides first_difference;
  /// ||x + y||^2 <= ||x||^2 + 2<y, x + y>, the subdifferential inequality.
  InequalitySides first_sum;
  /// ||l x + (1-l) y||^2 = l||x||^2 + (1-l)||y||^2 - l(1-l)||x - y||^2 (exact).
  InequalitySides second;
};

/// Throws InvalidDescriptor unless 0 < lambda < 1.
HilbertIdentityAudit hilbert_identity_check(const Point& x, const Point& y, double lambda,
                                            double tol = 1e-10);

}  // namespace vfb
