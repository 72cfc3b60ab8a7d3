#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vfb/audit.hpp"
#include "vfb/hilbert.hpp"

namespace vfb {

/// Declared constants of a single-valued operator. Any may be absent.
struct Moduli {
  std::optional<double> lipschitz;                    ///< L
  std::optional<double> strong_monotonicity;          ///< k
  std::optional<double> inverse_strong_monotonicity;  ///< alpha
  std::optional<double> strong_positivity;            ///< not consumed by any algorithm
};

/// A single-valued operator H -> H together with its declared moduli.
struct SingleOp {
  std::string name;
  std::function<Point(const Point&)> apply;
  Moduli moduli;

  Point operator()(const Point& x) const { return apply(x); }
};

namespace ops {

SingleOp zero();
SingleOp identity();
/// x -> c x
SingleOp scaled(double c);
/// x -> c x + v. Lipschitz with constant |c|.
SingleOp affine(double c, Point v);
/// x -> x - a. 1-inverse strongly monotone, 1-strongly monotone, 1-Lipschitz.
SingleOp shifted_identity(Point a);
/// x -> Q x for symmetric positive semidefinite Q (the gradient of x'Qx / 2).
SingleOp linear(Matrix Q);

}  // namespace ops

// ---------------------------------------------------------------------------
// Maximal monotone operators with closed-form resolvents (I + lambda A)^{-1}.

struct NormalCone {
  ConvexSet set;
};

/// w |t| on one coordinate; resolvent is soft-thresholding by lambda w.
struct AbsoluteValue {
  double weight;
};

/// (c/2) t^2 on one coordinate, i.e. the operator t -> c t; resolvent t / (1 + lambda c).
struct Quadratic {
  double coef;
};

using ScalarTerm = std::variant<AbsoluteValue, Quadratic>;

/// Subdifferential of a coordinate-separable convex function. A single term is
/// applied to every coordinate; otherwise there must be one term per coordinate.
struct SeparableSubdifferential {
  std::vector<ScalarTerm> terms;
};

struct ZeroOperator {};

class MaxMonotone {
 public:
  using Variant = std::variant<NormalCone, SeparableSubdifferential, ZeroOperator>;

  MaxMonotone() : shape_(ZeroOperator{}) {}

  static MaxMonotone zero() { return MaxMonotone(); }
  static MaxMonotone normal_cone(ConvexSet set) { return MaxMonotone(NormalCone{std::move(set)}); }
  static MaxMonotone separable(std::vector<ScalarTerm> terms);

  const Variant& shape() const noexcept { return shape_; }
  std::string describe() const;

 private:
  explicit MaxMonotone(Variant v) : shape_(std::move(v)) {}
  Variant shape_;
};

/// The unique p with x in p + lambda A(p).
Point resolvent(const MaxMonotone& A, double lambda, const Point& x);

/// resolvent(A, lambda, x - lambda B(x)).
Point forward_backward_step(const MaxMonotone& A, const SingleOp& B, double lambda, const Point& x);

/// ||x - forward_backward_step(A, B, lambda, x)||; zero exactly on the zeros of A + B.
double fixed_point_residual(const MaxMonotone& A, const SingleOp& B, double lambda, const Point& x);

// ---------------------------------------------------------------------------
// Sample-based certification of operator moduli and of two inequalities the
// convergence argument relies on.

using PointPair = std::pair<Point, Point>;

/// <Bx - By, x - y> >= alpha ||Bx - By||^2
AuditRecord check_inverse_strongly_monotone(const SingleOp& B, double alpha,
                                            std::span<const PointPair> pairs,
                                            double tol = kAuditTolerance);

/// <Bx - By, x - y> >= k ||x - y||^2
AuditRecord check_strongly_monotone(const SingleOp& B, double k, std::span<const PointPair> pairs,
                                    double tol = kAuditTolerance);

/// ||Bx - By|| <= L ||x - y||
AuditRecord check_lipschitz(const SingleOp& B, double L, std::span<const PointPair> pairs,
                            double tol = kAuditTolerance);

/// ||(I - theta B)x - (I - theta B)y||^2 <= ||x - y||^2 + theta (theta - 2 alpha) ||Bx - By||^2.
/// Marked vacuous (but still evaluated) when theta lies outside [0, 2 alpha].
AuditRecord check_forward_nonexpansive(const SingleOp& B, double alpha, double theta,
                                       std::span<const PointPair> pairs,
                                       double tol = kAuditTolerance);

/// ||(I - t eta F)x - (I - t eta F)y|| <= (1 - t tau) ||x - y|| for a k-strongly
/// monotone, L-Lipschitz F. Throws ConfigError unless 0 < eta < 2k/L^2,
/// tau = eta (k - L^2 eta / 2) and 0 < t < min(1, 1/tau).
AuditRecord check_wang_contraction(const SingleOp& F, double eta, double tau, double t,
                                   std::span<const PointPair> pairs,
                                   double tol = kAuditTolerance);

/// ||Jx - Jy||^2 <= <Jx - Jy, x - y>
AuditRecord check_firmly_nonexpansive(const std::function<Point(const Point&)>& J,
                                      std::span<const PointPair> pairs,
                                      double tol = kAuditTolerance);

}  // namespace vfb
