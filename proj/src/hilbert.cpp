#include "vfb/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vfb/errors.hpp"

namespace vfb {

Point make_point(std::initializer_list<double> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p(i++) = c;
  return p;
}

void require_same_dim(const Point& x, const Point& y) {
  if (x.size() != y.size())
    throw DimensionMismatch(static_cast<std::size_t>(x.size()), static_cast<std::size_t>(y.size()));
}

bool is_finite(const Point& x) noexcept { return x.allFinite(); }

void require_finite(const Point& x, const char* what) {
  if (x.size() == 0) throw InvalidDescriptor(std::string(what) + " has dimension 0");
  if (!x.allFinite()) throw InvalidDescriptor(std::string(what) + " has a non-finite coordinate");
}

double inner(const Point& x, const Point& y) {
  require_same_dim(x, y);
  return x.dot(y);
}

double norm(const Point& x) {
  require_finite(x, "norm");
  return x.norm();
}

double distance(const Point& x, const Point& y) {
  require_same_dim(x, y);
  return (x - y).norm();
}

// ---------------------------------------------------------------------------

ConvexSet ConvexSet::box(Point lower, Point upper) {
  require_finite(lower, "box lower bound");
  require_finite(upper, "box upper bound");
  require_same_dim(lower, upper);
  if ((lower.array() > upper.array()).any())
    throw InvalidDescriptor("box requires lower <= upper componentwise");
  return ConvexSet(Box{std::move(lower), std::move(upper)});
}

ConvexSet ConvexSet::ball(Point center, double radius) {
  require_finite(center, "ball center");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InvalidDescriptor("ball radius must be positive and finite");
  return ConvexSet(Ball{std::move(center), radius});
}

ConvexSet ConvexSet::half_space(Point normal, double offset) {
  require_finite(normal, "half-space normal");
  if (!std::isfinite(offset)) throw InvalidDescriptor("half-space offset must be finite");
  if (normal.squaredNorm() == 0.0) throw InvalidDescriptor("half-space normal must be nonzero");
  return ConvexSet(HalfSpace{std::move(normal), offset});
}

ConvexSet ConvexSet::affine(Point anchor, Matrix basis) {
  require_finite(anchor, "affine anchor");
  if (basis.rows() != anchor.size())
    throw DimensionMismatch(static_cast<std::size_t>(anchor.size()),
                            static_cast<std::size_t>(basis.rows()));
  if (!basis.allFinite()) throw InvalidDescriptor("affine basis has a non-finite entry");
  if (basis.cols() > 0) {
    const Matrix gram = basis.transpose() * basis;
    if (!gram.isIdentity(1e-10)) throw InvalidDescriptor("affine basis must be orthonormal");
  }
  return ConvexSet(AffineSet{std::move(anchor), std::move(basis)});
}

std::optional<std::size_t> ConvexSet::dim() const {
  return std::visit(
      [](const auto& s) -> std::optional<std::size_t> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, WholeSpace>) {
          return std::nullopt;
        } else if constexpr (std::is_same_v<S, Box>) {
          return static_cast<std::size_t>(s.lower.size());
        } else if constexpr (std::is_same_v<S, Ball>) {
          return static_cast<std::size_t>(s.center.size());
        } else if constexpr (std::is_same_v<S, HalfSpace>) {
          return static_cast<std::size_t>(s.normal.size());
        } else {
          return static_cast<std::size_t>(s.anchor.size());
        }
      },
      shape_);
}

namespace {

void check_dim(const ConvexSet& K, const Point& x) {
  if (const auto d = K.dim(); d && *d != static_cast<std::size_t>(x.size()))
    throw DimensionMismatch(*d, static_cast<std::size_t>(x.size()));
}

}  // namespace

bool ConvexSet::contains(const Point& x, double tol) const {
  check_dim(*this, x);
  return (project(*this, x) - x).norm() <= tol;
}

Point project(const ConvexSet& K, const Point& x) {
  check_dim(K, x);
  return std::visit(
      [&x](const auto& s) -> Point {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, WholeSpace>) {
          return x;
        } else if constexpr (std::is_same_v<S, Box>) {
          return x.cwiseMax(s.lower).cwiseMin(s.upper);
        } else if constexpr (std::is_same_v<S, Ball>) {
          const Point offset = x - s.center;
          const double r = offset.norm();
          if (r <= s.radius) return x;
          return s.center + (s.radius / r) * offset;
        } else if constexpr (std::is_same_v<S, HalfSpace>) {
          const double excess = s.normal.dot(x) - s.offset;
          if (excess <= 0.0) return x;
          return x - (excess / s.normal.squaredNorm()) * s.normal;
        } else {
          if (s.basis.cols() == 0) return s.anchor;
          return s.anchor + s.basis * (s.basis.transpose() * (x - s.anchor));
        }
      },
      K.shape());
}

// ---------------------------------------------------------------------------

HilbertIdentityAudit hilbert_identity_check(const Point& x, const Point& y, double lambda,
                                            double tol) {
  require_same_dim(x, y);
  if (!(lambda > 0.0 && lambda < 1.0))
    throw InvalidDescriptor("hilbert_identity_check: lambda must lie in (0,1)");

  HilbertIdentityAudit audit;
  const double common_rhs = x.squaredNorm() + 2.0 * y.dot(x + y);

  audit.first_difference.lhs = (x - y).squaredNorm();
  audit.first_difference.rhs = common_rhs;
  audit.first_difference.holds = audit.first_difference.lhs <= common_rhs + tol;

  audit.first_sum.lhs = (x + y).squaredNorm();
  audit.first_sum.rhs = common_rhs;
  audit.first_sum.holds = audit.first_sum.lhs <= common_rhs + tol;

  audit.second.lhs = (lambda * x + (1.0 - lambda) * y).squaredNorm();
  audit.second.rhs = lambda * x.squaredNorm() + (1.0 - lambda) * y.squaredNorm() -
                     lambda * (1.0 - lambda) * (x - y).squaredNorm();
  audit.second.holds = std::abs(audit.second.lhs - audit.second.rhs) <= tol;
  return audit;
}

}  // namespace vfb
