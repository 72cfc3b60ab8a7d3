#include "vfb/setvalued.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vfb/errors.hpp"

namespace vfb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Finite point list view of a singleton or finite set.
const std::vector<Point>* as_points(const SetImage& S, std::vector<Point>& scratch) {
  if (const auto* s = std::get_if<Singleton>(&S.shape())) {
    scratch.assign(1, s->point);
    return &scratch;
  }
  if (const auto* f = std::get_if<FiniteSet>(&S.shape())) return &f->points;
  return nullptr;
}

// Ball view (a singleton is a ball of radius zero).
std::optional<BallImage> as_ball(const SetImage& S) {
  if (const auto* b = std::get_if<BallImage>(&S.shape())) return *b;
  if (const auto* s = std::get_if<Singleton>(&S.shape())) return BallImage{s->point, 0.0};
  return std::nullopt;
}

double directed(const std::vector<Point>& from, const std::vector<Point>& to) {
  double worst = 0.0;
  for (const auto& a : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : to) best = std::min(best, (a - b).norm());
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

SetImage SetImage::singleton(Point p) {
  require_finite(p, "singleton point");
  return SetImage(Singleton{std::move(p)});
}

SetImage SetImage::finite(std::vector<Point> points) {
  if (points.empty()) throw InvalidDescriptor("finite set image must be nonempty");
  for (const auto& p : points) {
    require_finite(p, "finite set point");
    require_same_dim(points.front(), p);
  }
  return SetImage(FiniteSet{std::move(points)});
}

SetImage SetImage::ball(Point center, double radius) {
  require_finite(center, "ball image center");
  if (!(radius >= 0.0) || !std::isfinite(radius))
    throw InvalidDescriptor("ball image radius must be finite and nonnegative");
  return SetImage(BallImage{std::move(center), radius});
}

std::size_t SetImage::dim() const {
  return std::visit(overloaded{
                        [](const Singleton& s) { return std::size_t(s.point.size()); },
                        [](const FiniteSet& f) { return std::size_t(f.points.front().size()); },
                        [](const BallImage& b) { return std::size_t(b.center.size()); },
                    },
                    shape_);
}

bool SetImage::contains(const Point& x, double tol) const {
  return distance_to_set(x, *this) <= tol;
}

bool SetImage::is_singleton_at(const Point& p, double tol) const {
  return std::visit(overloaded{
                        [&](const Singleton& s) { return distance(s.point, p) <= tol; },
                        [&](const FiniteSet& f) {
                          return std::all_of(f.points.begin(), f.points.end(), [&](const Point& q) {
                            return distance(q, p) <= tol;
                          });
                        },
                        [&](const BallImage& b) {
                          return b.radius <= tol && distance(b.center, p) <= tol;
                        },
                    },
                    shape_);
}

double distance_to_set(const Point& x, const SetImage& S) {
  return std::visit(overloaded{
                        [&](const Singleton& s) { return distance(x, s.point); },
                        [&](const FiniteSet& f) {
                          double best = std::numeric_limits<double>::infinity();
                          for (const auto& p : f.points) best = std::min(best, distance(x, p));
                          return best;
                        },
                        [&](const BallImage& b) {
                          return std::max(0.0, distance(x, b.center) - b.radius);
                        },
                    },
                    S.shape());
}

Point nearest_point(const Point& x, const SetImage& S) {
  return std::visit(overloaded{
                        [&](const Singleton& s) -> Point {
                          require_same_dim(x, s.point);
                          return s.point;
                        },
                        [&](const FiniteSet& f) -> Point {
                          std::size_t best = 0;
                          double best_d = std::numeric_limits<double>::infinity();
                          for (std::size_t i = 0; i < f.points.size(); ++i) {
                            const double d = distance(x, f.points[i]);
                            if (d < best_d) {
                              best_d = d;
                              best = i;
                            }
                          }
                          return f.points[best];
                        },
                        [&](const BallImage& b) -> Point {
                          const Point offset = x - b.center;
                          const double r = distance(x, b.center);
                          if (r <= b.radius) return x;
                          return b.center + (b.radius / r) * offset;
                        },
                    },
                    S.shape());
}

Point canonical_point(const SetImage& S) {
  return std::visit(overloaded{
                        [](const Singleton& s) -> Point { return s.point; },
                        [](const FiniteSet& f) -> Point { return f.points.front(); },
                        [](const BallImage& b) -> Point { return b.center; },
                    },
                    S.shape());
}

double hausdorff(const SetImage& A, const SetImage& B) {
  if (A.dim() != B.dim()) throw DimensionMismatch(A.dim(), B.dim());

  std::vector<Point> scratch_a, scratch_b;
  const auto* pa = as_points(A, scratch_a);
  const auto* pb = as_points(B, scratch_b);
  if (pa && pb) return std::max(directed(*pa, *pb), directed(*pb, *pa));

  const auto ba = as_ball(A);
  const auto bb = as_ball(B);
  if (ba && bb) {
    // sup over one ball of the distance to the other is max(0, |c1 - c2| + r1 - r2).
    return (ba->center - bb->center).norm() + std::abs(ba->radius - bb->radius);
  }
  throw UnsupportedPairing("hausdorff: finite set against ball image has no exact formula");
}

// ---------------------------------------------------------------------------

std::string describe(const OperatorClass& c) {
  return std::visit(overloaded{
                        [](const Demicontractive& d) {
                          return "demicontractive(beta=" + std::to_string(d.beta) + ")";
                        },
                        [](const QuasiNonexpansive&) { return std::string("quasi-nonexpansive"); },
                        [](const StrictlyPseudocontractive& s) {
                          return "strictly-pseudocontractive(k=" + std::to_string(s.k) + ")";
                        },
                        [](const Nonexpansive&) { return std::string("nonexpansive"); },
                    },
                    c);
}

std::string to_string(SelectionRule rule) {
  return rule == SelectionRule::Metric ? "metric" : "first";
}

SelectionRule selection_rule_from_string(const std::string& name) {
  if (name == "metric") return SelectionRule::Metric;
  if (name == "first" || name == "first_enumerated") return SelectionRule::FirstEnumerated;
  throw InvalidDescriptor("unknown selection rule '" + name + "'");
}

Point select(const MultiMap& T, SelectionRule rule, const Point& x) {
  const SetImage img = T(x);
  return rule == SelectionRule::Metric ? nearest_point(x, img) : canonical_point(img);
}

bool fixes_declared_points_strictly(const MultiMap& T, double tol) {
  return std::all_of(T.known_fixed_points.begin(), T.known_fixed_points.end(),
                     [&](const Point& q) { return T(q).is_singleton_at(q, tol); });
}

namespace {

void require_fixed_points(const MultiMap& T, const char* checker) {
  if (T.known_fixed_points.empty())
    throw MissingFixedPoints(std::string(checker) + ": map '" + T.name +
                             "' declares no fixed points");
}

}  // namespace

AuditRecord check_demicontractive(const MultiMap& T, double beta, std::span<const Point> samples,
                                  double tol) {
  require_fixed_points(T, "check_demicontractive");
  AuditRecord audit("demicontractive", tol);
  audit.vacuous = !(beta > 0.0 && beta < 1.0);
  for (const auto& x : samples) {
    const SetImage tx = T(x);
    const double dx = distance_to_set(x, tx);
    for (const auto& p : T.known_fixed_points) {
      const double h = hausdorff(tx, T(p));
      audit.record(h * h, (x - p).squaredNorm() + beta * dx * dx, x, p);
    }
  }
  return audit;
}

AuditRecord check_quasi_nonexpansive(const MultiMap& T, std::span<const Point> samples,
                                     double tol) {
  require_fixed_points(T, "check_quasi_nonexpansive");
  AuditRecord audit("quasi-nonexpansive", tol);
  for (const auto& x : samples) {
    const SetImage tx = T(x);
    for (const auto& p : T.known_fixed_points) audit.record(hausdorff(tx, T(p)), distance(x, p), x, p);
  }
  return audit;
}

AuditRecord check_nonexpansive(const MultiMap& T, std::span<const std::pair<Point, Point>> pairs,
                               double tol) {
  AuditRecord audit("nonexpansive", tol);
  for (const auto& [x, y] : pairs) audit.record(hausdorff(T(x), T(y)), distance(x, y), x, y);
  return audit;
}

AuditRecord check_strictly_pseudocontractive(const MultiMap& T, double k,
                                             std::span<const std::pair<Point, Point>> pairs,
                                             double tol) {
  if (!(k > 0.0 && k <= 1.0))
    throw InvalidDescriptor("check_strictly_pseudocontractive: k must lie in (0,1]");
  AuditRecord audit("strictly-pseudocontractive", tol);
  for (const auto& [x, y] : pairs) {
    const SetImage tx = T(x);
    const SetImage ty = T(y);
    const Point u = nearest_point(x, tx);
    const Point v = nearest_point(y, ty);
    const double h = hausdorff(tx, ty);
    audit.record(h * h, (x - y).squaredNorm() + k * ((x - u) - (y - v)).squaredNorm(), x, y);
  }
  return audit;
}

}  // namespace vfb
