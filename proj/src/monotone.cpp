#include "vfb/monotone.hpp"

#include <cmath>

#include "vfb/errors.hpp"

namespace vfb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double soft_threshold(double t, double cut) {
  if (t > cut) return t - cut;
  if (t < -cut) return t + cut;
  return 0.0;
}

}  // namespace

namespace ops {

SingleOp zero() {
  return {"zero", [](const Point& x) -> Point { return Point::Zero(x.size()); },
          Moduli{0.0, std::nullopt, std::nullopt, std::nullopt}};
}

SingleOp identity() {
  return {"identity", [](const Point& x) -> Point { return x; }, Moduli{1.0, 1.0, 1.0, 1.0}};
}

SingleOp scaled(double c) {
  Moduli m;
  m.lipschitz = std::abs(c);
  if (c > 0.0) {
    m.strong_monotonicity = c;
    m.inverse_strong_monotonicity = 1.0 / c;
    m.strong_positivity = c;
  }
  return {"scaled(" + std::to_string(c) + ")", [c](const Point& x) -> Point { return c * x; }, m};
}

SingleOp affine(double c, Point v) {
  require_finite(v, "affine offset");
  Moduli m;
  m.lipschitz = std::abs(c);
  return {"affine(" + std::to_string(c) + ")",
          [c, v = std::move(v)](const Point& x) -> Point {
            require_same_dim(x, v);
            return c * x + v;
          },
          m};
}

SingleOp shifted_identity(Point a) {
  require_finite(a, "shift");
  return {"shifted_identity",
          [a = std::move(a)](const Point& x) -> Point {
            require_same_dim(x, a);
            return x - a;
          },
          Moduli{1.0, 1.0, 1.0, std::nullopt}};
}

SingleOp linear(Matrix Q) {
  if (Q.rows() != Q.cols()) throw InvalidDescriptor("linear operator must be square");
  if (!Q.isApprox(Q.transpose(), 1e-12))
    throw InvalidDescriptor("linear operator must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(Q, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo < -1e-12) throw InvalidDescriptor("linear operator must be positive semidefinite");
  Moduli m;
  m.lipschitz = hi;
  if (hi > 0.0) m.inverse_strong_monotonicity = 1.0 / hi;
  if (lo > 0.0) {
    m.strong_monotonicity = lo;
    m.strong_positivity = lo;
  }
  return {"linear", [Q = std::move(Q)](const Point& x) -> Point {
            if (x.size() != Q.cols())
              throw DimensionMismatch(std::size_t(Q.cols()), std::size_t(x.size()));
            return Q * x;
          },
          m};
}

}  // namespace ops

// ---------------------------------------------------------------------------

MaxMonotone MaxMonotone::separable(std::vector<ScalarTerm> terms) {
  if (terms.empty()) throw InvalidDescriptor("separable subdifferential needs at least one term");
  for (const auto& t : terms) {
    std::visit(overloaded{
                   [](const AbsoluteValue& a) {
                     if (!(a.weight >= 0.0) || !std::isfinite(a.weight))
                       throw InvalidDescriptor("absolute-value weight must be finite and >= 0");
                   },
                   [](const Quadratic& q) {
                     if (!(q.coef >= 0.0) || !std::isfinite(q.coef))
                       throw InvalidDescriptor("quadratic coefficient must be finite and >= 0");
                   },
               },
               t);
  }
  return MaxMonotone(SeparableSubdifferential{std::move(terms)});
}

std::string MaxMonotone::describe() const {
  return std::visit(overloaded{
                        [](const NormalCone&) { return std::string("normal_cone"); },
                        [](const SeparableSubdifferential& s) {
                          return "separable(" + std::to_string(s.terms.size()) + " terms)";
                        },
                        [](const ZeroOperator&) { return std::string("zero"); },
                    },
                    shape_);
}

Point resolvent(const MaxMonotone& A, double lambda, const Point& x) {
  if (!(lambda > 0.0)) throw InvalidDescriptor("resolvent: lambda must be positive");
  return std::visit(
      overloaded{
          [&](const NormalCone& n) -> Point { return project(n.set, x); },
          [&](const SeparableSubdifferential& s) -> Point {
            const auto d = static_cast<std::size_t>(x.size());
            if (s.terms.size() != 1 && s.terms.size() != d) throw DimensionMismatch(s.terms.size(), d);
            Point p(x.size());
            for (std::size_t i = 0; i < d; ++i) {
              const auto& term = s.terms.size() == 1 ? s.terms.front() : s.terms[i];
              const double xi = x(Eigen::Index(i));
              p(Eigen::Index(i)) = std::visit(
                  overloaded{
                      [&](const AbsoluteValue& a) { return soft_threshold(xi, lambda * a.weight); },
                      [&](const Quadratic& q) { return xi / (1.0 + lambda * q.coef); },
                  },
                  term);
            }
            return p;
          },
          [&](const ZeroOperator&) -> Point { return x; },
      },
      A.shape());
}

Point forward_backward_step(const MaxMonotone& A, const SingleOp& B, double lambda, const Point& x) {
  if (!(lambda > 0.0)) throw InvalidDescriptor("forward_backward_step: lambda must be positive");
  const Point bx = B(x);
  require_same_dim(x, bx);
  return resolvent(A, lambda, x - lambda * bx);
}

double fixed_point_residual(const MaxMonotone& A, const SingleOp& B, double lambda, const Point& x) {
  return (x - forward_backward_step(A, B, lambda, x)).norm();
}

// ---------------------------------------------------------------------------

AuditRecord check_inverse_strongly_monotone(const SingleOp& B, double alpha,
                                            std::span<const PointPair> pairs, double tol) {
  if (!(alpha > 0.0)) throw InvalidDescriptor("check_inverse_strongly_monotone: alpha must be > 0");
  AuditRecord audit("inverse-strongly-monotone", tol);
  for (const auto& [x, y] : pairs) {
    const Point db = B(x) - B(y);
    audit.record(alpha * db.squaredNorm(), inner(db, x - y), x, y);
  }
  return audit;
}

AuditRecord check_strongly_monotone(const SingleOp& B, double k, std::span<const PointPair> pairs,
                                    double tol) {
  AuditRecord audit("strongly-monotone", tol);
  for (const auto& [x, y] : pairs) {
    const Point dx = x - y;
    audit.record(k * dx.squaredNorm(), inner(B(x) - B(y), dx), x, y);
  }
  return audit;
}

AuditRecord check_lipschitz(const SingleOp& B, double L, std::span<const PointPair> pairs,
                            double tol) {
  AuditRecord audit("lipschitz", tol);
  for (const auto& [x, y] : pairs) audit.record((B(x) - B(y)).norm(), L * distance(x, y), x, y);
  return audit;
}

AuditRecord check_forward_nonexpansive(const SingleOp& B, double alpha, double theta,
                                       std::span<const PointPair> pairs, double tol) {
  AuditRecord audit("forward-step-nonexpansive", tol);
  audit.vacuous = !(theta >= 0.0 && theta <= 2.0 * alpha);
  for (const auto& [x, y] : pairs) {
    const Point db = B(x) - B(y);
    const Point dx = x - y;
    const double lhs = (dx - theta * db).squaredNorm();
    const double rhs = dx.squaredNorm() + theta * (theta - 2.0 * alpha) * db.squaredNorm();
    audit.record(lhs, rhs, x, y);
  }
  return audit;
}

AuditRecord check_wang_contraction(const SingleOp& F, double eta, double tau, double t,
                                   std::span<const PointPair> pairs, double tol) {
  const auto& m = F.moduli;
  if (!m.strong_monotonicity || !m.lipschitz || *m.strong_monotonicity <= 0.0 || *m.lipschitz <= 0.0)
    throw ConfigError("k > 0 and L > 0", "operator '" + F.name + "' declares no positive k and L");
  const double k = *m.strong_monotonicity;
  const double L = *m.lipschitz;
  if (!(eta > 0.0 && eta < 2.0 * k / (L * L)))
    throw ConfigError("0 < η < 2k/L²", "eta = " + std::to_string(eta));
  const double expected_tau = eta * (k - L * L * eta / 2.0);
  if (std::abs(tau - expected_tau) > 1e-12 * std::max(1.0, std::abs(expected_tau)))
    throw ConfigError("τ = η(k − L²η/2)",
                      "tau = " + std::to_string(tau) + ", expected " + std::to_string(expected_tau));
  if (!(t > 0.0 && t < std::min(1.0, 1.0 / tau)))
    throw ConfigError("t ∈ (0, min(1, 1/τ))", "t = " + std::to_string(t));

  AuditRecord audit("wang-contraction", tol);
  const double scale = t * eta;
  for (const auto& [x, y] : pairs) {
    const Point lhs = (x - scale * F(x)) - (y - scale * F(y));
    audit.record(lhs.norm(), (1.0 - t * tau) * distance(x, y), x, y);
  }
  return audit;
}

AuditRecord check_firmly_nonexpansive(const std::function<Point(const Point&)>& J,
                                      std::span<const PointPair> pairs, double tol) {
  AuditRecord audit("firmly-nonexpansive", tol);
  for (const auto& [x, y] : pairs) {
    const Point dj = J(x) - J(y);
    audit.record(dj.squaredNorm(), inner(dj, x - y), x, y);
  }
  return audit;
}

}  // namespace vfb
