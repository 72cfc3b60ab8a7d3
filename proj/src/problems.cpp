#include "vfb/problems.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "vfb/errors.hpp"

namespace vfb {

namespace {

void require_dim(const Point& x, std::size_t d) {
  if (static_cast<std::size_t>(x.size()) != d) throw DimensionMismatch(d, std::size_t(x.size()));
}

}  // namespace

MultiMap make_example1(double beta) {
  return {"example1",
          [](const Point& x) {
            require_dim(x, 1);
            return SetImage::singleton(x / 2.0);
          },
          Demicontractive{beta},
          {Point::Zero(1)}};
}

MultiMap make_example2(double beta) {
  return {"example2",
          [](const Point& x) {
            require_dim(x, 2);
            return SetImage::singleton(x / 2.0);
          },
          Demicontractive{beta},
          {Point::Zero(2)}};
}

MultiMap make_example3(double beta) {
  return {"example3",
          [](const Point& x) {
            require_dim(x, 1);
            const double t = x(0);
            // extended by continuity: |T(t)| <= (2/3)|t| -> 0
            const double value = t == 0.0 ? 0.0 : (2.0 / 3.0) * t * std::sin(1.0 / t);
            return SetImage::singleton(make_point({value}));
          },
          Demicontractive{beta},
          {Point::Zero(1)}};
}

MultiMap make_scale_map(std::size_t dim, double scale, OperatorClass declared) {
  return {fmt::format("scale({})", scale),
          [dim, scale](const Point& x) {
            require_dim(x, dim);
            return SetImage::singleton(scale * x);
          },
          declared,
          {Point::Zero(Eigen::Index(dim))}};
}

// ---------------------------------------------------------------------------

ProblemInstance make_inclusion_instance(std::size_t dim, const ConvexSet& C, const Point& a,
                                        double scale, const InclusionOptions& options) {
  if (dim == 0) throw InvalidDescriptor("inclusion instance needs dim >= 1");
  require_dim(a, dim);
  require_finite(a, "inclusion shift");
  if (!(scale > 0.0 && scale <= 1.0))
    throw ConfigError("scale ∈ (0,1]", fmt::format("scale = {}", scale));
  if (const auto d = C.dim(); d && *d != dim) throw DimensionMismatch(dim, *d);

  const Point solution = project(C, a);
  if (scale < 1.0 && solution.norm() > 1e-12)
    throw ConfigError("P_C(a) = 0",
                      fmt::format("|P_C(a)| = {}; scale maps only fix the origin", solution.norm()));

  ProblemInstance p;
  p.name = fmt::format("inclusion{}d", dim);
  p.dim = dim;
  p.K = C;
  p.forward_op = ops::shifted_identity(a);
  p.backward_op = MaxMonotone::normal_cone(C);
  p.beta_demi = options.beta_demi;

  if (scale < 1.0) {
    p.T1 = make_scale_map(dim, scale, Demicontractive{options.beta_demi});
    p.T2 = make_scale_map(dim, scale, Demicontractive{options.beta_demi});
    p.T3 = make_scale_map(dim, scale, QuasiNonexpansive{});
  } else {
    for (MultiMap* T : {&p.T1, &p.T2, &p.T3}) {
      *T = make_scale_map(dim, 1.0, Nonexpansive{});
      T->known_fixed_points = {solution};
    }
  }

  if (options.contraction_offset || options.contraction_coef != 0.0) {
    Point offset = options.contraction_offset.value_or(Point::Zero(Eigen::Index(dim)));
    require_dim(offset, dim);
    p.contraction = ops::affine(options.contraction_coef, std::move(offset));
  } else {
    p.contraction = ops::zero();
  }
  p.strong_op = ops::identity();
  p.params = options.params;
  p.params.k = 1.0;
  p.params.L = 1.0;
  p.selection = options.selection;
  p.mode = options.mode;
  p.known_solution = solution;
  p.known_common_points = {solution};
  validate_instance(p);
  return p;
}

ProblemInstance make_trivial_instance(std::size_t dim, const InclusionOptions& options) {
  if (dim == 0) throw InvalidDescriptor("trivial instance needs dim >= 1");
  ProblemInstance p;
  p.name = fmt::format("trivial{}d", dim);
  p.dim = dim;
  p.K = ConvexSet::whole_space();
  p.forward_op = ops::zero();
  p.backward_op = MaxMonotone::zero();
  p.beta_demi = options.beta_demi;
  for (MultiMap* T : {&p.T1, &p.T2, &p.T3}) *T = make_scale_map(dim, 1.0, Nonexpansive{});
  p.contraction = ops::zero();
  p.strong_op = ops::identity();
  p.params = options.params;
  p.params.k = 1.0;
  p.params.L = 1.0;
  p.params.eta = 1.0;
  p.selection = options.selection;
  p.mode = options.mode;
  p.known_solution = Point::Zero(Eigen::Index(dim));
  p.known_common_points = {Point::Zero(Eigen::Index(dim))};
  validate_instance(p);
  return p;
}

ProblemInstance make_example3_instance(const InclusionOptions& options) {
  ProblemInstance p = make_inclusion_instance(
      1, ConvexSet::box(make_point({-1.0}), make_point({1.0})), Point::Zero(1), 0.5, options);
  p.name = "example3";
  p.T1 = make_example3(options.beta_demi);
  validate_instance(p);
  return p;
}

std::vector<std::string> named_instances() {
  return {"trivial", "inclusion1d", "inclusion2d", "inclusion10d", "inclusion_ball2d", "example3"};
}

ProblemInstance make_named_instance(const std::string& id) {
  auto box = [](std::size_t d) {
    return ConvexSet::box(Point::Constant(Eigen::Index(d), -1.0), Point::Constant(Eigen::Index(d), 1.0));
  };
  if (id == "trivial") return make_trivial_instance(2);
  if (id == "inclusion1d") return make_inclusion_instance(1, box(1), Point::Zero(1), 0.5);
  if (id == "inclusion2d") return make_inclusion_instance(2, box(2), Point::Zero(2), 0.5);
  if (id == "inclusion10d") return make_inclusion_instance(10, box(10), Point::Zero(10), 0.5);
  if (id == "inclusion_ball2d")
    return make_inclusion_instance(2, ConvexSet::ball(make_point({1.0, 1.0}), std::sqrt(2.0)),
                                   Point::Zero(2), 0.5);
  if (id == "example3") return make_example3_instance();
  throw InvalidDescriptor("unknown instance '" + id + "'");
}

// ---------------------------------------------------------------------------

std::vector<Point> sample_points(std::size_t dim, std::size_t count, double lo, double hi,
                                 std::uint64_t seed) {
  std::vector<Point> out;
  out.reserve(count);
  if (dim == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.5 : double(i) / double(count - 1);
      out.push_back(make_point({lo + t * (hi - lo)}));
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  for (std::size_t i = 0; i < count; ++i) {
    Point p(static_cast<Eigen::Index>(dim));
    for (Eigen::Index j = 0; j < p.size(); ++j) p(j) = unif(rng);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<PointPair> sample_pairs(std::size_t dim, std::size_t count, double lo, double hi,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  auto draw = [&] {
    Point p(static_cast<Eigen::Index>(dim));
    for (Eigen::Index j = 0; j < p.size(); ++j) p(j) = unif(rng);
    return p;
  };
  std::vector<PointPair> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point x = draw();
    Point y = draw();
    out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

bool InstanceAudit::passed() const {
  return std::all_of(records.begin(), records.end(),
                     [](const auto& r) { return r.second.passed(); });
}

namespace {

void audit_map_class(InstanceAudit& out, const std::string& label, const MultiMap& T,
                     std::span<const Point> points, std::span<const PointPair> pairs) {
  std::visit(
      [&](const auto& cls) {
        using C = std::decay_t<decltype(cls)>;
        if constexpr (std::is_same_v<C, Demicontractive>) {
          out.records.emplace_back(label + " demicontractive", check_demicontractive(T, cls.beta, points));
        } else if constexpr (std::is_same_v<C, QuasiNonexpansive>) {
          out.records.emplace_back(label + " quasi-nonexpansive", check_quasi_nonexpansive(T, points));
        } else if constexpr (std::is_same_v<C, StrictlyPseudocontractive>) {
          out.records.emplace_back(label + " strictly-pseudocontractive",
                                   check_strictly_pseudocontractive(T, cls.k, pairs));
        } else {
          out.records.emplace_back(label + " nonexpansive", check_nonexpansive(T, pairs));
        }
      },
      T.declared_class);
}

}  // namespace

InstanceAudit audit_instance(const ProblemInstance& problem, std::size_t samples,
                             std::uint64_t seed) {
  InstanceAudit out;
  const auto points = sample_points(problem.dim, samples, -10.0, 10.0, seed);
  const auto pairs = sample_pairs(problem.dim, samples, -10.0, 10.0, seed + 1);

  audit_map_class(out, "T1", problem.T1, points, pairs);
  audit_map_class(out, "T2", problem.T2, points, pairs);
  audit_map_class(out, "T3", problem.T3, points, pairs);

  const auto& fm = problem.forward_op.moduli;
  if (fm.inverse_strong_monotonicity)
    out.records.emplace_back("forward inverse-strongly-monotone",
                             check_inverse_strongly_monotone(problem.forward_op,
                                                             *fm.inverse_strong_monotonicity, pairs));
  out.records.emplace_back("contraction b-lipschitz",
                           check_lipschitz(problem.contraction, problem.params.b, pairs));
  out.records.emplace_back("strong_op k-strongly-monotone",
                           check_strongly_monotone(problem.strong_op, problem.params.k, pairs));
  out.records.emplace_back("strong_op L-lipschitz",
                           check_lipschitz(problem.strong_op, problem.params.L, pairs));

  const double lambda = std::min(1.0, 2.0 * problem.alpha_ism()) / 2.0;
  out.records.emplace_back(
      "resolvent firmly-nonexpansive",
      check_firmly_nonexpansive(
          [&](const Point& x) { return resolvent(problem.backward_op, lambda, x); }, pairs));

  if (problem.known_solution) {
    AuditRecord r("solution is a fixed point", 1e-12);
    const Point& s = *problem.known_solution;
    r.record(fixed_point_residual(problem.backward_op, problem.forward_op, lambda, s), 0.0, s, s);
    for (const MultiMap* T : {&problem.T1, &problem.T2, &problem.T3})
      r.record(distance_to_set(s, (*T)(s)), 0.0, s, s);
    out.records.emplace_back("known solution residuals", r);
  }
  return out;
}

}  // namespace vfb
