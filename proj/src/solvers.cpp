#include "vfb/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "vfb/errors.hpp"

namespace vfb {

double ProblemInstance::alpha_ism() const {
  const auto& m = forward_op.moduli;
  if (m.inverse_strong_monotonicity) return *m.inverse_strong_monotonicity;
  if (m.lipschitz && *m.lipschitz == 0.0) return std::numeric_limits<double>::infinity();
  throw ConfigError("α > 0", "forward operator '" + forward_op.name +
                                 "' declares no inverse strong monotonicity constant");
}

bool certify_common_point(const ProblemInstance& problem, const Point& q, double tol) {
  if (static_cast<std::size_t>(q.size()) != problem.dim) return false;
  if (!problem.K.contains(q, tol)) return false;
  if (fixed_point_residual(problem.backward_op, problem.forward_op, 1.0, q) > tol) return false;
  for (const MultiMap* T : {&problem.T1, &problem.T2, &problem.T3})
    if (distance_to_set(q, (*T)(q)) > tol) return false;
  return true;
}

void validate_instance(const ProblemInstance& problem) {
  if (problem.dim == 0) throw InvalidDescriptor("instance dimension must be >= 1");
  if (const auto d = problem.K.dim(); d && *d != problem.dim) throw DimensionMismatch(problem.dim, *d);
  check_params(problem.params);
  const auto& m = problem.strong_op.moduli;
  if (m.strong_monotonicity && std::abs(*m.strong_monotonicity - problem.params.k) > 1e-12)
    throw ConfigError("k matches Φ", fmt::format("declared k = {}, params k = {}",
                                                 *m.strong_monotonicity, problem.params.k));
  if (m.lipschitz && std::abs(*m.lipschitz - problem.params.L) > 1e-12)
    throw ConfigError("L matches Φ",
                      fmt::format("declared L = {}, params L = {}", *m.lipschitz, problem.params.L));
  if (const auto& cb = problem.contraction.moduli.lipschitz; cb && *cb > problem.params.b + 1e-12)
    throw ConfigError("φ is b-Lipschitz",
                      fmt::format("declared Lipschitz constant {} exceeds b = {}", *cb, problem.params.b));
  if (problem.mode == FixedPointMode::MetricProjection && problem.selection != SelectionRule::Metric)
    throw ConfigError("metric selection", "the metric-projection mode requires metric selections");
  for (const auto& q : problem.known_common_points) {
    if (!certify_common_point(problem, q))
      throw UncertifiedProbe("declared common point fails certification in instance '" +
                             problem.name + "'");
    if (problem.mode == FixedPointMode::Strict) {
      for (const MultiMap* T : {&problem.T1, &problem.T2, &problem.T3})
        if (!(*T)(q).is_singleton_at(q, 1e-12))
          throw ConfigError("T₁q = T₂q = T₃q = {q}",
                            "map '" + T->name + "' does not collapse to {q} at a common point");
    }
  }
  if (problem.known_solution && static_cast<std::size_t>(problem.known_solution->size()) != problem.dim)
    throw DimensionMismatch(problem.dim, std::size_t(problem.known_solution->size()));
}

// ---------------------------------------------------------------------------

namespace {

SelectionRule effective_rule(const ProblemInstance& problem) {
  return problem.mode == FixedPointMode::MetricProjection ? SelectionRule::Metric : problem.selection;
}

/// Forward-backward point followed by `maps` relaxation stages.
StepTrace relaxation_stages(const ProblemInstance& problem, const Schedule& schedule, std::size_t n,
                            const Point& source, int maps) {
  const SelectionRule rule = effective_rule(problem);
  StepTrace t;
  t.source = source;
  t.alpha = schedule.alpha(n);
  t.lambda = schedule.lambda(n);
  t.mu = schedule.mu(n);

  t.fb_point = forward_backward_step(problem.backward_op, problem.forward_op, t.lambda, source);
  t.fb_residual = (source - t.fb_point).norm();
  if (maps == 0) return t;

  const double theta = schedule.theta(n);
  const SetImage img1 = problem.T1(t.fb_point);
  t.residual_t1 = distance_to_set(t.fb_point, img1);
  t.pick_t1 = rule == SelectionRule::Metric ? nearest_point(t.fb_point, img1) : canonical_point(img1);
  t.relaxed_t1 = theta * t.fb_point + (1.0 - theta) * t.pick_t1;

  const double beta = schedule.beta(n);
  const SetImage img2 = problem.T2(t.relaxed_t1);
  t.residual_t2 = distance_to_set(t.relaxed_t1, img2);
  t.pick_t2 = rule == SelectionRule::Metric ? nearest_point(t.relaxed_t1, img2) : canonical_point(img2);
  t.relaxed_t2 = beta * t.relaxed_t1 + (1.0 - beta) * t.pick_t2;

  if (maps < 3) return t;

  const SetImage img3 = problem.T3(t.relaxed_t2);
  t.residual_t3 = distance_to_set(t.relaxed_t2, img3);
  const double gamma = schedule.gamma(n);
  t.pick_t3 = rule == SelectionRule::Metric ? nearest_point(t.relaxed_t2, img3) : canonical_point(img3);
  t.relaxed_t3 = gamma * t.relaxed_t2 + (1.0 - gamma) * *t.pick_t3;
  return t;
}

IterState finish(const ProblemInstance& problem, const IterState& prev, StepTrace trace, Point next) {
  if (!next.allFinite())
    throw DivergenceError(fmt::format("non-finite iterate at n = {}", prev.n + 1));
  IterState s;
  s.n = prev.n + 1;
  s.displacement = (next - prev.iterate).norm();
  if (problem.known_solution) s.dist_to_solution = (next - *problem.known_solution).norm();
  s.iterate = std::move(next);
  s.trace = std::move(trace);
  return s;
}

/// alpha gamma phi(psi) + w - eta alpha Phi(w)
Point viscosity_blend(const ProblemInstance& problem, double alpha, const Point& psi, const Point& w) {
  const auto& p = problem.params;
  return alpha * p.gamma * problem.contraction(psi) + w - p.eta * alpha * problem.strong_op(w);
}

void check_state(const ProblemInstance& problem, const IterState& state) {
  if (static_cast<std::size_t>(state.iterate.size()) != problem.dim)
    throw DimensionMismatch(problem.dim, std::size_t(state.iterate.size()));
}

}  // namespace

IterState initial_state(const ProblemInstance& problem, const Point& start) {
  if (static_cast<std::size_t>(start.size()) != problem.dim)
    throw DimensionMismatch(problem.dim, std::size_t(start.size()));
  require_finite(start, "starting point");
  IterState s;
  s.iterate = project(problem.K, start);
  if (problem.known_solution) s.dist_to_solution = (s.iterate - *problem.known_solution).norm();
  return s;
}

IterState step_main(const ProblemInstance& problem, const Schedule& schedule, const IterState& state) {
  check_state(problem, state);
  const std::size_t n = state.n + 1;
  StepTrace t = relaxation_stages(problem, schedule, n, state.iterate, 3);
  const auto& p = problem.params;
  const Point& psi = state.iterate;
  // alpha gamma phi(psi) + mu xi + (1 - mu)(I - eta alpha Phi) psi
  const Point y = t.alpha * p.gamma * problem.contraction(psi) + t.mu * *t.relaxed_t3 +
                  (1.0 - t.mu) * (psi - p.eta * t.alpha * problem.strong_op(psi));
  Point next = project(problem.K, y);
  return finish(problem, state, std::move(t), std::move(next));
}

IterState step_sow(const ProblemInstance& problem, const Schedule& schedule, const IterState& state,
                   const SolverOptions& options) {
  check_state(problem, state);
  const std::size_t n = state.n + 1;
  StepTrace t = relaxation_stages(problem, schedule, n, state.iterate, 2);
  t.mu = 0.0;
  const Point& w = options.sow_uses_t2_point ? t.relaxed_t2 : t.relaxed_t1;
  Point next = project(problem.K, viscosity_blend(problem, t.alpha, state.iterate, w));
  return finish(problem, state, std::move(t), std::move(next));
}

IterState step_fc(const ProblemInstance& problem, const Schedule& schedule, const IterState& state) {
  check_state(problem, state);
  const std::size_t n = state.n + 1;
  StepTrace t = relaxation_stages(problem, schedule, n, state.iterate, 3);
  t.mu = 0.0;
  Point next = project(problem.K, viscosity_blend(problem, t.alpha, state.iterate, *t.relaxed_t3));
  return finish(problem, state, std::move(t), std::move(next));
}

IterState step_forward_backward(const ProblemInstance& problem, const Schedule& schedule,
                                const IterState& state) {
  check_state(problem, state);
  const std::size_t n = state.n + 1;
  StepTrace t = relaxation_stages(problem, schedule, n, state.iterate, 0);
  t.mu = 0.0;
  Point next = t.fb_point;
  return finish(problem, state, std::move(t), std::move(next));
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Main: return "main";
    case Algorithm::Sow: return "sow";
    case Algorithm::Fc: return "fc";
    case Algorithm::ForwardBackward: return "forward_backward";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "main") return Algorithm::Main;
  if (name == "sow") return Algorithm::Sow;
  if (name == "fc") return Algorithm::Fc;
  if (name == "forward_backward" || name == "fb") return Algorithm::ForwardBackward;
  throw InvalidDescriptor("unknown algorithm '" + name + "'");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Tolerance: return "tolerance";
    case Termination::MaxIter: return "max_iter";
    case Termination::DivergenceGuard: return "divergence_guard";
  }
  return "?";
}

// ---------------------------------------------------------------------------

double vi_residual(const ProblemInstance& problem, const Point& psi, std::span<const Point> probes) {
  if (probes.empty()) throw InvalidDescriptor("vi_residual: at least one probe is required");
  const auto& p = problem.params;
  const Point field = p.eta * problem.strong_op(psi) - p.gamma * problem.contraction(psi);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& q : probes) {
    if (!certify_common_point(problem, q))
      throw UncertifiedProbe("vi_residual: probe is not a certified common point");
    worst = std::max(worst, inner(field, psi - q));
  }
  return worst;
}

FejerChainAudit audit_fejer_chain(const IterState& state, const Point& q, double tol) {
  FejerChainAudit out;
  out.record = AuditRecord("fejer-chain", tol);
  if (!state.trace) return out;
  const StepTrace& t = *state.trace;

  std::vector<const Point*> stages;
  if (t.relaxed_t3) stages.push_back(&*t.relaxed_t3);
  // the forward-backward scheme forms no relaxations
  if (t.relaxed_t1.size() == t.source.size()) {
    stages.push_back(&t.relaxed_t2);
    stages.push_back(&t.relaxed_t1);
  }
  stages.push_back(&t.fb_point);
  stages.push_back(&t.source);

  for (const Point* s : stages) out.distances.push_back(distance(*s, q));
  for (std::size_t i = 0; i + 1 < stages.size(); ++i)
    out.record.record(out.distances[i], out.distances[i + 1], *stages[i], *stages[i + 1]);
  const std::size_t last = out.distances.size() - 1;
  out.descent_ok = out.distances[last - 1] <= out.distances[last] + tol;
  return out;
}

double bounded_radius(const ProblemInstance& problem, const Point& start, const Point& q,
                      double mu_bar) {
  const auto& p = problem.params;
  const double denom = p.tau() - p.b * p.gamma - p.tau() * mu_bar;
  if (!(denom > 0.0))
    throw ConfigError("τ − bγ − τμ̄ > 0", fmt::format("denominator = {}", denom));
  const double drift = (p.gamma * problem.contraction(q) - p.eta * problem.strong_op(q)).norm();
  return std::max(distance(start, q), drift / denom);
}

AuditRecord audit_bounded(std::span<const Point> iterates, const Point& q,
                          const ProblemInstance& problem, double mu_bar, double tol) {
  AuditRecord audit("bounded", tol);
  if (iterates.empty()) return audit;
  const double radius = bounded_radius(problem, iterates.front(), q, mu_bar);
  for (const auto& psi : iterates) audit.record(distance(psi, q), radius, psi, q);
  return audit;
}

// ---------------------------------------------------------------------------

namespace {

IterState advance(Algorithm algorithm, const ProblemInstance& problem, const Schedule& schedule,
                  const IterState& state, const SolverOptions& options) {
  switch (algorithm) {
    case Algorithm::Main: return step_main(problem, schedule, state);
    case Algorithm::Sow: return step_sow(problem, schedule, state, options);
    case Algorithm::Fc: return step_fc(problem, schedule, state);
    case Algorithm::ForwardBackward: return step_forward_backward(problem, schedule, state);
  }
  throw InvalidDescriptor("unknown algorithm");
}

IterSummary summarize(const IterState& s, bool fejer_ok) {
  IterSummary out;
  out.n = s.n;
  out.iterate = s.iterate;
  out.iterate_norm = s.iterate.norm();
  out.dist_to_solution = s.dist_to_solution;
  out.fejer_ok = fejer_ok;
  if (s.trace) {
    const StepTrace& t = *s.trace;
    out.alpha = t.alpha;
    out.fb_residual = t.fb_residual;
    if (t.relaxed_t1.size() == t.source.size()) {
      out.residual_t1 = t.residual_t1;
      out.residual_t2 = t.residual_t2;
      out.residual_t3 = t.residual_t3;
    }
  }
  return out;
}

bool converged(const IterState& s, double tol) {
  if (s.displacement > tol || !s.trace) return false;
  const StepTrace& t = *s.trace;
  if (t.relaxed_t1.size() != t.source.size()) return true;
  if (t.residual_t1 > tol || t.residual_t2 > tol) return false;
  return !t.residual_t3 || *t.residual_t3 <= tol;
}

}  // namespace

RunReport run(Algorithm algorithm, const ProblemInstance& problem, const Schedule& schedule,
              const Point& start, const StopRule& stop, const RunOptions& options) {
  if (!(stop.tol > 0.0)) throw InvalidDescriptor("run: tolerance must be positive");

  RunReport report;
  report.algorithm = algorithm;

  std::vector<Point> probes;
  for (const auto& q : problem.known_common_points)
    if (certify_common_point(problem, q)) probes.push_back(q);

  IterState state = initial_state(problem, start);

  // The boundedness radius for the mu-weighted scheme uses sup mu_n; the other
  // schemes carry no anchor term.
  double mu_bar = 0.0;
  if (algorithm == Algorithm::Main) {
    if (const auto sup = schedule.mu.supremum()) mu_bar = *sup;
    else mu_bar = schedule.mu(1);
  }
  const Point origin = state.iterate;
  std::vector<double> radii;
  auto refresh_radii = [&] {
    radii.clear();
    report.audit.bounded_vacuous = false;
    report.audit.mu_bar = mu_bar;
    try {
      for (const auto& q : probes) radii.push_back(bounded_radius(problem, origin, q, mu_bar));
    } catch (const ConfigError&) {
      report.audit.bounded_vacuous = true;
      radii.clear();
    }
    report.audit.bound_radius = radii.empty() ? 0.0 : *std::max_element(radii.begin(), radii.end());
  };
  refresh_radii();

  report.trajectory.push_back(summarize(state, true));
  report.terminated_by = Termination::MaxIter;

  bool last_recorded = true;
  for (std::size_t it = 0; it < stop.max_iter; ++it) {
    IterState next;
    try {
      next = advance(algorithm, problem, schedule, state, options.solver);
    } catch (const DivergenceError& e) {
      report.terminated_by = Termination::DivergenceGuard;
      report.note = e.what();
      break;
    }

    // Grow the radius if a tabulated or custom mu exceeds the value assumed so far.
    if (algorithm == Algorithm::Main && next.trace && next.trace->mu > mu_bar) {
      mu_bar = next.trace->mu;
      refresh_radii();
    }

    bool fejer_ok = true;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const auto chain = audit_fejer_chain(next, probes[i], options.audit_tol);
      ++report.audit.fejer_checks;
      if (!chain.record.passed()) {
        ++report.audit.fejer_violations;
        fejer_ok = false;
      }
      if (!chain.descent_ok) ++report.audit.descent_violations;
      if (i < radii.size()) {
        ++report.audit.bounded_checks;
        if (distance(next.iterate, probes[i]) > radii[i] + options.bound_tol)
          ++report.audit.bounded_violations;
      }
    }

    state = std::move(next);
    const bool diverged = state.iterate.norm() > options.divergence_norm;
    const bool done = !diverged && converged(state, stop.tol);
    const bool keep = state.n <= options.history.dense_until ||
                      (options.history.stride > 0 && state.n % options.history.stride == 0);
    last_recorded = keep || done || diverged;
    if (last_recorded) report.trajectory.push_back(summarize(state, fejer_ok));
    if (diverged) {
      report.terminated_by = Termination::DivergenceGuard;
      report.note = fmt::format("iterate norm exceeded {} at n = {}", options.divergence_norm, state.n);
      break;
    }
    if (done) {
      report.terminated_by = Termination::Tolerance;
      break;
    }
    if (it + 1 == stop.max_iter && !last_recorded) {
      report.trajectory.push_back(summarize(state, fejer_ok));
      last_recorded = true;
    }
  }

  report.iterations = state.n;
  report.final_iterate = state.iterate;
  if (!probes.empty() && state.iterate.allFinite())
    report.vi_residual = vi_residual(problem, state.iterate, probes);
  return report;
}

}  // namespace vfb
