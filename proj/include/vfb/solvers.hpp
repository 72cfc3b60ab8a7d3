#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vfb/audit.hpp"
#include "vfb/hilbert.hpp"
#include "vfb/monotone.hpp"
#include "vfb/schedules.hpp"
#include "vfb/setvalued.hpp"

namespace vfb {

/// How the fixed-point hypothesis on the multivalued maps is read.
enum class FixedPointMode {
  /// Every common point q satisfies T1 q = T2 q = T3 q = {q}.
  Strict,
  /// The maps are replaced by their metric projections P_T; the strict
  /// hypothesis is dropped and selections are always nearest points.
  MetricProjection,
};

/// Find psi in K with 0 in backward_op(psi) + forward_op(psi) that is also a
/// common fixed point of T1, T2, T3, selected by the viscosity term
/// gamma * contraction - eta * strong_op.
struct ProblemInstance {
  std::string name;
  std::size_t dim = 1;
  ConvexSet K;
  SingleOp forward_op;      ///< alpha-inverse strongly monotone
  MaxMonotone backward_op;  ///< maximal monotone, closed-form resolvent
  MultiMap T1, T2;          ///< demicontractive
  MultiMap T3;              ///< quasi-nonexpansive
  SingleOp contraction;     ///< b-Lipschitz
  SingleOp strong_op;       ///< k-strongly monotone, L-Lipschitz
  ViscosityParams params;
  double beta_demi = 0.5;
  SelectionRule selection = SelectionRule::Metric;
  FixedPointMode mode = FixedPointMode::Strict;
  std::optional<Point> known_solution;
  std::vector<Point> known_common_points;
  /// Which demiclosedness assumptions the instance claims; bookkeeping only.
  bool claims_demiclosed = true;

  double alpha_ism() const;
};

/// Every q is within `tol` of being a forward-backward fixed point and a fixed
/// point of T1, T2 and T3.
bool certify_common_point(const ProblemInstance& problem, const Point& q, double tol = 1e-8);

/// Throws InvalidDescriptor / ConfigError when the instance contradicts its own
/// hypotheses (dimension, parameters, strict fixed points, uncertified points).
void validate_instance(const ProblemInstance& problem);

// ---------------------------------------------------------------------------

/// Intermediate points of one step, all computed from `source`.
struct StepTrace {
  Point source;
  Point fb_point;       ///< resolvent of the forward step
  Point pick_t1;        ///< element of T1(fb_point)
  Point relaxed_t1;     ///< averaged with pick_t1
  Point pick_t2;        ///< element of T2(relaxed_t1)
  Point relaxed_t2;     ///< averaged with pick_t2
  std::optional<Point> pick_t3;
  std::optional<Point> relaxed_t3;  ///< absent for the two-map scheme

  double alpha = 0.0;
  double lambda = 0.0;
  double mu = 0.0;

  double residual_t1 = 0.0;  ///< d(fb_point, T1 fb_point)
  double residual_t2 = 0.0;  ///< d(relaxed_t1, T2 relaxed_t1)
  std::optional<double> residual_t3;  ///< d(relaxed_t2, T3 relaxed_t2)
  double fb_residual = 0.0;  ///< ||source - fb_point||
};

struct IterState {
  std::size_t n = 0;
  Point iterate;
  /// How `iterate` was produced; absent for the initial state.
  std::optional<StepTrace> trace;
  double displacement = 0.0;
  std::optional<double> dist_to_solution;
};

struct SolverOptions {
  /// By default the two-map scheme applies the viscosity step to the T1
  /// relaxation; set this to use the T2 relaxation instead.
  bool sow_uses_t2_point = false;
};

IterState initial_state(const ProblemInstance& problem, const Point& start);

/// Three-map viscosity scheme with a mu-weighted anchor on the current iterate.
IterState step_main(const ProblemInstance& problem, const Schedule& schedule, const IterState& state);
/// Two-map scheme (T3 unused).
IterState step_sow(const ProblemInstance& problem, const Schedule& schedule, const IterState& state,
                   const SolverOptions& options = {});
/// Three-map scheme with the viscosity step applied to the T3 relaxation.
IterState step_fc(const ProblemInstance& problem, const Schedule& schedule, const IterState& state);
/// Plain forward-backward splitting.
IterState step_forward_backward(const ProblemInstance& problem, const Schedule& schedule,
                                const IterState& state);

enum class Algorithm { Main, Sow, Fc, ForwardBackward };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

// ---------------------------------------------------------------------------

struct StopRule {
  double tol = 1e-10;
  std::size_t max_iter = 1'000'000;
};

/// Keep every state up to `dense_until`, then every `stride`-th; the final
/// state is always kept.
struct HistoryPolicy {
  std::size_t dense_until = 10'000;
  std::size_t stride = 100;
};

struct RunOptions {
  SolverOptions solver;
  HistoryPolicy history;
  double audit_tol = kAuditTolerance;
  double bound_tol = 1e-8;
  double divergence_norm = 1e12;
};

enum class Termination { Tolerance, MaxIter, DivergenceGuard };
std::string to_string(Termination t);

struct IterSummary {
  std::size_t n = 0;
  Point iterate;
  double iterate_norm = 0.0;
  std::optional<double> dist_to_solution;
  std::optional<double> residual_t1;
  std::optional<double> residual_t2;
  std::optional<double> residual_t3;
  std::optional<double> fb_residual;
  bool fejer_ok = true;
  double alpha = 0.0;
};

struct RunAudit {
  std::size_t fejer_checks = 0;
  std::size_t fejer_violations = 0;
  /// ||fb_point - q|| <= ||source - q||, counted separately from the full chain.
  std::size_t descent_violations = 0;
  std::size_t bounded_checks = 0;
  std::size_t bounded_violations = 0;
  bool bounded_vacuous = false;
  double bound_radius = 0.0;
  double mu_bar = 0.0;

  std::size_t violations() const noexcept {
    return fejer_violations + descent_violations + bounded_violations;
  }
};

struct RunReport {
  Algorithm algorithm = Algorithm::Main;
  std::vector<IterSummary> trajectory;
  Termination terminated_by = Termination::MaxIter;
  Point final_iterate;
  std::size_t iterations = 0;
  RunAudit audit;
  std::optional<double> vi_residual;
  std::string note;
};

/// Iterates from `start` (projected onto K first) until the displacement and
/// every set residual the scheme forms are <= tol, or the budget runs out.
RunReport run(Algorithm algorithm, const ProblemInstance& problem, const Schedule& schedule,
              const Point& start, const StopRule& stop, const RunOptions& options = {});

/// max over probes q of <eta Phi(psi) - gamma phi(psi), psi - q>. Each probe must
/// certify as a common point (tolerance 1e-8) or UncertifiedProbe is thrown.
double vi_residual(const ProblemInstance& problem, const Point& psi, std::span<const Point> probes);

struct FejerChainAudit {
  /// ||relaxed_t3 - q||, ||relaxed_t2 - q||, ||relaxed_t1 - q||, ||fb_point - q||,
  /// ||source - q||, skipping the stages the scheme does not form.
  std::vector<double> distances;
  AuditRecord record;
  bool descent_ok = true;
};

/// Checks that the distances to q never increase along the stages of one step.
FejerChainAudit audit_fejer_chain(const IterState& state, const Point& q,
                                  double tol = kAuditTolerance);

/// max{||psi_0 - q||, ||gamma phi(q) - eta Phi q|| / (tau - b gamma - tau mu_bar)}.
/// Throws ConfigError when the denominator is not positive.
double bounded_radius(const ProblemInstance& problem, const Point& start, const Point& q,
                      double mu_bar);

/// ||psi_n - q|| <= bounded_radius(...) + tol along the iterates (iterates[0] is psi_0).
AuditRecord audit_bounded(std::span<const Point> iterates, const Point& q,
                          const ProblemInstance& problem, double mu_bar, double tol = 1e-8);

}  // namespace vfb
