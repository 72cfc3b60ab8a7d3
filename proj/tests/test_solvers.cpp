#include <gtest/gtest.h>

#include <cmath>

#include "vfb/errors.hpp"
#include "vfb/problems.hpp"
#include "vfb/solvers.hpp"

using namespace vfb;

namespace {

// 1D: zero forward and backward parts, T1 = T2 = T3 = {x/2}, phi = 0, Phi = id, K = R.
ProblemInstance halving_instance() {
  ProblemInstance p;
  p.name = "halving";
  p.dim = 1;
  p.K = ConvexSet::whole_space();
  p.forward_op = ops::zero();
  p.backward_op = MaxMonotone::zero();
  p.T1 = make_example1();
  p.T2 = make_example1();
  p.T3 = make_scale_map(1, 0.5, QuasiNonexpansive{});
  p.contraction = ops::zero();
  p.strong_op = ops::identity();
  p.known_common_points = {Point::Zero(1)};
  return p;
}

Schedule hand_schedule() {
  Schedule s;
  s.alpha = Sequence::constant(0.5);
  s.beta = Sequence::constant(0.75);
  s.theta = Sequence::constant(0.75);
  s.gamma = Sequence::constant(0.5);
  s.mu = Sequence::constant(0.4);
  s.lambda = Sequence::constant(0.5);
  return s;
}

Schedule default_for(const ProblemInstance& p) {
  return default_schedule(p.params, p.beta_demi, p.alpha_ism());
}

ProblemInstance box_instance(std::size_t d) {
  return make_inclusion_instance(d, ConvexSet::box(Point::Constant(d, -1), Point::Constant(d, 1)),
                                 Point::Zero(d), 0.5);
}

}  // namespace

TEST(StepMain, HandComputedStep) {
  const auto p = halving_instance();
  const IterState s0 = initial_state(p, make_point({1.0}));
  const IterState s1 = step_main(p, hand_schedule(), s0);
  ASSERT_TRUE(s1.trace.has_value());
  const StepTrace& t = *s1.trace;
  EXPECT_EQ(s1.n, 1u);
  EXPECT_DOUBLE_EQ(t.fb_point(0), 1.0);
  EXPECT_DOUBLE_EQ(t.relaxed_t1(0), 0.875);
  EXPECT_DOUBLE_EQ(t.relaxed_t2(0), 0.765625);
  EXPECT_DOUBLE_EQ((*t.relaxed_t3)(0), 0.57421875);
  EXPECT_DOUBLE_EQ(s1.iterate(0), 0.5296875);
  EXPECT_DOUBLE_EQ(t.residual_t1, 0.5);
  EXPECT_DOUBLE_EQ(s1.displacement, 1.0 - 0.5296875);
}

TEST(StepSow, HandComputedStep) {
  const auto p = halving_instance();
  const IterState s1 = step_sow(p, hand_schedule(), initial_state(p, make_point({1.0})));
  EXPECT_DOUBLE_EQ(s1.iterate(0), 0.4375);
  EXPECT_FALSE(s1.trace->relaxed_t3.has_value());
  SolverOptions alt;
  alt.sow_uses_t2_point = true;
  const IterState s1b = step_sow(p, hand_schedule(), initial_state(p, make_point({1.0})), alt);
  EXPECT_DOUBLE_EQ(s1b.iterate(0), 0.5 * 0.765625);
}

TEST(StepFc, HandComputedStep) {
  const auto p = halving_instance();
  const IterState s1 = step_fc(p, hand_schedule(), initial_state(p, make_point({1.0})));
  EXPECT_DOUBLE_EQ(s1.iterate(0), 0.287109375);
}

TEST(StepForwardBackward, IsTheForwardBackwardPoint) {
  const auto p = box_instance(2);
  const Schedule s = default_for(p);
  const IterState s1 = step_forward_backward(p, s, initial_state(p, make_point({0.8, -0.4})));
  EXPECT_DOUBLE_EQ(s1.iterate(0), 0.4);
  EXPECT_DOUBLE_EQ(s1.iterate(1), -0.2);
}

TEST(TrivialCollapse, ClosedFormUpdates) {
  const auto p = make_trivial_instance(3);
  const Schedule s = default_for(p);
  IterState main = initial_state(p, make_point({1, -2, 0.5}));
  IterState sow = main, fc = main;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = main.n + 1;
    const double factor_main = 1 - s.alpha(n) * (1 - s.mu(n));
    const double factor_plain = 1 - s.alpha(n);
    const IterState nm = step_main(p, s, main);
    const IterState ns = step_sow(p, s, sow);
    const IterState nf = step_fc(p, s, fc);
    EXPECT_NEAR(nm.iterate.norm() / main.iterate.norm(), factor_main, 1e-12);
    EXPECT_NEAR(ns.iterate.norm() / sow.iterate.norm(), factor_plain, 1e-12);
    EXPECT_NEAR(nf.iterate.norm() / fc.iterate.norm(), factor_plain, 1e-12);
    // every intermediate point equals the source
    const auto chain = audit_fejer_chain(nm, Point::Zero(3));
    for (double dist : chain.distances) EXPECT_NEAR(dist, main.iterate.norm(), 1e-15);
    main = nm;
    sow = ns;
    fc = nf;
  }
}

TEST(FejerChain, HandExample) {
  const auto p = halving_instance();
  const IterState s1 = step_main(p, hand_schedule(), initial_state(p, make_point({1.0})));
  const auto chain = audit_fejer_chain(s1, Point::Zero(1));
  const std::vector<double> expected = {0.57421875, 0.765625, 0.875, 1.0, 1.0};
  ASSERT_EQ(chain.distances.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_DOUBLE_EQ(chain.distances[i], expected[i]);
  EXPECT_TRUE(chain.record.passed());
  EXPECT_TRUE(chain.descent_ok);
}

TEST(FejerChain, StateAtCommonPoint) {
  const auto p = box_instance(2);
  const IterState s1 = step_main(p, default_for(p), initial_state(p, Point::Zero(2)));
  const auto chain = audit_fejer_chain(s1, Point::Zero(2));
  for (double d : chain.distances) EXPECT_EQ(d, 0.0);
  EXPECT_TRUE(chain.record.passed());
}

TEST(Run, ZeroBudget) {
  const auto p = box_instance(1);
  StopRule stop;
  stop.max_iter = 0;
  const auto r = run(Algorithm::Main, p, default_for(p), make_point({0.5}), stop);
  EXPECT_EQ(r.trajectory.size(), 1u);
  EXPECT_EQ(r.terminated_by, Termination::MaxIter);
  EXPECT_EQ(r.iterations, 0u);
}

TEST(Run, ConstructedInstanceConverges) {
  for (std::size_t d : {1u, 2u, 10u}) {
    const auto p = box_instance(d);
    StopRule stop;
    stop.tol = 1e-10;
    const auto r = run(Algorithm::Main, p, default_for(p), Point::Constant(d, 0.9), stop);
    EXPECT_EQ(r.terminated_by, Termination::Tolerance);
    EXPECT_LE(r.final_iterate.norm(), 1e-6);
    EXPECT_EQ(r.audit.violations(), 0u);
    ASSERT_TRUE(r.vi_residual.has_value());
    EXPECT_LE(*r.vi_residual, 1e-8);
    // residual decay before termination
    const auto& last = r.trajectory.back();
    EXPECT_LE(*last.residual_t1, stop.tol);
    EXPECT_LE(*last.residual_t2, stop.tol);
    EXPECT_LE(*last.residual_t3, stop.tol);
  }
}

TEST(Run, TrivialCollapseReachesOrigin) {
  const auto p = make_trivial_instance(1);
  Schedule s = default_for(p);
  s.alpha = Sequence::harmonic(1.0, 1.0, 0.5);
  StopRule stop;
  stop.tol = 1e-10;
  const auto r = run(Algorithm::Main, p, s, make_point({1.0}), stop);
  EXPECT_EQ(r.terminated_by, Termination::Tolerance);
  EXPECT_LE(std::abs(r.final_iterate(0)), 1e-8);
  for (std::size_t i = 1; i < r.trajectory.size(); ++i)
    EXPECT_LT(r.trajectory[i].iterate_norm, r.trajectory[i - 1].iterate_norm);
}

TEST(Run, DivergenceGuard) {
  ProblemInstance p = halving_instance();
  p.T1 = make_scale_map(1, 3.0, QuasiNonexpansive{});
  p.T2 = p.T1;
  p.T3 = p.T1;
  Schedule s = hand_schedule();
  s.mu = Sequence::constant(0.9);
  const auto r = run(Algorithm::Main, p, s, make_point({1.0}), StopRule{1e-10, 100000});
  EXPECT_EQ(r.terminated_by, Termination::DivergenceGuard);
  EXPECT_GT(r.final_iterate.norm(), 1e12);
}

TEST(Run, HistoryStride) {
  const auto p = make_trivial_instance(1);
  RunOptions o;
  o.history.dense_until = 10;
  o.history.stride = 7;
  const auto r = run(Algorithm::Main, p, default_for(p), make_point({1.0}), StopRule{1e-30, 50}, o);
  std::vector<std::size_t> ns;
  for (const auto& row : r.trajectory) ns.push_back(row.n);
  const std::vector<std::size_t> expected = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 14, 21, 28, 35, 42, 49, 50};
  EXPECT_EQ(ns, expected);
}

TEST(RunProperty, SelectionRulesAgreeOnSingletonImages) {
  auto p = box_instance(2);
  const Schedule s = default_for(p);
  const auto a = run(Algorithm::Main, p, s, make_point({0.7, -0.3}), StopRule{1e-12, 500});
  p.selection = SelectionRule::FirstEnumerated;
  const auto b = run(Algorithm::Main, p, s, make_point({0.7, -0.3}), StopRule{1e-12, 500});
  ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) EXPECT_EQ(a.trajectory[i].iterate, b.trajectory[i].iterate);
}

TEST(RunProperty, AlgorithmsAgree) {
  const auto p = make_named_instance("inclusion_ball2d");
  const Schedule s = default_for(p);
  std::vector<Point> finals;
  for (Algorithm a : {Algorithm::Main, Algorithm::Sow, Algorithm::Fc}) {
    const auto r = run(a, p, s, make_point({1.5, 2.0}), StopRule{1e-10, 1000000});
    EXPECT_EQ(r.terminated_by, Termination::Tolerance) << to_string(a);
    EXPECT_LE(r.final_iterate.norm(), 1e-6) << to_string(a);
    EXPECT_EQ(r.audit.violations(), 0u) << to_string(a);
    finals.push_back(r.final_iterate);
  }
  for (std::size_t i = 0; i < finals.size(); ++i)
    for (std::size_t j = i + 1; j < finals.size(); ++j) EXPECT_LE((finals[i] - finals[j]).norm(), 2e-4);
}

TEST(ViResidual, Examples) {
  const auto p = make_trivial_instance(1);
  const std::vector<Point> probes = {make_point({1.0}), make_point({-1.0})};
  EXPECT_EQ(vi_residual(p, make_point({0.0}), probes), 0.0);
  EXPECT_DOUBLE_EQ(vi_residual(p, make_point({0.5}), std::vector<Point>{make_point({0.0})}), 0.25);
  const auto q = box_instance(1);
  EXPECT_EQ(vi_residual(q, make_point({0.0}), std::vector<Point>{make_point({0.0})}), 0.0);
  EXPECT_THROW(vi_residual(q, make_point({0.0}), std::vector<Point>{make_point({0.5})}), UncertifiedProbe);
  EXPECT_THROW(vi_residual(q, make_point({0.0}), std::vector<Point>{}), InvalidDescriptor);
}

TEST(Bounded, RadiusAndAudit) {
  const auto p = make_trivial_instance(1);
  EXPECT_DOUBLE_EQ(bounded_radius(p, make_point({2.0}), make_point({0.0}), 0.4), 2.0);

  InclusionOptions o;
  o.contraction_coef = 0.5;
  o.contraction_offset = make_point({0.3});
  o.params.b = 0.5;
  const auto q = make_inclusion_instance(1, ConvexSet::box(make_point({-1}), make_point({1})), make_point({0}),
                                         0.5, o);
  // ||gamma phi(0) - Phi 0|| / (tau - b gamma - tau mu) = 0.075 / (0.5 - 0.125 - 0.2)
  EXPECT_NEAR(bounded_radius(q, make_point({0.0}), make_point({0.0}), 0.4), 0.075 / 0.175, 1e-15);
  EXPECT_THROW(bounded_radius(q, make_point({0.0}), make_point({0.0}), 0.8), ConfigError);

  const std::vector<Point> shrinking = {make_point({1.0}), make_point({0.6}), make_point({0.2})};
  EXPECT_TRUE(audit_bounded(shrinking, make_point({0.0}), p, 0.4).passed());
  const std::vector<Point> growing = {make_point({1.0}), make_point({1.5})};
  EXPECT_FALSE(audit_bounded(growing, make_point({0.0}), p, 0.4).passed());
}

TEST(Bounded, StartAtCommonPointStaysWithinConstantTerm) {
  InclusionOptions o;
  o.contraction_coef = 0.5;
  o.contraction_offset = make_point({0.3, -0.2});
  o.params.b = 0.5;
  const auto q = make_inclusion_instance(2, ConvexSet::box(Point::Constant(2, -1), Point::Constant(2, 1)),
                                         Point::Zero(2), 0.5, o);
  const auto r = run(Algorithm::Main, q, default_for(q), Point::Zero(2), StopRule{1e-12, 5000});
  EXPECT_EQ(r.audit.bounded_violations, 0u);
  EXPECT_GT(r.audit.bounded_checks, 0u);
  EXPECT_FALSE(r.audit.bounded_vacuous);
  std::vector<Point> iterates;
  for (const auto& row : r.trajectory) iterates.push_back(row.iterate);
  EXPECT_TRUE(audit_bounded(iterates, Point::Zero(2), q, r.audit.mu_bar).passed());
}

TEST(Instance, ValidationErrors) {
  ProblemInstance p = halving_instance();
  p.T1 = MultiMap{"fat", [](const Point& x) { return SetImage::ball(x / 2, 0.1); }, Demicontractive{0.5},
                  {Point::Zero(1)}};
  try {
    validate_instance(p);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.condition(), "T₁q = T₂q = T₃q = {q}");
  }
  ProblemInstance q = halving_instance();
  q.selection = SelectionRule::FirstEnumerated;
  q.mode = FixedPointMode::MetricProjection;
  EXPECT_THROW(validate_instance(q), ConfigError);
  EXPECT_TRUE(certify_common_point(halving_instance(), Point::Zero(1)));
  EXPECT_FALSE(certify_common_point(halving_instance(), make_point({0.1})));
}

TEST(Algorithm, Names) {
  for (Algorithm a : {Algorithm::Main, Algorithm::Sow, Algorithm::Fc, Algorithm::ForwardBackward})
    EXPECT_EQ(algorithm_from_string(to_string(a)), a);
  EXPECT_EQ(algorithm_from_string("fb"), Algorithm::ForwardBackward);
  EXPECT_THROW(algorithm_from_string("newton"), InvalidDescriptor);
}
