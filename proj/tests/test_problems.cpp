#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vfb/errors.hpp"
#include "vfb/problems.hpp"

using namespace vfb;

TEST(HalvingMap1D, Images) {
  const MultiMap T = make_example1();
  EXPECT_TRUE(T(make_point({2})).is_singleton_at(make_point({1})));
  EXPECT_TRUE(T(make_point({0})).is_singleton_at(make_point({0})));
  EXPECT_DOUBLE_EQ(hausdorff(T(make_point({3})), T(make_point({0}))), 1.5);
  EXPECT_THROW(T(make_point({1, 2})), DimensionMismatch);
}

TEST(HalvingMap2D, Images) {
  const MultiMap T = make_example2();
  EXPECT_TRUE(T(make_point({2, 4})).is_singleton_at(make_point({1, 2})));
  EXPECT_TRUE(T(make_point({0, 0})).is_singleton_at(make_point({0, 0})));
  EXPECT_DOUBLE_EQ(distance_to_set(make_point({2, 0}), T(make_point({2, 0}))), 1.0);
}

TEST(OscillatingMap, Images) {
  const MultiMap T = make_example3();
  const double pi = std::numbers::pi;
  EXPECT_NEAR(canonical_point(T(make_point({2 / pi})))(0), 4 / (3 * pi), 1e-15);
  EXPECT_TRUE(T(make_point({0})).is_singleton_at(make_point({0})));
}

TEST(InclusionInstance, BoxAndBall) {
  const auto p = make_inclusion_instance(1, ConvexSet::box(make_point({-1}), make_point({1})), make_point({0}), 0.5);
  ASSERT_TRUE(p.known_solution.has_value());
  EXPECT_EQ(*p.known_solution, make_point({0}));
  EXPECT_EQ(p.alpha_ism(), 1.0);

  const auto b = make_named_instance("inclusion_ball2d");
  EXPECT_LE(b.known_solution->norm(), 1e-15);
  EXPECT_TRUE(certify_common_point(b, Point::Zero(2)));
}

TEST(InclusionInstance, ScaleOneLeavesOnlyTheInclusion) {
  const auto C = ConvexSet::box(make_point({0, 0}), make_point({1, 1}));
  const auto p = make_inclusion_instance(2, C, make_point({3, -2}), 1.0);
  EXPECT_EQ(*p.known_solution, make_point({1, 0}));
  EXPECT_TRUE(certify_common_point(p, make_point({1, 0})));
  EXPECT_FALSE(certify_common_point(p, make_point({0.5, 0.5})));
}

TEST(InclusionInstance, RejectsUnreachableOrigin) {
  const auto C = ConvexSet::box(make_point({0, 0}), make_point({1, 1}));
  try {
    make_inclusion_instance(2, C, make_point({3, -2}), 0.5);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.condition(), "P_C(a) = 0");
  }
  EXPECT_THROW(make_inclusion_instance(2, C, make_point({0, 0}), 1.5), ConfigError);
  EXPECT_THROW(make_inclusion_instance(3, C, make_point({0, 0, 0}), 0.5), DimensionMismatch);
}

TEST(InclusionInstance, ContractionNeedsMatchingB) {
  InclusionOptions o;
  o.contraction_coef = 0.9;
  o.params.b = 0.5;
  EXPECT_THROW(make_inclusion_instance(1, ConvexSet::box(make_point({-1}), make_point({1})), make_point({0}), 0.5, o),
               ConfigError);
}

TEST(Catalog, EveryInstancePassesItsAudits) {
  for (const auto& id : named_instances()) {
    const ProblemInstance p = make_named_instance(id);
    const InstanceAudit audit = audit_instance(p, 1000, 42);
    for (const auto& [label, rec] : audit.records) {
      EXPECT_TRUE(rec.passed()) << id << ": " << label;
      EXPECT_GT(rec.checked, 0u) << id << ": " << label;
    }
    if (p.known_solution) {
      const double lambda = std::min(1.0, 2.0 * p.alpha_ism()) / 2.0;
      EXPECT_LE(fixed_point_residual(p.backward_op, p.forward_op, lambda, *p.known_solution), 1e-12) << id;
      for (const MultiMap* T : {&p.T1, &p.T2, &p.T3})
        EXPECT_EQ(distance_to_set(*p.known_solution, (*T)(*p.known_solution)), 0.0) << id;
    }
  }
  EXPECT_THROW(make_named_instance("nope"), InvalidDescriptor);
}

TEST(Sampling, DeterministicAndInRange) {
  const auto a = sample_points(3, 100, -10, 10, 5);
  const auto b = sample_points(3, 100, -10, 10, 5);
  ASSERT_EQ(a.size(), 100u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_LE(a[i].cwiseAbs().maxCoeff(), 10.0);
  }
  const auto grid = sample_points(1, 1000, -10, 10, 0);
  EXPECT_EQ(grid.front()(0), -10.0);
  EXPECT_EQ(grid.back()(0), 10.0);
  EXPECT_NE(sample_pairs(2, 5, -1, 1, 1)[0].first, sample_pairs(2, 5, -1, 1, 2)[0].first);
}
