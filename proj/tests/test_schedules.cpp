#include <gtest/gtest.h>

#include <random>

#include "vfb/errors.hpp"
#include "vfb/schedules.hpp"

using namespace vfb;

namespace {

ViscosityParams base_params() { return {}; }  // gamma 0.25, eta 1, k = L = b = 1

bool failed(const ValidationReport& r, const std::string& id) {
  const auto* c = r.find(id);
  return c != nullptr && !c->passed;
}

}  // namespace

TEST(Sequence, FamiliesEvaluate) {
  const auto h = Sequence::harmonic();
  EXPECT_DOUBLE_EQ(h(1), 0.5);
  EXPECT_DOUBLE_EQ(h(3), 0.25);
  EXPECT_EQ(h.limit(), 0.0);
  EXPECT_EQ(h.summable(), false);
  EXPECT_EQ(Sequence::harmonic(1, 1, 2).summable(), true);
  const auto one = Sequence::approach_one(1, 1);
  EXPECT_DOUBLE_EQ(one(1), 0.5);
  EXPECT_EQ(one.limit(), 1.0);
  EXPECT_EQ(one.supremum(), 1.0);
  EXPECT_EQ(Sequence::constant(0.3).supremum(), 0.3);
}

TEST(Sequence, TabulatedAndCustom) {
  const Sequence t(Tabulated{{0.1, 0.2}});
  EXPECT_EQ(t(2), 0.2);
  EXPECT_THROW(t(3), ScheduleExhausted);
  EXPECT_FALSE(t.is_family());
  const Sequence c(CustomSeq{"half", [](std::size_t) { return 0.5; }});
  EXPECT_EQ(c(1000), 0.5);
  EXPECT_FALSE(c.limit().has_value());
  EXPECT_THROW(Sequence(Tabulated{{}}), InvalidDescriptor);
  EXPECT_THROW(Sequence::harmonic(1, 1, 0), InvalidDescriptor);
}

TEST(Params, TauAndCeiling) {
  const ViscosityParams p = base_params();
  EXPECT_DOUBLE_EQ(p.tau(), 0.5);
  EXPECT_DOUBLE_EQ(p.mu_ceiling(), 0.5);
  EXPECT_NO_THROW(check_params(p));
  ViscosityParams bad = p;
  bad.eta = 2.0;
  try {
    check_params(bad);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.condition(), "0 < η < 2k/L²");
  }
  bad = p;
  bad.gamma = 0.5;  // gamma b = tau
  try {
    check_params(bad);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.condition(), "0 < γb < τ");
  }
}

TEST(DefaultSchedule, Examples) {
  const Schedule s = default_schedule(base_params(), 0.5, 1.0);
  EXPECT_DOUBLE_EQ(s.beta(1), 0.75);
  EXPECT_DOUBLE_EQ(s.theta(7), 0.75);
  EXPECT_DOUBLE_EQ(s.mu(1), 0.4);
  EXPECT_GT(0.5 * (1 - s.mu(1)), 0.25);
  EXPECT_DOUBLE_EQ(s.lambda(1), 0.5);
  EXPECT_DOUBLE_EQ(s.alpha(1), 0.5);
  EXPECT_TRUE(validate(s, base_params(), 1000).passed());

  ViscosityParams edge = base_params();
  edge.gamma = 0.5;
  EXPECT_THROW(default_schedule(edge, 0.5, 1.0), ConfigError);
}

TEST(Validate, HandExampleAllPass) {
  ViscosityParams p = base_params();
  p.gamma = 0.2;  // gamma b < tau / 2, so mu = 1/2 stays below the ceiling 0.6
  Schedule s = default_schedule(p, 0.3, 2.0);
  s.gamma = Sequence::constant(0.5);
  s.mu = Sequence::constant(0.5);
  const auto r = validate(s, p, 500);
  EXPECT_TRUE(r.passed()) << (r.first_failure() ? r.first_failure()->id : "");
}

TEST(Validate, BetaAtDemicontractivityConstantFails) {
  Schedule s = default_schedule(base_params(), 0.5, 1.0);
  s.beta = Sequence::constant(0.5);
  const auto r = validate(s, base_params(), 100);
  EXPECT_FALSE(r.passed());
  EXPECT_TRUE(failed(r, "ii.beta_liminf"));
  EXPECT_TRUE(failed(r, "ii.beta_range"));
  EXPECT_FALSE(failed(r, "ii.theta_liminf"));
}

TEST(Validate, GammaApproachingOneFails) {
  Schedule s = default_schedule(base_params(), 0.5, 1.0);
  s.gamma = Sequence::approach_one(1.0, 1.0);  // 1 - 1/(n+1)
  const auto r = validate(s, base_params(), 100);
  EXPECT_TRUE(failed(r, "iii.gamma_liminf"));
  EXPECT_FALSE(failed(r, "range.gamma"));
  EXPECT_FALSE(r.find("iii.gamma_liminf")->empirical);
}

TEST(Validate, InfeasibleGammaB) {
  Schedule s = default_schedule(base_params(), 0.5, 1.0);
  ViscosityParams p = base_params();
  p.gamma = 0.6;
  const auto r = validate(s, p, 10);
  EXPECT_TRUE(failed(r, "params.gamma_b"));
  EXPECT_EQ(r.find("params.gamma_b")->label, "0 < γb < τ");
}

TEST(Validate, MuAtCeilingFails) {
  Schedule s = default_schedule(base_params(), 0.5, 1.0);
  s.mu = Sequence::constant(0.5);
  EXPECT_TRUE(failed(validate(s, base_params(), 10), "mu.bound"));
}

TEST(Validate, SummabilityModes) {
  Schedule s = default_schedule(base_params(), 0.5, 1.0);
  EXPECT_FALSE(failed(validate(s, base_params(), 10), "i.alpha_sum"));
  s.summable_alpha = true;
  EXPECT_TRUE(failed(validate(s, base_params(), 10), "i.alpha_sum"));
  s.alpha = Sequence::harmonic(1, 1, 2);
  EXPECT_TRUE(validate(s, base_params(), 10).passed());
}

TEST(Validate, LambdaIntervalRespectsInverseStrongMonotonicity) {
  Schedule s = default_schedule(base_params(), 0.5, 0.25);  // 2 alpha = 0.5
  EXPECT_DOUBLE_EQ(s.lambda(1), 0.25);
  EXPECT_TRUE(validate(s, base_params(), 10).passed());
  s.lambda = Sequence::constant(0.6);
  s.lambda_lo = s.lambda_hi = 0.6;
  EXPECT_TRUE(failed(validate(s, base_params(), 10), "i.lambda_interval"));
}

TEST(Validate, CustomSequencesAreEmpirical) {
  Schedule s = default_schedule(base_params(), 0.5, 1.0);
  s.gamma = Sequence(CustomSeq{"flat", [](std::size_t) { return 0.5; }});
  const auto r = validate(s, base_params(), 50);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.find("iii.gamma_liminf")->empirical);
}

TEST(ValidateProperty, DefaultScheduleFeasibleParams) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::uniform_real_distribution<double> mod(0.2, 3.0);
  for (int i = 0; i < 300; ++i) {
    ViscosityParams p;
    p.k = mod(rng);
    p.L = p.k + mod(rng);  // L >= k
    p.eta = u(rng) * 2 * p.k / (p.L * p.L);
    p.b = mod(rng);
    p.gamma = u(rng) * p.tau() / p.b;
    const double beta_demi = u(rng) * 0.99;
    const double alpha_ism = mod(rng);
    const auto r = validate(default_schedule(p, beta_demi, alpha_ism), p, 2000);
    EXPECT_TRUE(r.passed()) << (r.first_failure() ? r.first_failure()->id : "");
  }
}

TEST(ValidateProperty, FailuresPersistWithHorizon) {
  Schedule s = default_schedule(base_params(), 0.5, 1.0);
  s.beta = Sequence::approach_one(1.0, 1.0);
  for (std::size_t h : {10u, 100u, 1000u}) EXPECT_TRUE(failed(validate(s, base_params(), h), "ii.beta_liminf"));
}
