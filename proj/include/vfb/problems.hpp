#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vfb/solvers.hpp"

namespace vfb {

/// x -> {x/2} on R. Fixed point 0.
MultiMap make_example1(double beta = 0.5);
/// (x, y) -> {(x/2, y/2)} on R^2. Fixed point (0, 0).
MultiMap make_example2(double beta = 0.5);
/// psi -> {(2/3) psi sin(1/psi)} on R, with 0 -> {0}. Fixed point 0.
MultiMap make_example3(double beta = 0.5);

/// x -> {scale x} on R^d, fixed point 0 (every point is fixed when scale = 1).
MultiMap make_scale_map(std::size_t dim, double scale, OperatorClass declared);

struct InclusionOptions {
  ViscosityParams params;
  double beta_demi = 0.5;
  /// phi(x) = contraction_coef * x + contraction_offset; zero map by default.
  double contraction_coef = 0.0;
  std::optional<Point> contraction_offset;
  SelectionRule selection = SelectionRule::Metric;
  FixedPointMode mode = FixedPointMode::Strict;
};

/// Forward operator x - a, normal cone of C, scale maps for T1, T2, T3,
/// identity strong operator and feasible set K = C. The solution set of the
/// inclusion is {P_C(a)}; with scale < 1 this must be the origin, so P_C(a) = 0
/// is required (ConfigError otherwise).
ProblemInstance make_inclusion_instance(std::size_t dim, const ConvexSet& C, const Point& a,
                                        double scale, const InclusionOptions& options = {});

/// Every operator trivial: zero forward and backward parts, identity maps,
/// phi = 0, Phi = identity, eta = 1, K = R^d. Every point is a common point.
ProblemInstance make_trivial_instance(std::size_t dim, const InclusionOptions& options = {});

/// 1D inclusion instance on C = [-1, 1] with the oscillating map of example 3 as T1
/// and x -> {x/2} as T2 and T3.
ProblemInstance make_example3_instance(const InclusionOptions& options = {});

/// Catalog lookup by identifier with default parameters:
/// trivial, inclusion1d, inclusion2d, inclusion10d, inclusion_ball2d, example3.
ProblemInstance make_named_instance(const std::string& id);
std::vector<std::string> named_instances();

// ---------------------------------------------------------------------------

/// `count` points in [lo, hi]^dim: an even grid when dim = 1, seeded uniform draws otherwise.
std::vector<Point> sample_points(std::size_t dim, std::size_t count, double lo, double hi,
                                 std::uint64_t seed);
/// `count` seeded uniform pairs in [lo, hi]^dim.
std::vector<PointPair> sample_pairs(std::size_t dim, std::size_t count, double lo, double hi,
                                    std::uint64_t seed);

struct InstanceAudit {
  std::vector<std::pair<std::string, AuditRecord>> records;
  bool passed() const;
};

/// Certifies every declared operator class and modulus of the instance on
/// `samples` points (and as many pairs) drawn from [-10, 10]^d.
InstanceAudit audit_instance(const ProblemInstance& problem, std::size_t samples,
                             std::uint64_t seed);

}  // namespace vfb
