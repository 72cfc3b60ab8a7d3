#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vfb {

// ---------------------------------------------------------------------------
// Parameter sequences. Indices start at n = 1: the step that produces psi_n
// from psi_{n-1} reads every sequence at index n.

struct ConstantSeq {
  double value;
};

/// scale / (n + offset)^power, power > 0.
struct PowerDecay {
  double scale;
  double offset;
  double power;
};

/// 1 - scale / (n + offset)
struct ApproachOne {
  double scale;
  double offset;
};

/// values[n - 1]; reading past the end throws ScheduleExhausted.
struct Tabulated {
  std::vector<double> values;
};

/// Arbitrary user sequence. Only finite-horizon certification is possible.
struct CustomSeq {
  std::string label;
  std::function<double(std::size_t)> fn;
};

class Sequence {
 public:
  using Variant = std::variant<ConstantSeq, PowerDecay, ApproachOne, Tabulated, CustomSeq>;

  Sequence() : family_(ConstantSeq{0.5}) {}
  Sequence(Variant v);  // NOLINT(google-explicit-constructor)

  static Sequence constant(double c) { return Sequence(ConstantSeq{c}); }
  static Sequence harmonic(double scale = 1.0, double offset = 1.0, double power = 1.0) {
    return Sequence(PowerDecay{scale, offset, power});
  }
  static Sequence approach_one(double scale = 1.0, double offset = 1.0) {
    return Sequence(ApproachOne{scale, offset});
  }

  double operator()(std::size_t n) const;

  const Variant& family() const noexcept { return family_; }

  /// True for the closed-form families, whose limits are known exactly.
  bool is_family() const noexcept;
  std::optional<double> limit() const;
  /// Exact supremum over n >= 1 for closed-form families.
  std::optional<double> supremum() const;
  /// Whether the series sum_n s_n converges, when decidable.
  std::optional<bool> summable() const;

  std::string describe() const;

 private:
  Variant family_;
};

struct Schedule {
  Sequence alpha, beta, gamma, theta, mu, lambda;
  double beta_demi = 0.5;  ///< demicontractivity constant of T1, T2
  double alpha_ism = 1.0;  ///< inverse strong monotonicity constant of the forward operator
  double lambda_lo = 0.5;  ///< lambda_n must stay in [lambda_lo, lambda_hi]
  double lambda_hi = 0.5;
  /// Require sum alpha_n < infinity instead of = infinity.
  bool summable_alpha = false;
};

/// Constants of the viscosity step: gamma phi(psi) and eta Phi(psi), with Phi
/// k-strongly monotone and L-Lipschitz and phi b-Lipschitz.
struct ViscosityParams {
  double gamma = 0.25;
  double eta = 1.0;
  double k = 1.0;
  double L = 1.0;
  double b = 1.0;

  double tau() const noexcept { return eta * (k - L * L * eta / 2.0); }
  /// Largest admissible sup mu_n (exclusive): tau (1 - mu) - gamma b > 0.
  double mu_ceiling() const noexcept { return (tau() - gamma * b) / tau(); }
};

/// Throws ConfigError naming "0 < η < 2k/L²" or "0 < γb < τ" when violated.
void check_params(const ViscosityParams& p);

struct ConditionResult {
  std::string id;
  std::string label;
  bool passed = false;
  /// Certified on the finite horizon only.
  bool empirical = false;
  std::string detail;
};

struct ValidationReport {
  std::size_t horizon = 0;
  std::vector<ConditionResult> conditions;

  bool passed() const;
  std::vector<std::string> failed_ids() const;
  const ConditionResult* find(const std::string& id) const;
  /// The first failing condition, or nullptr.
  const ConditionResult* first_failure() const;
};

ValidationReport validate(const Schedule& s, const ViscosityParams& p, std::size_t horizon);

/// alpha_n = 1/(n+1); beta_n = theta_n = (1 + beta_demi)/2; gamma_n = 1/2;
/// mu_n = min(1/2, 0.8 mu_ceiling); lambda_n = min(1, 2 alpha_ism)/2.
/// Throws ConfigError when the parameters are infeasible.
Schedule default_schedule(const ViscosityParams& p, double beta_demi, double alpha_ism);

}  // namespace vfb
