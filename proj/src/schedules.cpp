#include "vfb/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "vfb/errors.hpp"

namespace vfb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Sequence::Sequence(Variant v) : family_(std::move(v)) {
  std::visit(overloaded{
                 [](const ConstantSeq& c) {
                   if (!std::isfinite(c.value)) throw InvalidDescriptor("constant sequence must be finite");
                 },
                 [](const PowerDecay& p) {
                   if (!(p.power > 0.0) || !(p.offset >= 0.0) || !std::isfinite(p.scale))
                     throw InvalidDescriptor("power-decay sequence needs power > 0 and offset >= 0");
                 },
                 [](const ApproachOne& a) {
                   if (!(a.scale > 0.0) || !(a.offset >= 0.0))
                     throw InvalidDescriptor("approach-one sequence needs scale > 0 and offset >= 0");
                 },
                 [](const Tabulated& t) {
                   if (t.values.empty()) throw InvalidDescriptor("tabulated sequence is empty");
                 },
                 [](const CustomSeq& c) {
                   if (!c.fn) throw InvalidDescriptor("custom sequence has no function");
                 },
             },
             family_);
}

double Sequence::operator()(std::size_t n) const {
  return std::visit(overloaded{
                        [](const ConstantSeq& c) { return c.value; },
                        [n](const PowerDecay& p) {
                          return p.scale / std::pow(double(n) + p.offset, p.power);
                        },
                        [n](const ApproachOne& a) { return 1.0 - a.scale / (double(n) + a.offset); },
                        [n](const Tabulated& t) {
                          if (n == 0 || n > t.values.size())
                            throw ScheduleExhausted(
                                fmt::format("tabulated sequence has no entry for n = {}", n));
                          return t.values[n - 1];
                        },
                        [n](const CustomSeq& c) { return c.fn(n); },
                    },
                    family_);
}

bool Sequence::is_family() const noexcept {
  return std::holds_alternative<ConstantSeq>(family_) || std::holds_alternative<PowerDecay>(family_) ||
         std::holds_alternative<ApproachOne>(family_);
}

std::optional<double> Sequence::limit() const {
  return std::visit(overloaded{
                        [](const ConstantSeq& c) -> std::optional<double> { return c.value; },
                        [](const PowerDecay&) -> std::optional<double> { return 0.0; },
                        [](const ApproachOne&) -> std::optional<double> { return 1.0; },
                        [](const auto&) -> std::optional<double> { return std::nullopt; },
                    },
                    family_);
}

std::optional<double> Sequence::supremum() const {
  return std::visit(overloaded{
                        [](const ConstantSeq& c) -> std::optional<double> { return c.value; },
                        [](const PowerDecay& p) -> std::optional<double> {
                          // monotone in n; the extreme sits at n = 1 or at the limit 0
                          return std::max(0.0, p.scale / std::pow(1.0 + p.offset, p.power));
                        },
                        [](const ApproachOne&) -> std::optional<double> { return 1.0; },
                        [](const auto&) -> std::optional<double> { return std::nullopt; },
                    },
                    family_);
}

std::optional<bool> Sequence::summable() const {
  return std::visit(overloaded{
                        [](const ConstantSeq& c) -> std::optional<bool> { return c.value == 0.0; },
                        [](const PowerDecay& p) -> std::optional<bool> {
                          return p.scale == 0.0 || p.power > 1.0;
                        },
                        [](const ApproachOne&) -> std::optional<bool> { return false; },
                        [](const auto&) -> std::optional<bool> { return std::nullopt; },
                    },
                    family_);
}

std::string Sequence::describe() const {
  return std::visit(overloaded{
                        [](const ConstantSeq& c) { return fmt::format("constant({})", c.value); },
                        [](const PowerDecay& p) {
                          return fmt::format("{}/(n+{})^{}", p.scale, p.offset, p.power);
                        },
                        [](const ApproachOne& a) { return fmt::format("1-{}/(n+{})", a.scale, a.offset); },
                        [](const Tabulated& t) { return fmt::format("table[{}]", t.values.size()); },
                        [](const CustomSeq& c) { return "custom(" + c.label + ")"; },
                    },
                    family_);
}

// ---------------------------------------------------------------------------

void check_params(const ViscosityParams& p) {
  if (!(p.k > 0.0 && p.L > 0.0))
    throw ConfigError("k > 0 and L > 0", fmt::format("k = {}, L = {}", p.k, p.L));
  if (!(p.eta > 0.0 && p.eta < 2.0 * p.k / (p.L * p.L)))
    throw ConfigError("0 < η < 2k/L²",
                      fmt::format("eta = {}, 2k/L^2 = {}", p.eta, 2.0 * p.k / (p.L * p.L)));
  const double gb = p.gamma * p.b;
  if (!(gb > 0.0 && gb < p.tau()))
    throw ConfigError("0 < γb < τ", fmt::format("gamma*b = {}, tau = {}", gb, p.tau()));
}

bool ValidationReport::passed() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionResult& c) { return c.passed; });
}

std::vector<std::string> ValidationReport::failed_ids() const {
  std::vector<std::string> out;
  for (const auto& c : conditions)
    if (!c.passed) out.push_back(c.id);
  return out;
}

const ConditionResult* ValidationReport::find(const std::string& id) const {
  for (const auto& c : conditions)
    if (c.id == id) return &c;
  return nullptr;
}

const ConditionResult* ValidationReport::first_failure() const {
  for (const auto& c : conditions)
    if (!c.passed) return &c;
  return nullptr;
}

namespace {

class Validator {
 public:
  Validator(ValidationReport& report, std::size_t horizon) : report_(report), horizon_(horizon) {}

  void add(std::string id, std::string label, bool passed, bool empirical, std::string detail = {}) {
    report_.conditions.push_back(
        {std::move(id), std::move(label), passed, empirical, std::move(detail)});
  }

  /// lo < s_n < hi for every n <= horizon. Returns false (and records) on failure
  /// or when a tabulated sequence ends before the horizon.
  void open_range(const std::string& id, const std::string& label, const Sequence& s, double lo,
                  double hi) {
    for (std::size_t n = 1; n <= horizon_; ++n) {
      double v = 0.0;
      try {
        v = s(n);
      } catch (const ScheduleExhausted&) {
        add(id, label, false, true, fmt::format("sequence ends at n = {}", n - 1));
        return;
      }
      if (!(v > lo && v < hi)) {
        add(id, label, false, !s.is_family(), fmt::format("value {} at n = {}", v, n));
        return;
      }
    }
    add(id, label, true, !s.is_family());
  }

  /// liminf_n f(s_n) > 0. Closed-form families evaluate f at the limit; other
  /// sequences use the minimum over the second half of the horizon.
  template <class F>
  void liminf_positive(const std::string& id, const std::string& label, const Sequence& s, F f) {
    if (const auto lim = s.limit()) {
      const double v = f(*lim);
      add(id, label, v > 0.0, false, fmt::format("limit value {}", v));
      return;
    }
    double worst = std::numeric_limits<double>::infinity();
    try {
      for (std::size_t n = std::max<std::size_t>(1, horizon_ / 2); n <= horizon_; ++n)
        worst = std::min(worst, f(s(n)));
    } catch (const ScheduleExhausted&) {
      add(id, label, false, true, "sequence ends before the horizon");
      return;
    }
    add(id, label, worst > 0.0, true, fmt::format("tail minimum {}", worst));
  }

  /// Maximum over the horizon, or the exact supremum for closed-form families.
  std::optional<double> sup(const Sequence& s) {
    if (const auto v = s.supremum()) return v;
    double best = -std::numeric_limits<double>::infinity();
    try {
      for (std::size_t n = 1; n <= horizon_; ++n) best = std::max(best, s(n));
    } catch (const ScheduleExhausted&) {
      return std::nullopt;
    }
    return best;
  }

 private:
  ValidationReport& report_;
  std::size_t horizon_;
};

}  // namespace

ValidationReport validate(const Schedule& s, const ViscosityParams& p, std::size_t horizon) {
  if (horizon == 0) throw InvalidDescriptor("validate: horizon must be >= 1");
  ValidationReport report;
  report.horizon = horizon;
  Validator v(report, horizon);

  // Parameter block.
  {
    const bool eta_ok = p.k > 0.0 && p.L > 0.0 && p.eta > 0.0 && p.eta < 2.0 * p.k / (p.L * p.L);
    v.add("params.eta", "0 < η < 2k/L²", eta_ok, false,
          fmt::format("eta = {}, k = {}, L = {}", p.eta, p.k, p.L));
    const double gb = p.gamma * p.b;
    v.add("params.gamma_b", "0 < γb < τ", eta_ok && gb > 0.0 && gb < p.tau(), false,
          fmt::format("gamma*b = {}, tau = {}", gb, p.tau()));
  }

  // Every sequence lives in (0,1).
  v.open_range("range.alpha", "α_n ∈ (0,1)", s.alpha, 0.0, 1.0);
  v.open_range("range.beta", "β_n ∈ (0,1)", s.beta, 0.0, 1.0);
  v.open_range("range.gamma", "γ_n ∈ (0,1)", s.gamma, 0.0, 1.0);
  v.open_range("range.theta", "θ_n ∈ (0,1)", s.theta, 0.0, 1.0);
  v.open_range("range.mu", "μ_n ∈ (0,1)", s.mu, 0.0, 1.0);
  v.open_range("range.lambda", "λ_n ∈ (0,1)", s.lambda, 0.0, 1.0);

  // (i)
  {
    const auto lim = s.alpha.limit();
    v.add("i.alpha_limit", "lim α_n = 0", lim ? *lim == 0.0 : true, !lim.has_value(),
          lim ? fmt::format("limit {}", *lim) : std::string("undecidable; not a closed-form family"));
    const auto summable = s.alpha.summable();
    if (s.summable_alpha) {
      v.add("i.alpha_sum", "Σ α_n < ∞", summable.value_or(true), !summable.has_value());
    } else {
      v.add("i.alpha_sum", "Σ α_n = ∞", summable ? !*summable : true, !summable.has_value());
    }

    const double cap = std::min(1.0, 2.0 * s.alpha_ism);
    bool ok = s.lambda_lo > 0.0 && s.lambda_lo <= s.lambda_hi && s.lambda_hi < cap;
    std::string detail = fmt::format("[a,b] = [{}, {}], min(1, 2α) = {}", s.lambda_lo, s.lambda_hi, cap);
    if (ok) {
      try {
        for (std::size_t n = 1; n <= horizon && ok; ++n) {
          const double l = s.lambda(n);
          if (l < s.lambda_lo || l > s.lambda_hi) {
            ok = false;
            detail = fmt::format("lambda_n = {} at n = {}", l, n);
          }
        }
      } catch (const ScheduleExhausted&) {
        ok = false;
        detail = "lambda sequence ends before the horizon";
      }
      if (ok) {
        if (const auto lim = s.lambda.limit(); lim && (*lim < s.lambda_lo || *lim > s.lambda_hi)) {
          ok = false;
          detail = fmt::format("limit {} leaves [a,b]", *lim);
        }
      }
    }
    v.add("i.lambda_interval", "λ_n ∈ [a,b] ⊂ (0, min{1,2α})", ok, !s.lambda.is_family(), detail);
  }

  // (ii)
  const double bd = s.beta_demi;
  v.open_range("ii.beta_range", "β_n ∈ (β,1)", s.beta, bd, 1.0);
  v.open_range("ii.theta_range", "θ_n ∈ (β,1)", s.theta, bd, 1.0);
  v.liminf_positive("ii.beta_liminf", "liminf (1−β_n)(β_n−β) > 0", s.beta,
                    [bd](double x) { return (1.0 - x) * (x - bd); });
  v.liminf_positive("ii.theta_liminf", "liminf (1−θ_n)(θ_n−β) > 0", s.theta,
                    [bd](double x) { return (1.0 - x) * (x - bd); });

  // (iii)
  const auto unit = [](double x) { return (1.0 - x) * x; };
  v.liminf_positive("iii.gamma_liminf", "liminf (1−γ_n)γ_n > 0", s.gamma, unit);
  v.liminf_positive("iii.beta_liminf", "liminf (1−β_n)β_n > 0", s.beta, unit);
  v.liminf_positive("iii.theta_liminf", "liminf (1−θ_n)θ_n > 0", s.theta, unit);

  // mu_n has to leave room in the boundedness induction.
  {
    const auto sup = v.sup(s.mu);
    const double ceiling = p.tau() > 0.0 ? p.mu_ceiling() : -std::numeric_limits<double>::infinity();
    const bool ok = sup && *sup < ceiling;
    v.add("mu.bound", "sup μ_n < (τ − γb)/τ", ok, !s.mu.is_family(),
          sup ? fmt::format("sup mu_n = {}, ceiling = {}", *sup, ceiling)
              : std::string("mu sequence ends before the horizon"));
  }
  return report;
}

Schedule default_schedule(const ViscosityParams& p, double beta_demi, double alpha_ism) {
  check_params(p);
  if (!(beta_demi >= 0.0 && beta_demi < 1.0))
    throw ConfigError("β ∈ [0,1)", fmt::format("beta_demi = {}", beta_demi));
  if (!(alpha_ism > 0.0)) throw ConfigError("α > 0", fmt::format("alpha_ism = {}", alpha_ism));

  Schedule s;
  s.beta_demi = beta_demi;
  s.alpha_ism = alpha_ism;
  s.alpha = Sequence::harmonic(1.0, 1.0, 1.0);
  s.beta = Sequence::constant((1.0 + beta_demi) / 2.0);
  s.theta = Sequence::constant((1.0 + beta_demi) / 2.0);
  s.gamma = Sequence::constant(0.5);
  s.mu = Sequence::constant(std::min(0.5, 0.8 * p.mu_ceiling()));
  const double lambda = std::min(1.0, 2.0 * alpha_ism) / 2.0;
  s.lambda = Sequence::constant(lambda);
  s.lambda_lo = lambda;
  s.lambda_hi = lambda;
  return s;
}

}  // namespace vfb
