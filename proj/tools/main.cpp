#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vfb/errors.hpp"
#include "vfb/runner.hpp"

namespace {

int report_config_error(const vfb::ConfigError& e) {
  std::cerr << "invalid config: " << e.what() << "\n";
  return vfb::kExitInvalidConfig;
}

int cmd_run(const std::string& config, const std::string& out, std::optional<std::uint64_t> seed) {
  try {
    const vfb::RunPlan plan = vfb::load_config(config, seed);
    const vfb::ExecuteResult result = vfb::execute(plan, out);
    for (const auto& c : result.cells)
      std::cout << fmt::format("{} {} iterations={} {}\n", c.id, vfb::to_string(c.report.terminated_by),
                               c.report.iterations, c.success ? "ok" : "FAILED");
    return result.exit_code;
  } catch (const vfb::ConfigError& e) {
    return report_config_error(e);
  } catch (const vfb::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return vfb::kExitIo;
  }
}

int cmd_validate(const std::string& config, std::optional<std::uint64_t> seed) {
  try {
    const vfb::RunPlan plan = vfb::load_config(config, seed);
    for (const auto& c : plan.cells) {
      std::size_t empirical = 0;
      for (const auto& cond : c.validation.conditions) empirical += cond.empirical ? 1 : 0;
      std::cout << fmt::format("{} valid ({} conditions, {} certified on the horizon only)\n", c.id,
                               c.validation.conditions.size(), empirical);
    }
    return vfb::kExitOk;
  } catch (const vfb::ConfigError& e) {
    return report_config_error(e);
  } catch (const vfb::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return vfb::kExitIo;
  }
}

int cmd_check(const std::string& id, std::size_t samples, std::uint64_t seed) {
  try {
    const vfb::ProblemInstance p = vfb::make_named_instance(id);
    const vfb::InstanceAudit audit = vfb::audit_instance(p, samples, seed);
    for (const auto& [label, rec] : audit.records)
      std::cout << fmt::format("{:<36} {} checked={} violations={} worst_slack={:.3g}{}\n", label,
                               rec.passed() ? "PASS" : "FAIL", rec.checked, rec.violations,
                               rec.worst_slack, rec.vacuous ? " (vacuous)" : "");
    return audit.passed() ? vfb::kExitOk : vfb::kExitNotConverged;
  } catch (const vfb::InvalidDescriptor& e) {
    std::cerr << e.what() << "\n";
    return vfb::kExitInvalidConfig;
  } catch (const vfb::ConfigError& e) {
    return report_config_error(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viscosity forward-backward splitting runner"};
  app.require_subcommand(1);

  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Execute every cell of a run configuration");
  run->add_option("config", config, "JSON run configuration")->required();
  run->add_option("--out", out, "Output directory");
  run->add_option("--seed", seed, "Override the config seed");

  auto* validate = app.add_subcommand("validate", "Parse and validate a configuration without running");
  validate->add_option("config", config, "JSON run configuration")->required();
  validate->add_option("--seed", seed, "Override the config seed");

  std::string instance;
  std::size_t samples = 1000;
  std::uint64_t check_seed = 0;
  auto* check = app.add_subcommand("check", "Run the operator-class audits of a catalog instance");
  check->add_option("instance", instance, "Instance id")->required();
  check->add_option("--samples", samples, "Sample points and pairs");
  check->add_option("--seed", check_seed, "Sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : vfb::kExitInvalidConfig;
  }

  if (*run) return cmd_run(config, out, seed);
  if (*validate) return cmd_validate(config, seed);
  return cmd_check(instance, samples, check_seed);
}
