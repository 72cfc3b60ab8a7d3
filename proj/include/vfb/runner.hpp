#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vfb/problems.hpp"

namespace vfb {

/// Exact CSV header of every per-cell trajectory file.
inline constexpr const char* kTrajectoryHeader =
    "n,psi_norm,dist_to_solution,delta_residual_T1,pi_residual_T2,phi_residual_T3,fb_residual,"
    "fejer_ok,step_size_alpha";

enum ExitCode : int { kExitOk = 0, kExitNotConverged = 1, kExitInvalidConfig = 2, kExitIo = 3 };

struct Cell {
  std::string id;
  Algorithm algorithm = Algorithm::Main;
  /// Effective configuration after sweep substitution.
  nlohmann::json config;
  ProblemInstance problem;
  Schedule schedule;
  Point start;
  StopRule stop;
  RunOptions options;
  ValidationReport validation;
  /// Sample count of the operator-class audit run before iterating; 0 disables it.
  std::size_t audit_samples = 0;
};

struct RunPlan {
  std::uint64_t seed = 0;
  std::vector<Cell> cells;
};

/// Parses a JSON run configuration and expands algorithm lists and the `sweep`
/// object (dotted path -> list of values) into a cartesian product of cells.
/// Every cell is validated; failures throw ConfigError naming the condition.
RunPlan parse_config(const std::string& text, std::optional<std::uint64_t> seed_override = {});
/// Reads the file then parses it; unreadable files throw IoError.
RunPlan load_config(const std::filesystem::path& path,
                    std::optional<std::uint64_t> seed_override = {});

struct CellResult {
  std::string id;
  RunReport report;
  InstanceAudit instance_audit;
  bool success = false;
};

struct ExecuteResult {
  int exit_code = kExitOk;
  std::vector<CellResult> cells;
};

/// Runs every cell and writes `<cell-id>.csv`, `<cell-id>.json` and
/// `summary.json` into `out_dir`. Write failures throw IoError.
ExecuteResult execute(const RunPlan& plan, const std::filesystem::path& out_dir);

/// CSV text of one trajectory, header included.
std::string trajectory_csv(const RunReport& report);
/// JSON summary of one cell.
nlohmann::json cell_summary(const Cell& cell, const CellResult& result);

}  // namespace vfb
