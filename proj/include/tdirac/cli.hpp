#pragma once

// Command-line front end: verify, solve, compare-kg, condition-a.
// Every command writes <out>/report.json; solve also writes the trajectory
// and diagnostics.csv.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdirac/clifford.hpp"
#include "tdirac/nonlinear.hpp"
#include "tdirac/solver.hpp"

namespace tdirac::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInvariantFailure = 1,
  kNonConvergence = 2,
  kConditionAFail = 3,
  kUsage = 64,
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  solver::SolveConfig solve;
  std::string out = "tdirac_out";
  std::uint64_t seed = 1;
  /// Radius-1 lattice, solver-dependent checks skipped.
  bool structural = false;
  /// Replaces the built-in representation (gamma_to_json layout).
  std::optional<nlohmann::json> gamma_override;

  double defect_budget = 1e-6;    // max_t V(t) / ||psi(t)||^2
  double distance_budget = 1e-5;  // compare-kg sup-t relative L^2 distance
  double hs_bound = 3.0;
  std::optional<double> bernstein_constant;
  double tail_rate = 0.0;
  bool write_frames = true;

  int verify_points = 100;
  int verify_radii = 1000;
  int verify_fields = 50;
  int bernstein_samples = 200;
  /// 0 picks 32 / 16 / 8 for d = 1 / 2 / 3 and 1 above.
  int verify_radius = 0;

  /// Flat object; unknown keys throw UsageError.
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// Throws UsageError.
  void validate() const;
};

struct CommandResult {
  int exit_code = kSuccess;
  nlohmann::json report;
};

/// The gamma set a run uses (override or built-in).
GammaSet resolve_gamma(const RunConfig& cfg);

/// Verification suites. Report lists every check with status pass / fail /
/// skipped, error, tolerance and margin = tolerance - error.
CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_solve(const RunConfig& cfg);
CommandResult cmd_compare_kg(const RunConfig& cfg);
CommandResult cmd_condition_a(const RunConfig& cfg);

/// Dispatches on cfg.command and writes <out>/report.json. Usage errors
/// are returned as kUsage with an "error" entry.
CommandResult run_command(const RunConfig& cfg);

/// Full command line, argv[0] included. Messages go to stdout / stderr.
int run(const std::vector<std::string>& args);

}  // namespace tdirac::cli
