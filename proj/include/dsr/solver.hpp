#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "dsr/milp.hpp"

namespace dsr {

enum class SolveStatus { Optimal, Feasible, Infeasible, Timeout, Error };
const char* status_name(SolveStatus s);

/// Output file dialects: `native` is `status <word>`, `objective <real>`,
/// then `name value` lines; `cbc` is CBC's `solu` file; `gurobi_sol` is a
/// Gurobi .sol file.
enum class Dialect { Native, Cbc, GurobiSol };
Dialect parse_dialect(const std::string& name);

struct SolverConfig {
  /// Shell command with {input}, {output}, {time_limit}, {mip_gap} and
  /// optionally {start} placeholders.
  std::string command;
  Dialect dialect = Dialect::Native;
  double time_limit = 60.0;  // seconds
  double mip_gap = 0.0;
  double grace = 5.0;  // seconds past time_limit before the child is killed
};

struct SolveResult {
  SolveStatus status = SolveStatus::Error;
  std::optional<double> objective;
  Assignment values;
  std::string message;
};

SolveResult parse_solution(const std::string& text, Dialect dialect);

/// Writes `mps` to a private temp directory, runs the configured command and
/// parses its output. `start` (if any) is written in the native dialect and
/// passed through {start}; templates without {start} ignore it.
SolveResult solve_external(const std::string& mps, const SolverConfig& cfg, const Assignment* start = nullptr);

/// Native-dialect text for an assignment.
std::string format_solution(const Assignment& a, SolveStatus status, std::optional<double> objective);

/// A working solver on this machine: the bundled HiGHS adapter when Python
/// has highspy, otherwise a `cbc` binary on PATH. `adapter` is the path of
/// tools/highs_solve.py.
std::optional<SolverConfig> discover_solver(const std::filesystem::path& adapter);

}  // namespace dsr
