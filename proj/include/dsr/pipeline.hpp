#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsr/enumerator.hpp"
#include "dsr/plan.hpp"
#include "dsr/problem.hpp"
#include "dsr/simulator.hpp"
#include "dsr/solver.hpp"
#include "dsr/validator.hpp"

namespace dsr {

enum class RunMode { Wca, Woca, Alg1, MaxCov, Enumerate };
RunMode parse_mode(const std::string& name);
const char* mode_name(RunMode m);

struct RunOptions {
  RunMode mode = RunMode::Wca;
  Variant enumerate_variant = Variant::WCA;  // for RunMode::Enumerate
  std::optional<SolverConfig> solver;
  ObjectiveOptions objective;
  EnumBudget budget;
  bool parallel = true;
  /// Electric path for the alg1 and fixed-route heuristics; when
  /// absent the protocol derives one (WOCA optimum, else breadth-first).
  std::optional<Plan> path_plan;
  /// Solver warm start; a heuristic plan is used when absent.
  std::optional<Plan> warm_start;
  bool heuristic_warm_start = true;
};

struct RunOutcome {
  bool ok = false;
  std::string error;
  Instance inst;
  std::string plan_source;
  std::string solver_status;
  std::optional<double> solver_objective;
  std::string mps;  // model of the run's variant
  ResolvedPlan rp;
  Plan plan;
  Timeline tl;
  ObjectiveReport obj;
  Verdict verdict;
  std::vector<std::string> notes;
};

/// Runs one protocol end to end. `scenario` must outlive the outcome.
/// Never throws for planning failures; `ok` is false with `error` set.
RunOutcome run_protocol(const Scenario& scenario, const RunOptions& opt);

/// Evaluates, scores and validates a plan on an instance.
void finish(RunOutcome& out, const ResolvedPlan& rp, const ObjectiveOptions& obj);

}  // namespace dsr
