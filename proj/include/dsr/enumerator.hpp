#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dsr/plan.hpp"
#include "dsr/problem.hpp"
#include "dsr/simulator.hpp"

namespace dsr {

struct EnumBudget {
  std::size_t crews = 2;
  std::size_t ecvs = 1;
  std::size_t cells = 5;
  std::size_t switches = 5;
  std::size_t faults = 2;  // faulted lines, switch-bearing or not
};

struct EnumOptions {
  EnumBudget budget;
  ObjectiveOptions objective;
  /// Fixed ECV routes (per ECV, W^C positions); governance may only use
  /// sites on these routes.
  std::optional<std::vector<std::vector<std::size_t>>> fixed_ca;
  bool parallel = true;
};

struct EnumResult {
  Plan plan;
  ResolvedPlan resolved;
  Timeline timeline;
  ObjectiveReport report;
  std::size_t evaluated = 0;  // informational; differs between serial and parallel runs
  std::size_t pruned = 0;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws BudgetExceeded when the instance is larger than the budget.
void check_budget(const Instance& inst, const EnumBudget& budget);

/// Exhaustive search for the plan with the least objective; ties go to the
/// smallest plan encoding. Throws std::runtime_error if no plan is feasible.
EnumResult enumerate_optimal(const Instance& inst, const EnumOptions& opt = {});

}  // namespace dsr
