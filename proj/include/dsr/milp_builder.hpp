#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsr/milp.hpp"
#include "dsr/plan.hpp"
#include "dsr/problem.hpp"
#include "dsr/simulator.hpp"

namespace dsr {

struct BuildOptions {
  bool obj_ra_literal = false;
  /// When set, the ECV route table is fixed to these routes (per ECV,
  /// W^C positions); every other leg is forced to zero.
  std::optional<std::vector<std::vector<std::size_t>>> fixed_ca;
};

/// Builds the model matching the instance's variant.
MilpModel build_model(const Instance& inst, const BuildOptions& opt = {});
MilpModel build_wca(const Instance& inst, const BuildOptions& opt = {});
MilpModel build_woca(const Instance& inst, const BuildOptions& opt = {});

/// Equalities for switches that need neither an ECV nor a crew: exactly one
/// remote closing, no manual closing. build_model applies them already;
/// exposed so tests can check the rows in isolation.
void apply_partial_damage_fixes(MilpModel& m, const Instance& inst);

/// Variable assignment reproducing a plan and its timeline, including the
/// auxiliaries of unused switch directions.
Assignment plan_to_assignment(const ResolvedPlan& rp, const Timeline& tl, const Instance& inst,
                              const BuildOptions& opt = {});

/// Decodes route tables and mode binaries into a plan.
Plan solution_to_plan(const Assignment& a, const Instance& inst);

/// Variable-name helpers shared with the census tooling.
std::string ca_loc_name(const Instance& inst, std::size_t loc);
std::string ra_loc_name(const Instance& inst, std::size_t loc);
std::string dir_suffix(const Instance& inst, std::size_t from_cell, std::size_t to_cell);

}  // namespace dsr
