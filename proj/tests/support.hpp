#pragma once

#include <algorithm>
#include <deque>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "dsr/enumerator.hpp"
#include "dsr/plan.hpp"
#include "dsr/planner.hpp"
#include "dsr/problem.hpp"
#include "dsr/scenario.hpp"
#include "dsr/simulator.hpp"
#include "dsr/solver.hpp"
#include "dsr/validator.hpp"

namespace dsr::test {

inline std::filesystem::path data_dir() { return DSR_DATA_DIR; }

/// tiny1 followed by data/tiny/*.json in name order.
inline std::vector<std::filesystem::path> tiny_fixtures() {
  std::vector<std::filesystem::path> out{data_dir() / "tiny1.json"};
  std::vector<std::filesystem::path> rest;
  for (const auto& e : std::filesystem::directory_iterator(data_dir() / "tiny"))
    if (e.path().extension() == ".json") rest.push_back(e.path());
  std::sort(rest.begin(), rest.end());
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

/// Instances keep a pointer to their scenario; this keeps scenarios alive
/// for the whole test process.
inline const Scenario& keep(Scenario sc) {
  static std::deque<Scenario> store;
  store.push_back(std::move(sc));
  return store.back();
}

inline const Scenario& fixture(const std::filesystem::path& p) { return keep(load_scenario(p)); }
inline const Scenario& fixture_text(const std::string& json) { return keep(parse_scenario_text(json)); }

inline std::optional<SolverConfig> solver() { return discover_solver(DSR_HIGHS_ADAPTER); }

/// A feasible plan with its earliest timeline.
struct Base {
  std::string name;
  Instance inst;
  Plan plan;
  Timeline tl;
};

inline Base base_of(const std::string& name, const Instance& inst, const Plan& plan) {
  return {name, inst, plan, evaluate(resolve_plan(plan, inst), inst)};
}

/// obj_sum of a plan, +inf when its timeline is infeasible.
inline double obj_sum_of(const Plan& plan, const Instance& inst) {
  ResolvedPlan rp = resolve_plan(plan, inst);
  Timeline tl = evaluate(rp, inst);
  return tl.feasible ? objectives(rp, tl, inst).obj_sum : std::numeric_limits<double>::infinity();
}

}  // namespace dsr::test
