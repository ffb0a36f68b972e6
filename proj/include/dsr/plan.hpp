#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsr/problem.hpp"
#include "json.hpp"

namespace dsr {

struct CaRoute {
  std::string ecv;
  std::vector<std::string> sites;
  bool operator==(const CaRoute&) const = default;
};

struct RaRoute {
  std::string crew;
  std::vector<std::string> sites;
  bool operator==(const RaRoute&) const = default;
};

/// Closing of one switch from `from_cell` (already or later live) toward
/// `to_cell`. Mode is "AE", "AD", "ME" or "MD"; a bare "A" or "M" is kept as
/// written so the validator can report the missing sub-mode.
struct SwitchDecision {
  std::string sw;
  int from_cell = 0;
  int to_cell = 0;
  std::string mode;
  bool operator==(const SwitchDecision&) const = default;
};

struct ZEntry {
  std::string sw;
  std::string site;
  bool operator==(const ZEntry&) const = default;
};

struct ParentEntry {
  int cell = 0;
  std::string sw;
  bool operator==(const ParentEntry&) const = default;
};

struct Plan {
  std::vector<CaRoute> ca_routes;
  std::vector<RaRoute> ra_routes;
  std::vector<SwitchDecision> switch_decisions;
  std::vector<ZEntry> z_assignment;
  std::vector<ParentEntry> ea_parents;
  bool operator==(const Plan&) const = default;
};

nlohmann::json plan_to_json(const Plan& plan);
Plan plan_from_json(const nlohmann::json& doc);
Plan load_plan(const std::string& path);
/// Compact canonical text; used for tie-breaking and determinism checks.
std::string plan_encoding(const Plan& plan);

/// Index form of a plan used by the simulator and the enumerator.
struct SwitchOp {
  bool used = false;
  std::size_t parent = 0;  // cell index
  std::size_t child = 0;
  bool automatic = false;
  bool energized = false;
  std::optional<std::size_t> gov;  // ca_sites position
};

struct ResolvedPlan {
  std::vector<std::vector<std::size_t>> ca;  // per ECV, ca_sites positions
  std::vector<std::vector<std::size_t>> ra;  // per crew, ra_sites indices
  std::vector<SwitchOp> ops;                 // per instance switch
};

/// Structural defect that prevents a plan from being scheduled at all.
class PlanError : public std::runtime_error {
 public:
  PlanError(std::string tag, const std::string& message)
      : std::runtime_error("[" + tag + "] " + message), tag_(std::move(tag)) {}
  const std::string& tag() const { return tag_; }

 private:
  std::string tag_;
};

/// Throws PlanError on unknown ids, duplicate or conflicting entries, missing
/// sub-modes, or parent lists that disagree with the switch decisions.
ResolvedPlan resolve_plan(const Plan& plan, const Instance& inst);

/// Canonical plan: every fleet member listed in input order, decisions and
/// governance in switch order, parents by cell id.
Plan to_plan(const ResolvedPlan& rp, const Instance& inst);

}  // namespace dsr
