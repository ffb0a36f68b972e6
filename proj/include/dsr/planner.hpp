#pragma once

#include <vector>

#include "dsr/plan.hpp"
#include "dsr/problem.hpp"
#include "dsr/simulator.hpp"

namespace dsr {

/// One closing of the electric path: switch index, the cell it is fed from
/// and the cell it energizes.
struct PathEdge {
  std::size_t sw = 0;
  std::size_t parent = 0;
  std::size_t child = 0;
};

/// Energization forest handed to the heuristics, as a system operator would.
struct ElectricPath {
  std::vector<PathEdge> edges;  // in switch order
};

ElectricPath path_from_plan(const Plan& plan, const Instance& inst);

/// Breadth-first forest from the source cells. Faulted and intact switches
/// are always part of it; other switches join in switch order while they
/// connect a dead part of the grid. Throws std::runtime_error when no
/// forest reaches every cell.
ElectricPath bfs_path(const Instance& inst);

/// Crew dispatch by the nearest-site rule for a given electric path: faults
/// first, then switches, every closing manual except remotely operable
/// switches that need no ECV. Closings start energized and become
/// de-energized where the crew reaches the switch before its feeding side
/// is live. Throws std::runtime_error if no feasible mode choice is found.
Plan algorithm1_dispatch(const Instance& inst, const ElectricPath& path);

/// Each ECV, in input order, parks at the free site reaching the most
/// remotely operable FTUs; ties go to the smaller site id.
std::vector<std::vector<std::size_t>> max_coverage_routes(const Instance& inst);

/// Fixed ECV routes plus the nearest-site crew rule: path switches that a
/// parked ECV covers are closed remotely, the rest by crews. Used for the
/// fixed-route protocol when no solver or enumerator is available. With
/// `use_ecv` false the ECVs still drive their routes but only intact
/// switches close remotely.
Plan fixed_ca_heuristic(const Instance& inst, const std::vector<std::vector<std::size_t>>& ca,
                        const ElectricPath& path, bool use_ecv = true);

/// Carries a plan made for the other variant (or for different ECV routes)
/// over to `inst`: closings and crew order are kept, intact switches close
/// remotely and leave the crew routes, ECVs follow `ca`, and modes are
/// re-settled. Throws std::runtime_error when no feasible schedule results.
Plan lift_plan(const Instance& inst, const Plan& plan, const std::vector<std::vector<std::size_t>>& ca);

}  // namespace dsr
