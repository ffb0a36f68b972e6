#pragma once

#include <string>
#include <vector>

#include "dsr/scenario.hpp"

namespace dsr {

/// Each site goes to its nearest depot (travel depot -> site); ties go to the
/// lexicographically smallest depot id. Returns a depot index per site.
std::vector<std::size_t> assign_sites_to_depots(const std::vector<std::string>& sites,
                                                const std::vector<std::string>& depots,
                                                const TravelMatrix& travel);

/// Splits a depot's cluster between the crews stationed there. Crew c is
/// seeded with one site (the site nearest the depot for the first crew, then
/// farthest-point seeding); remaining sites, taken in order of their distance
/// to the nearest seed, join the nearest seed whose crew still has room under
/// the cap ceil(n / crews). Returns a crew index per site.
std::vector<std::size_t> assign_sites_to_crews(const std::vector<std::string>& sites,
                                               const std::vector<std::string>& crews,
                                               const std::string& depot, const TravelMatrix& travel);

/// Sum of depot -> site travel for an assignment.
double clustering_cost(const std::vector<std::string>& sites, const std::vector<std::string>& depots,
                       const std::vector<std::size_t>& assignment, const TravelMatrix& travel);

}  // namespace dsr
