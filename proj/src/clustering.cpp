#include "dsr/clustering.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace dsr {

namespace {

double leg(const TravelMatrix& t, const std::string& a, const std::string& b) {
  auto i = t.index_of(a), j = t.index_of(b);
  if (!i || !j) throw std::invalid_argument("travel matrix lacks " + (!i ? a : b));
  return t.at(*i, *j);
}

}  // namespace

std::vector<std::size_t> assign_sites_to_depots(const std::vector<std::string>& sites,
                                                const std::vector<std::string>& depots,
                                                const TravelMatrix& travel) {
  if (depots.empty()) throw std::invalid_argument("cannot cluster sites without a depot");
  std::vector<std::size_t> out;
  out.reserve(sites.size());
  for (const auto& s : sites) {
    std::size_t best = 0;
    for (std::size_t d = 1; d < depots.size(); ++d) {
      double a = leg(travel, depots[d], s), b = leg(travel, depots[best], s);
      if (std::tie(a, depots[d]) < std::tie(b, depots[best])) best = d;
    }
    out.push_back(best);
  }
  return out;
}

std::vector<std::size_t> assign_sites_to_crews(const std::vector<std::string>& sites,
                                               const std::vector<std::string>& crews,
                                               const std::string& depot, const TravelMatrix& travel) {
  const std::size_t n = sites.size(), k = crews.size();
  if (k == 0) throw std::invalid_argument("depot cluster has sites but no crew");
  std::vector<std::size_t> out(n, 0);
  if (k == 1 || n == 0) return out;

  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> seed_of_crew;
  std::vector<std::size_t> owner(n, none);

  // First seed: nearest site to the depot.
  std::size_t first = 0;
  for (std::size_t i = 1; i < n; ++i) {
    double a = leg(travel, depot, sites[i]), b = leg(travel, depot, sites[first]);
    if (std::tie(a, sites[i]) < std::tie(b, sites[first])) first = i;
  }
  seed_of_crew.push_back(first);
  owner[first] = 0;
  // Farthest-point seeding for the other crews.
  while (seed_of_crew.size() < std::min(k, n)) {
    std::size_t pick = none;
    double pick_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (owner[i] != none) continue;
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t s : seed_of_crew) d = std::min(d, leg(travel, sites[s], sites[i]));
      if (pick == none || d > pick_d || (d == pick_d && sites[i] < sites[pick])) {
        pick = i;
        pick_d = d;
      }
    }
    owner[pick] = seed_of_crew.size();
    seed_of_crew.push_back(pick);
  }

  const std::size_t cap = (n + k - 1) / k;
  std::vector<std::size_t> load(k, 0);
  for (std::size_t c = 0; c < seed_of_crew.size(); ++c) load[c] = 1;

  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i)
    if (owner[i] == none) rest.push_back(i);
  auto nearest_seed_distance = [&](std::size_t i) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t s : seed_of_crew) d = std::min(d, leg(travel, sites[s], sites[i]));
    return d;
  };
  std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
    double da = nearest_seed_distance(a), db = nearest_seed_distance(b);
    return std::tie(da, sites[a]) < std::tie(db, sites[b]);
  });
  for (std::size_t i : rest) {
    std::size_t best = none;
    double best_d = 0.0;
    for (std::size_t c = 0; c < seed_of_crew.size(); ++c) {
      if (load[c] >= cap) continue;
      double d = leg(travel, sites[seed_of_crew[c]], sites[i]);
      if (best == none || d < best_d || (d == best_d && crews[c] < crews[best])) {
        best = c;
        best_d = d;
      }
    }
    owner[i] = best;
    ++load[best];
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = owner[i];
  return out;
}

double clustering_cost(const std::vector<std::string>& sites, const std::vector<std::string>& depots,
                       const std::vector<std::size_t>& assignment, const TravelMatrix& travel) {
  double total = 0.0;
  for (std::size_t i = 0; i < sites.size(); ++i) total += leg(travel, depots[assignment[i]], sites[i]);
  return total;
}

}  // namespace dsr
