#include "dsr/planner.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "dsr/clustering.hpp"

namespace dsr {

ElectricPath path_from_plan(const Plan& plan, const Instance& inst) {
  // Only the closings are read, so a plan made for the other variant works.
  Plan closings;
  closings.switch_decisions = plan.switch_decisions;
  closings.ea_parents = plan.ea_parents;
  ResolvedPlan rp = resolve_plan(closings, inst);
  ElectricPath path;
  for (std::size_t s = 0; s < rp.ops.size(); ++s)
    if (rp.ops[s].used) path.edges.push_back({s, rp.ops[s].parent, rp.ops[s].child});
  return path;
}

ElectricPath bfs_path(const Instance& in) {
  const std::size_t nc = in.n_cells();
  std::vector<std::size_t> uf(nc);
  std::iota(uf.begin(), uf.end(), 0);
  std::vector<bool> src(nc);
  for (std::size_t c = 0; c < nc; ++c) src[c] = in.cells.cells[c].is_source;
  auto find = [&](std::size_t x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  auto join = [&](std::size_t a, std::size_t b) {
    a = find(a), b = find(b);
    uf[b] = a;
    src[a] = src[a] || src[b];
  };
  std::vector<bool> in_forest(in.switches.size(), false);
  for (std::size_t s = 0; s < in.switches.size(); ++s) {
    const SwitchInfo& sw = in.switches[s];
    if (!sw.faulted && !sw.intact) continue;
    const std::size_t a = find(sw.a), b = find(sw.b);
    if (a == b || (src[a] && src[b]))
      throw std::runtime_error("switches that must close form a loop or join two sources (at " + sw.id + ")");
    join(a, b);
    in_forest[s] = true;
  }
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nc);
  for (std::size_t s = 0; s < in.switches.size(); ++s) {
    adj[in.switches[s].a].push_back({s, in.switches[s].b});
    adj[in.switches[s].b].push_back({s, in.switches[s].a});
  }
  std::vector<bool> seen(nc, false);
  std::deque<std::size_t> queue;
  for (std::size_t c = 0; c < nc; ++c)
    if (in.cells.cells[c].is_source) {
      seen[c] = true;
      queue.push_back(c);
    }
  while (!queue.empty()) {
    std::size_t c = queue.front();
    queue.pop_front();
    for (const auto& [s, o] : adj[c]) {
      if (!in_forest[s]) {
        const std::size_t a = find(c), b = find(o);
        if (a == b || (src[a] && src[b])) continue;
        join(a, b);
        in_forest[s] = true;
      }
      if (!seen[o]) {
        seen[o] = true;
        queue.push_back(o);
      }
    }
  }
  for (std::size_t c = 0; c < nc; ++c)
    if (!seen[c]) throw std::runtime_error("cell " + std::to_string(in.cell_id(c)) + " cannot be reached from a source");

  // Orient the forest away from the sources.
  ElectricPath path;
  std::vector<bool> oriented(nc, false);
  for (std::size_t c = 0; c < nc; ++c)
    if (in.cells.cells[c].is_source) {
      oriented[c] = true;
      queue.push_back(c);
    }
  while (!queue.empty()) {
    std::size_t c = queue.front();
    queue.pop_front();
    for (const auto& [s, o] : adj[c])
      if (in_forest[s] && !oriented[o]) {
        oriented[o] = true;
        path.edges.push_back({s, c, o});
        queue.push_back(o);
      }
  }
  std::sort(path.edges.begin(), path.edges.end(), [](const PathEdge& x, const PathEdge& y) { return x.sw < y.sw; });
  return path;
}

namespace {

constexpr double kEps = 1e-9;

/// Nearest-next ordering from `start` over ra location indices.
std::vector<std::size_t> nearest_order(const Instance& in, std::size_t start, std::vector<std::size_t> sites) {
  std::vector<std::size_t> out;
  std::size_t loc = start;
  while (!sites.empty()) {
    auto best = sites.begin();
    for (auto it = sites.begin(); it != sites.end(); ++it) {
      const double d = in.ra_leg(loc, in.ra_site_loc(*it)), bd = in.ra_leg(loc, in.ra_site_loc(*best));
      if (d < bd - kEps || (d <= bd + kEps && in.ra_sites[*it].id < in.ra_sites[*best].id)) best = it;
    }
    out.push_back(*best);
    loc = in.ra_site_loc(*best);
    sites.erase(best);
  }
  return out;
}

/// Crew routes for the given set of ra sites by depot clusters, crew
/// clusters and nearest-next ordering (repairs first).
std::vector<std::vector<std::size_t>> crew_routes(const Instance& in, const std::set<std::size_t>& visit) {
  std::vector<std::vector<std::size_t>> routes(in.n_crews());
  const TravelModel travel = derive_travel(*in.scenario);
  for (std::size_t d = 0; d < in.crew_depots.size(); ++d) {
    std::vector<std::size_t> crews;
    for (std::size_t c = 0; c < in.n_crews(); ++c)
      if (in.crew_depot[c] == d) crews.push_back(c);
    std::vector<std::size_t> sites;
    for (std::size_t k : visit)
      if (in.ra_sites[k].cluster == d) sites.push_back(k);
    if (sites.empty()) continue;
    if (crews.empty()) throw std::runtime_error("depot " + in.crew_depots[d] + " has sites but no crews");
    std::vector<std::string> site_ids, crew_ids;
    for (std::size_t k : sites) site_ids.push_back(in.ra_sites[k].id);
    for (std::size_t c : crews) crew_ids.push_back(in.crew_id(c));
    auto assign = assign_sites_to_crews(site_ids, crew_ids, in.crew_depots[d], travel.crew);
    for (std::size_t ci = 0; ci < crews.size(); ++ci) {
      std::vector<std::size_t> repairs, switches;
      for (std::size_t i = 0; i < sites.size(); ++i) {
        if (assign[i] != ci) continue;
        const RaSite& site = in.ra_sites[sites[i]];
        const bool repair = !site.is_switch || in.switches[site.index].faulted;
        (repair ? repairs : switches).push_back(sites[i]);
      }
      auto first = nearest_order(in, d, repairs);
      std::size_t loc = first.empty() ? d : in.ra_site_loc(first.back());
      auto second = nearest_order(in, loc, switches);
      first.insert(first.end(), second.begin(), second.end());
      routes[crews[ci]] = first;
    }
  }
  return routes;
}

struct Attempt {
  bool ok = false;
  ResolvedPlan rp;
  Timeline tl;
  std::optional<std::size_t> rt_failure;  // remote switch that cannot meet its battery deadline
};

/// True when a de-energized closing hanging off `cell` finishes after the
/// cell goes live, so the closing that energizes `cell` comes too early.
bool late_behind(const ResolvedPlan& rp, const Timeline& tl, std::size_t cell) {
  if (tl.op_done.size() != rp.ops.size()) return false;
  std::vector<std::size_t> stack{cell};
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    for (std::size_t s = 0; s < rp.ops.size(); ++s) {
      const SwitchOp& op = rp.ops[s];
      if (!op.used || op.energized || op.parent != c) continue;
      if (!(tl.op_done[s] <= tl.tE[cell] + kEps)) return true;
      stack.push_back(op.child);
    }
  }
  return false;
}

/// Turns energized closings into de-energized ones until the schedule is
/// feasible, falling back to all de-energized.
Attempt settle_modes(const Instance& in, ResolvedPlan rp_in) {
  Attempt at;
  at.rp = std::move(rp_in);
  ResolvedPlan& rp = at.rp;

  for (std::size_t iter = 0; iter <= in.switches.size() + 1; ++iter) {
    at.tl = evaluate(rp, in);
    if (at.tl.feasible) {
      at.ok = true;
      return at;
    }
    if (at.tl.tR.size() != in.ra_sites.size() || at.tl.tE.size() != in.n_cells()) break;
    bool flipped = false;
    for (std::size_t s = 0; s < rp.ops.size(); ++s) {
      SwitchOp& op = rp.ops[s];
      if (!op.used || !op.energized) continue;
      const SwitchInfo& sw = in.switches[s];
      if (!op.automatic) {
        if (at.tl.tR[*sw.site] < at.tl.tE[op.parent] - kEps || late_behind(rp, at.tl, op.child)) {
          op.energized = false;
          flipped = true;
        }
      } else if (sw.ftu_cell && *sw.ftu_cell == op.child && at.tl.tAOop.size() == rp.ops.size() &&
                 at.tl.tAOop[s] > sw.residual + kEps) {
        op.energized = false;
        flipped = true;
      }
    }
    if (!flipped) break;
  }
  // Last resort: every closing de-energized.
  for (auto& op : rp.ops)
    if (op.used) op.energized = false;
  at.tl = evaluate(rp, in);
  at.ok = at.tl.feasible;
  if (!at.ok)
    for (std::size_t s = 0; s < rp.ops.size(); ++s)
      if (rp.ops[s].used && rp.ops[s].automatic && !in.switches[s].intact && at.tl.tAOop.size() == rp.ops.size() &&
          at.tl.tAOop[s] > in.switches[s].residual + kEps)
        at.rt_failure = s;
  return at;
}

Attempt schedule(const Instance& in, const ElectricPath& path, const std::vector<std::vector<std::size_t>>& ca,
                 const std::map<std::size_t, std::optional<std::size_t>>& remote) {
  ResolvedPlan rp;
  rp.ca.assign(in.n_ecvs(), {});
  for (std::size_t v = 0; v < ca.size() && v < rp.ca.size(); ++v) rp.ca[v] = ca[v];
  rp.ops.assign(in.switches.size(), {});
  std::set<std::size_t> visit;
  for (const auto& f : in.faults) visit.insert(f.site);
  for (const auto& e : path.edges) {
    SwitchOp& op = rp.ops[e.sw];
    op.used = true;
    op.parent = e.parent;
    op.child = e.child;
    op.energized = true;
    auto it = remote.find(e.sw);
    if (it != remote.end()) {
      op.automatic = true;
      op.gov = it->second;
    } else {
      const SwitchInfo& sw = in.switches[e.sw];
      if (!sw.site) throw std::runtime_error("switch " + sw.id + " has no crew site");
      visit.insert(*sw.site);
    }
  }
  for (const auto& sw : in.switches)
    if (sw.faulted && sw.site) visit.insert(*sw.site);
  rp.ra = crew_routes(in, visit);
  return settle_modes(in, std::move(rp));
}

Plan dispatch_with_remote(const Instance& in, const ElectricPath& path, const std::vector<std::vector<std::size_t>>& ca,
                          std::map<std::size_t, std::optional<std::size_t>> remote) {
  for (;;) {
    Attempt at = schedule(in, path, ca, remote);
    if (at.ok) return to_plan(at.rp, in);
    if (at.rt_failure && remote.count(*at.rt_failure)) {
      remote.erase(*at.rt_failure);
      continue;
    }
    throw std::runtime_error("heuristic dispatch found no feasible schedule [" + at.tl.tag + "] " + at.tl.message);
  }
}

}  // namespace

Plan lift_plan(const Instance& in, const Plan& plan, const std::vector<std::vector<std::size_t>>& ca) {
  Plan closings;
  closings.switch_decisions = plan.switch_decisions;
  closings.ea_parents = plan.ea_parents;
  for (auto& d : closings.switch_decisions)
    if (auto s = in.switch_index(d.sw); s && in.switches[*s].intact && d.mode.size() == 2) d.mode[0] = 'A';
  ResolvedPlan rp = resolve_plan(closings, in);
  rp.ca.assign(in.n_ecvs(), {});
  for (std::size_t v = 0; v < ca.size() && v < rp.ca.size(); ++v) rp.ca[v] = ca[v];
  for (const auto& r : plan.ra_routes) {
    auto c = in.crew_index(r.crew);
    if (!c) throw std::runtime_error("unknown crew '" + r.crew + "'");
    for (const auto& id : r.sites)
      if (auto k = in.ra_site_index(id)) {
        const RaSite& site = in.ra_sites[*k];
        if (site.is_switch && in.switches[site.index].intact) continue;
        rp.ra[*c].push_back(*k);
      }
  }
  auto settle = [&](ResolvedPlan cand) {
    Attempt at = settle_modes(in, cand);
    if (!at.ok) {
      for (auto& op : cand.ops)
        if (op.used) op.energized = true;
      at = settle_modes(in, std::move(cand));
    }
    return at;
  };
  // A faulted switch the plan never visits keeps its cells dark, so it takes
  // over as the feeder of one of its end cells and joins the cheapest crew slot.
  std::set<std::size_t> visited;
  for (const auto& r : rp.ra) visited.insert(r.begin(), r.end());
  for (std::size_t s = 0; s < in.switches.size(); ++s) {
    const SwitchInfo& sw = in.switches[s];
    if (!sw.faulted || !sw.site || visited.count(*sw.site) || rp.ops[s].used) continue;
    std::optional<ResolvedPlan> best;
    double best_obj = 0;
    for (int flip = 0; flip < 2; ++flip) {
      const std::size_t parent = flip ? sw.b : sw.a, child = flip ? sw.a : sw.b;
      std::optional<std::size_t> feeder;
      for (std::size_t q = 0; q < rp.ops.size(); ++q)
        if (rp.ops[q].used && rp.ops[q].child == child) feeder = q;
      if (!feeder || in.switches[*feeder].intact || in.switches[*feeder].faulted) continue;
      // parent must not hang below child
      bool below = false;
      for (std::size_t c = parent;;) {
        if (c == child) {
          below = true;
          break;
        }
        std::optional<std::size_t> up;
        for (std::size_t q = 0; q < rp.ops.size(); ++q)
          if (rp.ops[q].used && rp.ops[q].child == c) up = rp.ops[q].parent;
        if (!up) break;
        c = *up;
      }
      if (below) continue;
      ResolvedPlan base = rp;
      base.ops[*feeder] = SwitchOp{};
      if (const auto& fs = in.switches[*feeder].site)
        for (auto& r : base.ra) r.erase(std::remove(r.begin(), r.end(), *fs), r.end());
      base.ops[s] = SwitchOp{true, parent, child, false, true, std::nullopt};
      for (std::size_t c = 0; c < in.n_crews(); ++c) {
        if (in.crew_depot[c] != in.ra_sites[*sw.site].cluster) continue;
        for (std::size_t pos = 0; pos <= base.ra[c].size(); ++pos) {
          ResolvedPlan cand = base;
          cand.ra[c].insert(cand.ra[c].begin() + static_cast<std::ptrdiff_t>(pos), *sw.site);
          Attempt at = settle(cand);
          if (!at.ok) continue;
          const double v = objectives(at.rp, at.tl, in).obj_sum;
          if (!best || v < best_obj - kEps) {
            best = std::move(cand);
            best_obj = v;
          }
        }
      }
    }
    if (!best) throw std::runtime_error("lifted plan cannot take in faulted switch " + sw.id);
    rp = std::move(*best);
  }
  Attempt at = settle(rp);
  if (!at.ok) throw std::runtime_error("lifted plan has no feasible schedule [" + at.tl.tag + "] " + at.tl.message);
  return to_plan(at.rp, in);
}

Plan algorithm1_dispatch(const Instance& in, const ElectricPath& path) {
  std::map<std::size_t, std::optional<std::size_t>> remote;
  for (const auto& e : path.edges)
    if (in.switches[e.sw].intact) remote[e.sw] = std::nullopt;
  return dispatch_with_remote(in, path, std::vector<std::vector<std::size_t>>(in.n_ecvs()), remote);
}

std::vector<std::vector<std::size_t>> max_coverage_routes(const Instance& in) {
  std::vector<std::vector<std::size_t>> routes(in.n_ecvs());
  std::vector<bool> taken(in.ca_sites.size(), false);
  for (std::size_t v = 0; v < in.n_ecvs(); ++v) {
    std::optional<std::size_t> best;
    std::size_t best_count = 0;
    for (std::size_t k = 0; k < in.ca_sites.size(); ++k) {
      if (taken[k]) continue;
      std::size_t count = 0;
      for (std::size_t s = 0; s < in.switches.size(); ++s)
        if (in.switches[s].remote && !in.switches[s].intact && in.ecv_covers(v, k, s)) ++count;
      if (!best || count > best_count || (count == best_count && in.ca_site_id(k) < in.ca_site_id(*best))) {
        best = k;
        best_count = count;
      }
    }
    if (best) {
      taken[*best] = true;
      routes[v] = {*best};
    }
  }
  return routes;
}

Plan fixed_ca_heuristic(const Instance& in, const std::vector<std::vector<std::size_t>>& ca, const ElectricPath& path,
                        bool use_ecv) {
  std::map<std::size_t, std::optional<std::size_t>> remote;
  for (const auto& e : path.edges) {
    const SwitchInfo& sw = in.switches[e.sw];
    if (sw.intact) {
      remote[e.sw] = std::nullopt;
      continue;
    }
    if (!sw.remote || !use_ecv) continue;
    for (std::size_t v = 0; v < ca.size() && !remote.count(e.sw); ++v)
      for (std::size_t k : ca[v])
        if (std::find(sw.gov_sites.begin(), sw.gov_sites.end(), k) != sw.gov_sites.end() && in.ecv_covers(v, k, e.sw)) {
          remote[e.sw] = k;
          break;
        }
  }
  return dispatch_with_remote(in, path, ca, remote);
}

}  // namespace dsr
