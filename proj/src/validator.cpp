#include "dsr/validator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace dsr {

std::vector<std::string> Verdict::tags() const {
  std::set<std::string> s;
  for (const auto& v : violations) s.insert(v.tag);
  return {s.begin(), s.end()};
}

namespace {

/// Route table derived from a list of routes over locations
/// [depots..., sites...].
struct RouteTable {
  std::set<std::pair<std::size_t, std::size_t>> legs;
  std::set<std::pair<std::size_t, std::size_t>> reversed;  // both directions present
  std::vector<int> visits;                                 // per site
  std::vector<int> visitor;                                // per site, route index of last visit
  std::vector<std::size_t> self_loops;                     // sites
  std::map<std::size_t, int> depot_out;                    // distinct first legs per depot
};

RouteTable build_table(const std::vector<std::pair<std::size_t, std::vector<std::size_t>>>& routes, std::size_t n_depots,
                       std::size_t n_sites) {
  RouteTable t;
  t.visits.assign(n_sites, 0);
  t.visitor.assign(n_sites, -1);
  for (const auto& [depot, sites] : routes) {
    std::size_t loc = depot;
    for (std::size_t k : sites) {
      std::size_t next = n_depots + k;
      if (loc == next) t.self_loops.push_back(k);
      else t.legs.insert({loc, next});
      loc = next;
    }
  }
  for (const auto& [i, j] : t.legs)
    if (i < j && t.legs.count({j, i})) {
      t.reversed.insert({i, j});
      t.reversed.insert({j, i});
    }
  for (std::size_t r = 0; r < routes.size(); ++r) {
    std::size_t loc = routes[r].first;
    for (std::size_t k : routes[r].second) {
      std::size_t next = n_depots + k;
      if (loc != next && !t.reversed.count({loc, next})) {
        ++t.visits[k];
        t.visitor[k] = static_cast<int>(r);
      }
      loc = next;
    }
  }
  for (const auto& leg : t.legs)
    if (leg.first < n_depots && !t.reversed.count(leg)) ++t.depot_out[leg.first];
  return t;
}

class Checker {
 public:
  Checker(const Plan& p, const Timeline& tl, const Instance& in, double tol) : p_(p), tl_(tl), in_(in), tol_(tol) {}

  Verdict run() {
    if (!shapes_ok()) return verdict_;
    check_ca();
    check_ra();
    parse_decisions();
    check_energization();
    check_remote();
    check_manual();
    check_cells();
    return verdict_;
  }

 private:
  void add(const std::string& tag, const std::string& msg) {
    verdict_.pass = false;
    verdict_.violations.push_back({tag, msg});
  }
  bool eq(double a, double b) const { return std::fabs(a - b) <= tol_; }
  bool ge(double a, double b) const { return a >= b - tol_; }
  bool le(double a, double b) const { return a <= b + tol_; }
  std::string cell(std::size_t c) const { return "cell " + std::to_string(in_.cell_id(c)); }

  bool shapes_ok() {
    bool ok = tl_.tCa.size() == in_.ca_sites.size() && tl_.tCd.size() == in_.ca_sites.size() &&
              tl_.tR.size() == in_.ra_sites.size() && tl_.fR.size() == in_.n_cells() &&
              tl_.tE.size() == in_.n_cells() && tl_.tAOop.size() == in_.switches.size();
    if (!ok) add("timeline", "timeline does not match the instance dimensions");
    return ok;
  }

  void check_ca() {
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> routes;
    std::map<std::string, int> entries;
    for (const auto& r : p_.ca_routes) {
      auto v = in_.ecv_index(r.ecv);
      if (!v) {
        add("plan", "unknown ECV '" + r.ecv + "'");
        continue;
      }
      std::vector<std::size_t> sites;
      for (const auto& id : r.sites) {
        auto k = in_.ca_site_index(id);
        if (!k) add("plan", "'" + id + "' is not an ECV working site");
        else sites.push_back(*k);
      }
      routes.emplace_back(in_.ecv_depot[*v], sites);
      route_ecv_.push_back(*v);
    }
    const std::size_t nd = in_.ecv_depots.size(), nk = in_.ca_sites.size();
    ca_ = build_table(routes, nd, nk);
    for (std::size_t k : ca_.self_loops) add("2", "ECV route loops at " + in_.ca_site_id(k));
    for (const auto& [i, j] : ca_.reversed)
      if (i < j) add("4", "ECV legs between " + loc_name_ca(i) + " and " + loc_name_ca(j) + " run both ways");
    for (const auto& [d, n] : ca_.depot_out)
      if (n > in_.ecv_fleet[d]) add("5", "depot " + in_.ecv_depots[d] + " dispatches " + std::to_string(n) + " ECVs");
    std::vector<int> in_deg(nk, 0), out_deg(nk, 0);
    for (const auto& leg : ca_.legs) {
      if (ca_.reversed.count(leg)) continue;
      if (leg.second >= nd) ++in_deg[leg.second - nd];
      if (leg.first >= nd) ++out_deg[leg.first - nd];
    }
    for (std::size_t k = 0; k < nk; ++k)
      if (in_deg[k] > 1 || out_deg[k] > in_deg[k] || ca_.visits[k] > 1)
        add("6", "ECV site " + in_.ca_site_id(k) + " is entered more than once");

    std::map<std::size_t, std::vector<double>> depart;
    for (const auto& leg : ca_.legs) {
      if (ca_.reversed.count(leg)) continue;
      std::size_t j = leg.second - nd;
      double travel = in_.ca_leg(leg.first, leg.second);
      if (leg.first < nd) {
        depart[leg.first].push_back(tl_.tCa[j] - travel);
      } else {
        std::size_t i = leg.first - nd;
        if (!eq(tl_.tCa[j], tl_.tCd[i] + travel))
          add("9", "ECV arrival at " + in_.ca_site_id(j) + " differs from departure at " + in_.ca_site_id(i) + " plus travel");
      }
    }
    for (const auto& [d, times] : depart) {
      // ECVs leave their depot at the start time.
      for (double t : times)
        if (!eq(t, in_.t0)) add("9", "ECV arrival from depot " + in_.ecv_depots[d] + " differs from start plus travel");
    }
    for (std::size_t k = 0; k < nk; ++k) {
      const double a = tl_.tCa[k], d = tl_.tCd[k];
      if (!(le(a, d) && le(d, in_.tmax))) add("8", "ECV times at " + in_.ca_site_id(k) + " out of order or past the horizon");
      if (!ge(a, in_.t0)) add("bounds", "ECV arrival at " + in_.ca_site_id(k) + " before the start time");
      if (ca_.visits[k] > 0) {
        if (!ge(d - a, in_.ca_min_stay[k])) add("10", "ECV stay at " + in_.ca_site_id(k) + " shorter than the minimum");
      } else if (!eq(a, in_.tmax)) {
        add("11", "unvisited ECV site " + in_.ca_site_id(k) + " not pinned to the horizon");
      }
    }
  }

  std::string loc_name_ca(std::size_t loc) const {
    return loc < in_.ecv_depots.size() ? in_.ecv_depots[loc] : in_.ca_site_id(loc - in_.ecv_depots.size());
  }
  std::string loc_name_ra(std::size_t loc) const {
    return loc < in_.crew_depots.size() ? in_.crew_depots[loc] : in_.ra_sites[loc - in_.crew_depots.size()].id;
  }

  void check_ra() {
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> routes;
    for (const auto& r : p_.ra_routes) {
      auto c = in_.crew_index(r.crew);
      if (!c) {
        add("plan", "unknown crew '" + r.crew + "'");
        continue;
      }
      std::vector<std::size_t> sites;
      for (const auto& id : r.sites) {
        auto k = in_.ra_site_index(id);
        if (!k) add("plan", "'" + id + "' is not a crew working site");
        else sites.push_back(*k);
      }
      routes.emplace_back(in_.crew_depot[*c], sites);
    }
    const std::size_t nd = in_.crew_depots.size(), nk = in_.ra_sites.size();
    ra_ = build_table(routes, nd, nk);
    for (std::size_t k : ra_.self_loops) add("13", "crew route loops at " + in_.ra_sites[k].id);
    for (const auto& [i, j] : ra_.reversed)
      if (i < j) add("15", "crew legs between " + loc_name_ra(i) + " and " + loc_name_ra(j) + " run both ways");
    for (const auto& [d, n] : ra_.depot_out)
      if (n > in_.crew_fleet[d]) add("16", "depot " + in_.crew_depots[d] + " dispatches " + std::to_string(n) + " crews");
    std::vector<int> in_deg(nk, 0), out_deg(nk, 0);
    for (const auto& leg : ra_.legs) {
      if (ra_.reversed.count(leg)) continue;
      if (leg.second >= nd) ++in_deg[leg.second - nd];
      if (leg.first >= nd) ++out_deg[leg.first - nd];
      std::size_t j = leg.second - nd;
      std::size_t from_cluster = leg.first < nd ? leg.first : in_.ra_sites[leg.first - nd].cluster;
      if (from_cluster != in_.ra_sites[j].cluster)
        add("p2", "crew leg " + loc_name_ra(leg.first) + " -> " + in_.ra_sites[j].id + " crosses depot clusters");
    }
    for (std::size_t k = 0; k < nk; ++k)
      if (in_deg[k] > 1 || out_deg[k] > in_deg[k] || ra_.visits[k] > 1)
        add("17", "crew site " + in_.ra_sites[k].id + " is entered more than once");

    for (const auto& leg : ra_.legs) {
      if (ra_.reversed.count(leg)) continue;
      std::size_t j = leg.second - nd;
      double travel = in_.ra_leg(leg.first, leg.second);
      if (leg.first < nd) {
        if (!eq(tl_.tR[j], in_.t0 + travel)) add("19", "crew arrival at " + in_.ra_sites[j].id + " differs from start plus travel");
        continue;
      }
      std::size_t i = leg.first - nd;
      const RaSite& from = in_.ra_sites[i];
      std::string tag = !from.is_switch ? "20" : (in_.switches[from.index].faulted ? "22" : "21");
      if (!eq(tl_.tR[j], tl_.tR[i] + from.dwell + travel))
        add(tag, "crew arrival at " + in_.ra_sites[j].id + " differs from work end at " + from.id + " plus travel");
    }
    for (std::size_t k = 0; k < nk; ++k) {
      const double t = tl_.tR[k];
      if (!(ge(t, in_.t0) && le(t, in_.tmax))) add("bounds", "crew arrival at " + in_.ra_sites[k].id + " outside the horizon");
      if (ra_.visits[k] == 0 && !eq(t, in_.tmax)) add("23", "unvisited crew site " + in_.ra_sites[k].id + " not pinned to the horizon");
    }
    for (const auto& f : in_.faults)
      if (!ge(tl_.fR[f.cell], tl_.tR[f.site] + f.repair)) add("24", cell(f.cell) + " completes repairs before fault " + f.id + " is fixed");
    for (std::size_t c = 0; c < in_.n_cells(); ++c) {
      if (in_.cells.cells[c].faults.empty() && !eq(tl_.fR[c], in_.t0)) add("25", cell(c) + " has no fault but a late repair time");
      if (!(ge(tl_.fR[c], in_.t0) && le(tl_.fR[c], in_.tmax))) add("bounds", cell(c) + " repair time outside the horizon");
    }
  }

  struct Decision {
    std::size_t s, i, j;
    std::string mode;
  };

  void parse_decisions() {
    for (const auto& d : p_.switch_decisions) {
      auto s = in_.switch_index(d.sw);
      if (!s) {
        add("plan", "unknown switch '" + d.sw + "'");
        continue;
      }
      const SwitchInfo& sw = in_.switches[*s];
      auto i = in_.cell_index(d.from_cell), j = in_.cell_index(d.to_cell);
      if (!i || !j || !((*i == sw.a && *j == sw.b) || (*i == sw.b && *j == sw.a))) {
        add("E26", "switch " + d.sw + " does not join the cells named in its decision");
        continue;
      }
      static const std::set<std::string> modes{"AE", "AD", "ME", "MD", "A", "M"};
      if (!modes.count(d.mode)) {
        add("plan", "switch " + d.sw + " has unknown mode '" + d.mode + "'");
        continue;
      }
      decisions_.push_back({*s, *i, *j, d.mode});
    }
  }

  void check_energization() {
    const std::size_t nc = in_.n_cells();
    std::vector<std::vector<const Decision*>> into(nc);
    std::map<std::size_t, int> per_switch;
    for (const auto& d : decisions_) {
      into[d.j].push_back(&d);
      if (++per_switch[d.s] == 2) add("E26", "switch " + in_.switches[d.s].id + " is closed more than once");
    }
    std::vector<int> parent(nc, -1);
    for (std::size_t c = 0; c < nc; ++c) {
      const bool src = in_.cells.cells[c].is_source;
      if (src && !into[c].empty()) add("E26", "source " + cell(c) + " is fed through a switch");
      if (!src && into[c].size() != 1) add("E26", cell(c) + " must be energized through exactly one switch");
      if (into[c].size() == 1) parent[c] = static_cast<int>(into[c][0]->i);
    }
    for (std::size_t c = 0; c < nc; ++c) {
      std::size_t cur = c, steps = 0;
      bool cyclic = false;
      while (parent[cur] >= 0) {
        cur = static_cast<std::size_t>(parent[cur]);
        if (++steps > nc) {
          cyclic = true;
          break;
        }
      }
      if (cyclic) {
        add("E26", "energization path of " + cell(c) + " is cyclic");
        break;
      }
    }
    std::map<int, std::vector<std::string>> listed;
    for (const auto& e : p_.ea_parents) listed[e.cell].push_back(e.sw);
    for (const auto& d : decisions_) {
      auto it = listed.find(in_.cell_id(d.j));
      if (it == listed.end() || it->second.size() != 1 || it->second[0] != in_.switches[d.s].id)
        add("E26", "energization parent of " + cell(d.j) + " disagrees with switch " + in_.switches[d.s].id);
    }
    for (const auto& [cid, sws] : listed) {
      bool found = false;
      for (const auto& d : decisions_)
        if (in_.cell_id(d.j) == cid && std::find(sws.begin(), sws.end(), in_.switches[d.s].id) != sws.end()) found = true;
      if (!found) add("E26", "energization parent listed for cell " + std::to_string(cid) + " without a closing decision");
    }
    for (std::size_t c = 0; c < nc; ++c) {
      const double t = tl_.tE[c];
      if (!(ge(t, in_.t0) && le(t, in_.tmax))) add("E26", cell(c) + " energization time outside the horizon");
      if (in_.cells.cells[c].is_source && !ge(t, in_.cells.cells[c].available_at))
        add("E26", "source " + cell(c) + " energized before it is available");
    }
  }

  void check_remote() {
    std::map<std::size_t, std::vector<std::size_t>> z;  // switch -> ca site positions
    for (const auto& e : p_.z_assignment) {
      auto s = in_.switch_index(e.sw);
      if (!s) {
        add("plan", "unknown switch '" + e.sw + "' in governance");
        continue;
      }
      auto k = in_.ca_site_index(e.site);
      if (!k) {
        add("30", "switch " + e.sw + " governed by '" + e.site + "', which is not an ECV working site");
        continue;
      }
      z[*s].push_back(*k);
    }
    std::map<std::size_t, bool> has_auto;
    for (const auto& d : decisions_)
      if (d.mode[0] == 'A') has_auto[d.s] = true;

    for (std::size_t s = 0; s < in_.switches.size(); ++s) {
      const SwitchInfo& sw = in_.switches[s];
      const bool a = has_auto.count(s) > 0;
      const auto zs = z.count(s) ? z[s] : std::vector<std::size_t>{};
      if (sw.intact) {
        if (!a) add("28", "switch " + sw.id + " is remotely operable and must be closed remotely");
        if (!zs.empty()) add("28", "switch " + sw.id + " needs no governing site");
        continue;
      }
      if (!sw.remote) {
        if (!zs.empty()) add("28", "switch " + sw.id + " cannot be governed remotely");
        continue;
      }
      if (a != !zs.empty()) add("28", "switch " + sw.id + (a ? " operated remotely without a governing site" : " governed but not operated remotely"));
      if (zs.size() > 1) add("29", "switch " + sw.id + " governed by " + std::to_string(zs.size()) + " sites");
      for (std::size_t k : zs) {
        const int r = ca_.visitor[k];
        if (ca_.visits[k] == 0) {
          add("31", "switch " + sw.id + " governed by unvisited site " + in_.ca_site_id(k));
          if (std::find(sw.gov_sites.begin(), sw.gov_sites.end(), k) == sw.gov_sites.end())
            add("30", "site " + in_.ca_site_id(k) + " cannot cover the FTU of " + sw.id);
        } else if (!in_.ecv_covers(route_ecv_[static_cast<std::size_t>(r)], k, s)) {
          add("30", "the ECV at " + in_.ca_site_id(k) + " does not cover the FTU of " + sw.id);
        }
      }
    }

    for (const auto& d : decisions_) {
      if (d.mode[0] != 'A') continue;
      const SwitchInfo& sw = in_.switches[d.s];
      if (!sw.remote) {
        add("27", "switch " + sw.id + " cannot be closed remotely");
        continue;
      }
      if (d.mode == "A") {
        add("34", "remote closing of " + sw.id + " lacks an energized/de-energized sub-mode");
        continue;
      }
      const double t = tl_.tAOop[d.s];
      if (!(ge(t, in_.t0) && le(t, in_.tmax))) {
        add("32", "remote operation time of " + sw.id + " outside the horizon");
        continue;
      }
      if (z.count(d.s))
        for (std::size_t k : z[d.s])
          if (!(ge(t, tl_.tCa[k]) && le(t, tl_.tCd[k])))
            add("33", "remote operation of " + sw.id + " outside the ECV stay at " + in_.ca_site_id(k));
      const double ti = tl_.tE[d.i], tj = tl_.tE[d.j];
      const double ready = std::max(ti, tl_.fR[d.j]);
      const double done = t + sw.auto_op;
      if (d.mode == "AE") {
        if (!ge(t, ready)) add("35", "energized remote closing of " + sw.id + " before it is ready");
        if (!eq(tj, done)) add("36", cell(d.j) + " not energized at the remote closing of " + sw.id);
        if (sw.ftu_cell && *sw.ftu_cell == d.j && !le(t, sw.residual))
          add("37", "remote closing of " + sw.id + " after its FTU battery is depleted");
        if (!le(ti, done)) add("38", "energized remote closing of " + sw.id + " but " + cell(d.i) + " goes live later");
      } else {
        if (!le(t, ready)) add("35", "de-energized remote closing of " + sw.id + " after it is ready");
        if (!ge(ti, done)) add("38", cell(d.i) + " energized before the de-energized closing of " + sw.id);
        if (!eq(tj, ti)) add("39", "cells on both sides of " + sw.id + " not energized together");
        if (!le(t, sw.residual)) add("40", "de-energized remote closing of " + sw.id + " after its FTU battery is depleted");
      }
    }
  }

  void check_manual() {
    std::map<std::size_t, bool> has_manual;
    for (const auto& d : decisions_)
      if (d.mode[0] == 'M') has_manual[d.s] = true;
    for (std::size_t s = 0; s < in_.switches.size(); ++s) {
      const SwitchInfo& sw = in_.switches[s];
      const bool m = has_manual.count(s) > 0;
      if (!sw.site) {
        if (m) add("41", "switch " + sw.id + " is not a crew working site but is closed manually");
        continue;
      }
      const bool visited = ra_.visits[*sw.site] > 0;
      if (visited != m)
        add("41", "switch " + sw.id + (visited ? " visited by a crew but not closed manually" : " closed manually without a crew visit"));
    }
    for (const auto& d : decisions_) {
      if (d.mode[0] != 'M') continue;
      const SwitchInfo& sw = in_.switches[d.s];
      if (!sw.site) continue;
      if (d.mode == "M") {
        add("42", "manual closing of " + sw.id + " lacks an energized/de-energized sub-mode");
        continue;
      }
      const double tr = tl_.tR[*sw.site];
      const double done = tr + sw.dwell();
      const double ti = tl_.tE[d.i], tj = tl_.tE[d.j];
      const std::string t44 = sw.faulted ? "45" : "44", t46 = sw.faulted ? "47" : "46";
      if (d.mode == "ME") {
        if (!ge(tr, ti)) add("43", "crew closes " + sw.id + " energized before " + cell(d.i) + " is live");
        if (!eq(tj, done)) add(t44, cell(d.j) + " not energized when the crew finishes " + sw.id);
        if (!le(ti, done)) add(t46, "energized manual closing of " + sw.id + " but " + cell(d.i) + " goes live later");
      } else {
        if (!le(tr, ti)) add("43", "de-energized manual closing of " + sw.id + " after " + cell(d.i) + " is live");
        if (!ge(ti, done)) add(t46, cell(d.i) + " energized before the crew finishes " + sw.id);
        if (!eq(tj, ti)) add("48", "cells on both sides of " + sw.id + " not energized together");
      }
    }
    for (const auto& sw : in_.switches) {
      if (!sw.faulted || !sw.site) continue;
      const double rep = tl_.tR[*sw.site] + sw.repair;
      if (!ge(tl_.tE[sw.a], rep) || !ge(tl_.tE[sw.b], rep)) add("49", "a cell beside faulted switch " + sw.id + " goes live before its repair");
    }
  }

  void check_cells() {
    for (std::size_t c = 0; c < in_.n_cells(); ++c)
      if (!ge(tl_.tE[c], tl_.fR[c])) add("50", cell(c) + " energized before its repairs finish");
  }

  const Plan& p_;
  const Timeline& tl_;
  const Instance& in_;
  double tol_;
  Verdict verdict_;
  RouteTable ca_, ra_;
  std::vector<std::size_t> route_ecv_;
  std::vector<Decision> decisions_;
};

}  // namespace

Verdict validate(const Plan& plan, const Timeline& timeline, const Instance& inst, double tol) {
  return Checker(plan, timeline, inst, tol).run();
}

}  // namespace dsr
