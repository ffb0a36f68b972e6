#include "dsr/plan.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace dsr {

using nlohmann::json;

json plan_to_json(const Plan& p) {
  json ca = json::array();
  for (const auto& r : p.ca_routes) ca.push_back({{"ecv", r.ecv}, {"sites", r.sites}});
  json ra = json::array();
  for (const auto& r : p.ra_routes) ra.push_back({{"crew", r.crew}, {"sites", r.sites}});
  json sw = json::array();
  for (const auto& d : p.switch_decisions)
    sw.push_back({{"switch", d.sw}, {"from_cell", d.from_cell}, {"to_cell", d.to_cell}, {"mode", d.mode}});
  json z = json::array();
  for (const auto& e : p.z_assignment) z.push_back({{"switch", e.sw}, {"site", e.site}});
  json parents = json::array();
  for (const auto& e : p.ea_parents) parents.push_back({{"cell", e.cell}, {"switch", e.sw}});
  return {{"ca_routes", ca}, {"ra_routes", ra}, {"switch_decisions", sw}, {"z_assignment", z}, {"ea_parents", parents}};
}

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw std::runtime_error("plan: missing '" + std::string(key) + "' in " + where);
  return j.at(key);
}

std::vector<std::string> strings(const json& j, const std::string& where) {
  if (!j.is_array()) throw std::runtime_error("plan: expected array at " + where);
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw std::runtime_error("plan: expected string at " + where);
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

Plan plan_from_json(const json& doc) {
  Plan p;
  auto list = [&](const char* key) -> const json& {
    const json& v = field(doc, key, "plan");
    if (!v.is_array()) throw std::runtime_error(std::string("plan: '") + key + "' must be an array");
    return v;
  };
  for (const auto& r : list("ca_routes"))
    p.ca_routes.push_back({field(r, "ecv", "ca_routes").get<std::string>(), strings(field(r, "sites", "ca_routes"), "ca_routes")});
  for (const auto& r : list("ra_routes"))
    p.ra_routes.push_back({field(r, "crew", "ra_routes").get<std::string>(), strings(field(r, "sites", "ra_routes"), "ra_routes")});
  for (const auto& d : list("switch_decisions"))
    p.switch_decisions.push_back({field(d, "switch", "switch_decisions").get<std::string>(),
                                  field(d, "from_cell", "switch_decisions").get<int>(),
                                  field(d, "to_cell", "switch_decisions").get<int>(),
                                  field(d, "mode", "switch_decisions").get<std::string>()});
  for (const auto& e : list("z_assignment"))
    p.z_assignment.push_back({field(e, "switch", "z_assignment").get<std::string>(), field(e, "site", "z_assignment").get<std::string>()});
  for (const auto& e : list("ea_parents"))
    p.ea_parents.push_back({field(e, "cell", "ea_parents").get<int>(), field(e, "switch", "ea_parents").get<std::string>()});
  return p;
}

Plan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open plan file " + path);
  return plan_from_json(json::parse(in));
}

std::string plan_encoding(const Plan& p) { return plan_to_json(p).dump(); }

ResolvedPlan resolve_plan(const Plan& p, const Instance& inst) {
  ResolvedPlan rp;
  rp.ca.assign(inst.n_ecvs(), {});
  rp.ra.assign(inst.n_crews(), {});
  rp.ops.assign(inst.switches.size(), {});

  std::set<std::size_t> seen_fleet;
  for (const auto& r : p.ca_routes) {
    auto v = inst.ecv_index(r.ecv);
    if (!v) throw PlanError("plan", "unknown ECV '" + r.ecv + "'");
    if (!seen_fleet.insert(*v).second) throw PlanError("5", "ECV '" + r.ecv + "' has more than one route");
    for (const auto& site : r.sites) {
      auto k = inst.ca_site_index(site);
      if (!k) throw PlanError("2", "'" + site + "' is not an ECV working site");
      rp.ca[*v].push_back(*k);
    }
  }
  seen_fleet.clear();
  for (const auto& r : p.ra_routes) {
    auto c = inst.crew_index(r.crew);
    if (!c) throw PlanError("plan", "unknown crew '" + r.crew + "'");
    if (!seen_fleet.insert(*c).second) throw PlanError("16", "crew '" + r.crew + "' has more than one route");
    for (const auto& site : r.sites) {
      auto k = inst.ra_site_index(site);
      if (!k) throw PlanError("13", "'" + site + "' is not a crew working site");
      rp.ra[*c].push_back(*k);
    }
  }
  for (const auto& d : p.switch_decisions) {
    auto s = inst.switch_index(d.sw);
    if (!s) throw PlanError("plan", "unknown switch '" + d.sw + "'");
    SwitchOp& op = rp.ops[*s];
    if (op.used) throw PlanError("E26", "switch '" + d.sw + "' is closed twice");
    const SwitchInfo& info = inst.switches[*s];
    auto from = inst.cell_index(d.from_cell), to = inst.cell_index(d.to_cell);
    if (!from || !to || !((*from == info.a && *to == info.b) || (*from == info.b && *to == info.a)))
      throw PlanError("E26", "switch '" + d.sw + "' does not join cells " + std::to_string(d.from_cell) + " and " +
                                 std::to_string(d.to_cell));
    if (d.mode == "A" || d.mode == "M")
      throw PlanError(d.mode == "A" ? "34" : "42", "switch '" + d.sw + "' lacks an energized/de-energized sub-mode");
    if (d.mode != "AE" && d.mode != "AD" && d.mode != "ME" && d.mode != "MD")
      throw PlanError("plan", "switch '" + d.sw + "' has unknown mode '" + d.mode + "'");
    op.used = true;
    op.parent = *from;
    op.child = *to;
    op.automatic = d.mode[0] == 'A';
    op.energized = d.mode[1] == 'E';
  }
  for (const auto& e : p.z_assignment) {
    auto s = inst.switch_index(e.sw);
    if (!s) throw PlanError("plan", "unknown switch '" + e.sw + "' in governance");
    auto k = inst.ca_site_index(e.site);
    if (!k) throw PlanError("30", "'" + e.site + "' is not an ECV working site");
    if (rp.ops[*s].gov) throw PlanError("29", "switch '" + e.sw + "' governed by more than one site");
    rp.ops[*s].gov = *k;
  }
  std::vector<int> parent_of(inst.n_cells(), -1);
  for (const auto& e : p.ea_parents) {
    auto c = inst.cell_index(e.cell);
    auto s = inst.switch_index(e.sw);
    if (!c || !s) throw PlanError("E26", "bad energization parent entry for cell " + std::to_string(e.cell));
    if (parent_of[*c] >= 0) throw PlanError("E26", "cell " + std::to_string(e.cell) + " has two parents");
    parent_of[*c] = static_cast<int>(*s);
  }
  for (std::size_t s = 0; s < rp.ops.size(); ++s) {
    if (!rp.ops[s].used) continue;
    if (parent_of[rp.ops[s].child] != static_cast<int>(s))
      throw PlanError("E26", "energization parents disagree with the decision on switch '" + inst.switches[s].id + "'");
  }
  for (std::size_t c = 0; c < parent_of.size(); ++c)
    if (parent_of[c] >= 0 && !rp.ops[static_cast<std::size_t>(parent_of[c])].used)
      throw PlanError("E26", "cell " + std::to_string(inst.cell_id(c)) + " lists a parent switch that is never closed");
  return rp;
}

Plan to_plan(const ResolvedPlan& rp, const Instance& inst) {
  Plan p;
  for (std::size_t v = 0; v < rp.ca.size(); ++v) {
    CaRoute r{inst.ecv_id(v), {}};
    for (std::size_t k : rp.ca[v]) r.sites.push_back(inst.ca_site_id(k));
    p.ca_routes.push_back(std::move(r));
  }
  for (std::size_t c = 0; c < rp.ra.size(); ++c) {
    RaRoute r{inst.crew_id(c), {}};
    for (std::size_t k : rp.ra[c]) r.sites.push_back(inst.ra_sites[k].id);
    p.ra_routes.push_back(std::move(r));
  }
  std::vector<std::pair<int, std::string>> parents;
  for (std::size_t s = 0; s < rp.ops.size(); ++s) {
    const SwitchOp& op = rp.ops[s];
    if (!op.used) continue;
    std::string mode = std::string(op.automatic ? "A" : "M") + (op.energized ? "E" : "D");
    p.switch_decisions.push_back({inst.switches[s].id, inst.cell_id(op.parent), inst.cell_id(op.child), mode});
    if (op.automatic && op.gov) p.z_assignment.push_back({inst.switches[s].id, inst.ca_site_id(*op.gov)});
    parents.emplace_back(inst.cell_id(op.child), inst.switches[s].id);
  }
  std::sort(parents.begin(), parents.end());
  for (auto& [cell, sw] : parents) p.ea_parents.push_back({cell, sw});
  return p;
}

}  // namespace dsr
