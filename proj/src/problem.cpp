#include "dsr/problem.hpp"

#include <algorithm>

#include "dsr/clustering.hpp"

namespace dsr {

const char* variant_name(Variant v) { return v == Variant::WCA ? "wca" : "woca"; }

std::optional<std::size_t> Instance::switch_index(const std::string& id) const {
  for (std::size_t i = 0; i < switches.size(); ++i)
    if (switches[i].id == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> Instance::ra_site_index(const std::string& id) const {
  for (std::size_t i = 0; i < ra_sites.size(); ++i)
    if (ra_sites[i].id == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> Instance::ca_site_index(const std::string& id) const {
  for (std::size_t i = 0; i < ca_sites.size(); ++i)
    if (ca_site_id(i) == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> Instance::cell_index(int id) const {
  if (id < 1 || static_cast<std::size_t>(id) > cells.cells.size()) return std::nullopt;
  return static_cast<std::size_t>(id - 1);
}

std::optional<std::size_t> Instance::crew_index(const std::string& id) const {
  for (std::size_t i = 0; i < scenario->crews.size(); ++i)
    if (scenario->crews[i].id == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> Instance::ecv_index(const std::string& id) const {
  for (std::size_t i = 0; i < ecv_depot.size(); ++i)
    if (scenario->ecvs[i].id == id) return i;
  return std::nullopt;
}

bool Instance::ecv_covers(std::size_t v, std::size_t ca_pos, std::size_t s) const {
  auto c = coverage.ftu_index(switches[s].id);
  if (!c) return false;
  return coverage.covered(v, ca_sites[ca_pos], *c);
}

bool Instance::ca_travel_metric() const {
  const std::size_t n = ca_travel.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (ca_travel[i][k] > ca_travel[i][j] + ca_travel[j][k] + 1e-9) return false;
  return true;
}

namespace {

std::vector<std::vector<double>> submatrix(const TravelMatrix& m, const std::vector<std::string>& ids) {
  std::vector<std::size_t> idx;
  for (const auto& id : ids) idx.push_back(*m.index_of(id));
  std::vector<std::vector<double>> out(ids.size(), std::vector<double>(ids.size(), 0.0));
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = 0; j < ids.size(); ++j) out[i][j] = m.at(idx[i], idx[j]);
  return out;
}

}  // namespace

Instance make_instance(const Scenario& s, Variant variant) {
  Instance in;
  in.scenario = &s;
  in.variant = variant;
  in.cells = partition_cells(s);
  in.coverage = compute_coverage(s, in.cells);
  in.t0 = s.start_time;
  in.tmax = s.horizon_minutes;
  const bool wca = variant == Variant::WCA;
  const TravelModel travel = derive_travel(s);

  // CA side first: switch governance refers to W^C positions.
  if (wca) {
    for (const auto& d : s.ecv_depots) in.ecv_depots.push_back(d.id);
    in.ecv_fleet.assign(in.ecv_depots.size(), 0);
    for (const auto& v : s.ecvs) {
      std::size_t d = static_cast<std::size_t>(
          std::find(in.ecv_depots.begin(), in.ecv_depots.end(), v.depot) - in.ecv_depots.begin());
      in.ecv_depot.push_back(d);
      ++in.ecv_fleet[d];
    }
    for (std::size_t k = 0; k < s.ecv_sites.size(); ++k)
      if (!s.ecv_sites[k].intact_base_station) {
        in.ca_sites.push_back(k);
        in.ca_min_stay.push_back(s.ecv_sites[k].min_stay_minutes);
      }
    std::vector<std::string> ids = in.ecv_depots;
    for (std::size_t k : in.ca_sites) ids.push_back(s.ecv_sites[k].id);
    in.ca_travel = submatrix(travel.ecv, ids);
  }

  for (const auto& e : in.cells.switch_edges) {
    const Line& l = s.grid.lines[e.line_index];
    const SwitchSpec& sw = *l.sw;
    SwitchInfo info;
    info.id = l.id;
    info.line_index = e.line_index;
    info.a = e.from_cell;
    info.b = e.to_cell;
    info.automatic = sw.kind == SwitchKind::Automatic;
    info.line_faulted = l.faulted;
    info.manual_op = sw.manual_op_minutes;
    info.auto_op = sw.auto_op_minutes;
    const bool ftu_damaged = wca && info.automatic && sw.ftu && sw.ftu->damaged;
    info.faulted = l.faulted || ftu_damaged;
    info.repair = l.faulted ? l.repair_minutes : 0.0;
    info.remote = wca && info.automatic && sw.ftu.has_value() && !info.faulted;
    info.intact = info.remote && sw.intact_remote;
    if (sw.ftu) {
      info.ftu_cell = sw.ftu->side == FtuSide::From ? info.a : info.b;
      info.residual = sw.ftu->residual_minutes;
    }
    if (info.remote && !info.intact && !in.ecv_depot.empty()) {
      auto c = in.coverage.ftu_index(l.id);
      for (std::size_t k : in.coverage.sites_covering_all(*c)) {
        auto pos = std::find(in.ca_sites.begin(), in.ca_sites.end(), k);
        if (pos != in.ca_sites.end()) info.gov_sites.push_back(static_cast<std::size_t>(pos - in.ca_sites.begin()));
      }
    }
    in.switches.push_back(std::move(info));
  }

  for (std::size_t li = 0; li < s.grid.lines.size(); ++li) {
    const Line& l = s.grid.lines[li];
    if (l.sw || !l.faulted) continue;
    in.faults.push_back({l.id, li, in.cells.fault_to_cell.at(l.id), l.repair_minutes, 0});
  }

  // W^R in line order.
  for (std::size_t li = 0; li < s.grid.lines.size(); ++li) {
    const Line& l = s.grid.lines[li];
    if (l.sw) {
      std::size_t si = *in.switch_index(l.id);
      SwitchInfo& info = in.switches[si];
      if (info.intact) continue;
      info.site = in.ra_sites.size();
      in.ra_sites.push_back({l.id, true, si, info.dwell(), info.manual_op, 0});
    } else if (l.faulted) {
      auto it = std::find_if(in.faults.begin(), in.faults.end(), [&](const FaultInfo& f) { return f.id == l.id; });
      it->site = in.ra_sites.size();
      in.ra_sites.push_back({l.id, false, static_cast<std::size_t>(it - in.faults.begin()), it->repair, 0.0, 0});
    }
  }

  for (const auto& d : s.crew_depots) in.crew_depots.push_back(d.id);
  in.crew_fleet.assign(in.crew_depots.size(), 0);
  for (const auto& c : s.crews) {
    std::size_t d = static_cast<std::size_t>(
        std::find(in.crew_depots.begin(), in.crew_depots.end(), c.depot) - in.crew_depots.begin());
    in.crew_depot.push_back(d);
    ++in.crew_fleet[d];
  }
  {
    std::vector<std::string> ids = in.crew_depots;
    for (const auto& site : in.ra_sites) ids.push_back(site.id);
    in.ra_travel = submatrix(travel.crew, ids);
  }
  // Only depots hosting crews take part in the clustering.
  std::vector<std::string> staffed;
  std::vector<std::size_t> staffed_index;
  for (std::size_t d = 0; d < in.crew_depots.size(); ++d)
    if (in.crew_fleet[d] > 0) {
      staffed.push_back(in.crew_depots[d]);
      staffed_index.push_back(d);
    }
  if (!staffed.empty() && !in.ra_sites.empty()) {
    std::vector<std::string> site_ids;
    for (const auto& site : in.ra_sites) site_ids.push_back(site.id);
    auto assign = assign_sites_to_depots(site_ids, staffed, travel.crew);
    for (std::size_t i = 0; i < in.ra_sites.size(); ++i) in.ra_sites[i].cluster = staffed_index[assign[i]];
  }

  for (std::size_t c = 0; c < in.cells.cells.size(); ++c)
    if (in.cells.cells[c].load_kw > 0) {
      in.load_cells.push_back(c);
      in.load_weight_total += in.cells.cells[c].weight;
    }

  double max_repair = 0, max_ms = 0, max_as = 0, max_travel = 0;
  for (const auto& l : s.grid.lines) {
    if (l.faulted) max_repair = std::max(max_repair, l.repair_minutes);
    if (l.sw) {
      max_ms = std::max(max_ms, l.sw->manual_op_minutes);
      max_as = std::max(max_as, l.sw->auto_op_minutes);
    }
  }
  for (const auto* table : {&in.ra_travel, &in.ca_travel})
    for (const auto& row : *table)
      for (double v : row) max_travel = std::max(max_travel, v);
  in.big_m = in.tmax + max_repair + max_ms + max_as + max_travel;
  return in;
}

}  // namespace dsr
