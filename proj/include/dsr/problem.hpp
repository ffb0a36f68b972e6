#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsr/coverage.hpp"
#include "dsr/scenario.hpp"
#include "dsr/topology.hpp"

namespace dsr {

enum class Variant { WCA, WOCA };
const char* variant_name(Variant v);

/// A switch as the models see it after the variant and the partial-damage
/// rules have been applied.
struct SwitchInfo {
  std::string id;
  std::size_t line_index = 0;
  std::size_t a = 0, b = 0;  // cell indices of the line's from / to node
  bool automatic = false;
  bool faulted = false;       // member of F: line fault, or damaged FTU under WCA
  bool line_faulted = false;
  double repair = 0.0;        // T^RP; zero when only the FTU is damaged
  double manual_op = 15.0;    // T^MS
  double auto_op = 1.0;       // T^AS
  bool remote = false;        // remotely operable in this variant (AS \ F, WCA only)
  bool intact = false;        // remote without any ECV (intact switch, FTU and base station)
  std::optional<std::size_t> ftu_cell;  // cell index the FTU draws power from
  double residual = 0.0;      // RT
  std::optional<std::size_t> site;      // index into ra_sites, absent when intact
  std::vector<std::size_t> gov_sites;   // ca_sites positions whose coverage reaches the FTU
  double dwell() const { return (faulted ? repair : 0.0) + manual_op; }
  std::size_t other(std::size_t cell) const { return cell == a ? b : a; }
};

struct FaultInfo {
  std::string id;
  std::size_t line_index = 0;
  std::size_t cell = 0;
  double repair = 0.0;
  std::size_t site = 0;
};

struct RaSite {
  std::string id;
  bool is_switch = false;
  std::size_t index = 0;  // into switches or faults
  double dwell = 0.0;     // time on site before the crew may leave
  double manual_op = 0.0; // T^MS, zero for plain faults
  std::size_t cluster = 0;  // crew depot index
};

/// Everything the planners, simulator and MILP builder share. Locations in
/// the travel tables are depots first, then sites, both in instance order.
struct Instance {
  const Scenario* scenario = nullptr;
  Variant variant = Variant::WCA;
  CellGraph cells;
  CoverageMap coverage;
  double t0 = 0.0;
  double tmax = 720.0;
  double big_m = 0.0;

  std::vector<SwitchInfo> switches;  // in line order
  std::vector<FaultInfo> faults;     // non-switch faulted lines
  std::vector<RaSite> ra_sites;      // W^R
  std::vector<std::string> crew_depots;
  std::vector<int> crew_fleet;               // crews stationed per depot
  std::vector<std::size_t> crew_depot;       // per crew
  std::vector<std::vector<double>> ra_travel;

  std::vector<std::string> ecv_depots;       // empty under WOCA
  std::vector<int> ecv_fleet;
  std::vector<std::size_t> ecv_depot;        // per ECV
  std::vector<std::size_t> ca_sites;         // W^C as indices into scenario.ecv_sites
  std::vector<double> ca_min_stay;
  std::vector<std::vector<double>> ca_travel;

  std::vector<std::size_t> load_cells;       // C^L
  double load_weight_total = 0.0;

  std::size_t n_crews() const { return crew_depot.size(); }
  std::size_t n_ecvs() const { return ecv_depot.size(); }
  std::size_t n_cells() const { return cells.cells.size(); }
  double ra_leg(std::size_t from_loc, std::size_t to_loc) const { return ra_travel[from_loc][to_loc]; }
  double ca_leg(std::size_t from_loc, std::size_t to_loc) const { return ca_travel[from_loc][to_loc]; }
  std::size_t ra_site_loc(std::size_t site) const { return crew_depots.size() + site; }
  std::size_t ca_site_loc(std::size_t site) const { return ecv_depots.size() + site; }
  const std::string& ca_site_id(std::size_t pos) const { return scenario->ecv_sites[ca_sites[pos]].id; }
  const std::string& crew_id(std::size_t c) const { return scenario->crews[c].id; }
  const std::string& ecv_id(std::size_t v) const { return scenario->ecvs[v].id; }
  int cell_id(std::size_t c) const { return cells.cells[c].id; }

  std::optional<std::size_t> switch_index(const std::string& id) const;
  std::optional<std::size_t> ra_site_index(const std::string& id) const;
  std::optional<std::size_t> ca_site_index(const std::string& id) const;
  std::optional<std::size_t> cell_index(int id) const;
  std::optional<std::size_t> crew_index(const std::string& id) const;
  std::optional<std::size_t> ecv_index(const std::string& id) const;
  /// Whether ECV v covers the FTU of switch s from ca site position k.
  bool ecv_covers(std::size_t v, std::size_t ca_pos, std::size_t s) const;
  /// True when the CA table satisfies the triangle inequality.
  bool ca_travel_metric() const;
};

/// Builds the variant-specific instance. `scenario` must outlive the result.
Instance make_instance(const Scenario& scenario, Variant variant);

}  // namespace dsr
