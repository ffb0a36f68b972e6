#pragma once

#include <map>
#include <string>
#include <vector>

#include "dsr/scenario.hpp"

namespace dsr {

struct NodeCell {
  int id = 0;  // 1-based, in order of each cell's first node in the input
  std::vector<std::string> nodes;
  double load_kw = 0.0;
  double weight = 1.0;
  std::vector<std::string> faults;  // faulted non-switch lines inside the cell
  bool is_source = false;
  double available_at = 0.0;  // earliest source availability, if is_source
};

/// A switch-bearing line seen as an edge between two cells. `from_cell` is the
/// cell of the line's `from` node.
struct SwitchEdge {
  std::string line_id;
  std::size_t line_index = 0;
  std::size_t from_cell = 0;  // index into CellGraph::cells
  std::size_t to_cell = 0;
};

struct CellGraph {
  std::vector<NodeCell> cells;
  std::vector<SwitchEdge> switch_edges;
  std::map<std::string, std::size_t> node_to_cell;
  std::map<std::string, std::size_t> fault_to_cell;  // r^e: non-switch fault -> cell index

  std::size_t cell_of_node(const std::string& node) const { return node_to_cell.at(node); }
  const SwitchEdge* edge_for_line(const std::string& line_id) const;
  double total_load() const;
};

CellGraph partition_cells(const Scenario& scenario);

/// A crew working site: a switch, a faulted line, or both.
struct RepairSite {
  std::string id;  // line id
  std::size_t line_index = 0;
  bool is_switch = false;
  bool is_fault = false;
  double x = 0.0;  // line midpoint
  double y = 0.0;
};

/// All switch sites and faulted-line sites in input line order.
std::vector<RepairSite> repair_worksites(const CellGraph& cells, const Scenario& scenario);

nlohmann::json cell_graph_to_json(const CellGraph& cells);

}  // namespace dsr
