#include "dsr/topology.hpp"

#include <numeric>

namespace dsr {

const SwitchEdge* CellGraph::edge_for_line(const std::string& line_id) const {
  for (const auto& e : switch_edges)
    if (e.line_id == line_id) return &e;
  return nullptr;
}

double CellGraph::total_load() const {
  double total = 0.0;
  for (const auto& c : cells) total += c.load_kw;
  return total;
}

CellGraph partition_cells(const Scenario& s) {
  const auto& nodes = s.grid.nodes;
  const std::size_t n = nodes.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& l : s.grid.lines) {
    if (l.sw) continue;
    std::size_t a = find(*s.node_index(l.from)), b = find(*s.node_index(l.to));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  CellGraph g;
  std::map<std::size_t, std::size_t> root_to_cell;
  std::vector<bool> has_weight;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = find(i);
    auto [it, fresh] = root_to_cell.emplace(r, g.cells.size());
    if (fresh) {
      NodeCell c;
      c.id = static_cast<int>(g.cells.size()) + 1;
      c.weight = 0.0;
      g.cells.push_back(c);
      has_weight.push_back(false);
    }
    NodeCell& c = g.cells[it->second];
    c.nodes.push_back(nodes[i].id);
    c.load_kw += nodes[i].load_kw;
    if (nodes[i].weight) {
      c.weight += *nodes[i].weight;
      has_weight[it->second] = true;
    }
    g.node_to_cell[nodes[i].id] = it->second;
  }
  for (std::size_t c = 0; c < g.cells.size(); ++c)
    if (!has_weight[c]) g.cells[c].weight = 1.0;

  for (std::size_t li = 0; li < s.grid.lines.size(); ++li) {
    const auto& l = s.grid.lines[li];
    if (l.sw) {
      g.switch_edges.push_back({l.id, li, g.node_to_cell.at(l.from), g.node_to_cell.at(l.to)});
    } else if (l.faulted) {
      std::size_t c = g.node_to_cell.at(l.from);
      g.cells[c].faults.push_back(l.id);
      g.fault_to_cell[l.id] = c;
    }
  }
  for (const auto& src : s.grid.sources) {
    NodeCell& c = g.cells[g.node_to_cell.at(src.node)];
    c.available_at = c.is_source ? std::min(c.available_at, src.available_at) : src.available_at;
    c.is_source = true;
  }
  return g;
}

std::vector<RepairSite> repair_worksites(const CellGraph&, const Scenario& s) {
  std::vector<RepairSite> out;
  for (std::size_t li = 0; li < s.grid.lines.size(); ++li) {
    const auto& l = s.grid.lines[li];
    if (!l.sw && !l.faulted) continue;
    const auto& a = s.grid.nodes[*s.node_index(l.from)];
    const auto& b = s.grid.nodes[*s.node_index(l.to)];
    out.push_back({l.id, li, l.sw.has_value(), l.faulted, 0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
  }
  return out;
}

nlohmann::json cell_graph_to_json(const CellGraph& g) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : g.cells) {
    nlohmann::json j{{"id", c.id},         {"nodes", c.nodes},          {"load_kw", c.load_kw},
                     {"weight", c.weight}, {"faults", c.faults},        {"is_source", c.is_source}};
    if (c.is_source) j["available_at"] = c.available_at;
    cells.push_back(j);
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.switch_edges)
    edges.push_back({{"switch", e.line_id}, {"from_cell", g.cells[e.from_cell].id}, {"to_cell", g.cells[e.to_cell].id}});
  return {{"cells", cells}, {"switch_edges", edges}};
}

}  // namespace dsr
