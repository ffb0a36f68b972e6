#include "dsr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace dsr {

using nlohmann::json;

ScenarioError::ScenarioError(Kind kind, std::string field, const std::string& message)
    : std::runtime_error([&] {
        const char* label = kind == Kind::Schema              ? "schema violation"
                            : kind == Kind::DanglingReference ? "dangling reference"
                                                              : "invariant violation";
        return std::string(label) + " at " + (field.empty() ? "<root>" : field) + ": " + message;
      }()),
      kind_(kind),
      field_(std::move(field)) {}

std::optional<std::size_t> TravelMatrix::index_of(const std::string& id) const {
  auto it = std::find(locations.begin(), locations.end(), id);
  if (it == locations.end()) return std::nullopt;
  return static_cast<std::size_t>(it - locations.begin());
}

std::optional<std::size_t> Scenario::node_index(const std::string& id) const {
  for (std::size_t i = 0; i < grid.nodes.size(); ++i)
    if (grid.nodes[i].id == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> Scenario::line_index(const std::string& id) const {
  for (std::size_t i = 0; i < grid.lines.size(); ++i)
    if (grid.lines[i].id == id) return i;
  return std::nullopt;
}

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
  throw ScenarioError(ScenarioError::Kind::Schema, path, msg);
}
[[noreturn]] void invariant(const std::string& path, const std::string& msg) {
  throw ScenarioError(ScenarioError::Kind::Invariant, path, msg);
}
[[noreturn]] void dangling(const std::string& path, const std::string& msg) {
  throw ScenarioError(ScenarioError::Kind::DanglingReference, path, msg);
}

std::string at(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}
std::string idx(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

void expect_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) schema(path, "expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!ok) schema(at(path, key), "unknown key");
  }
}

const json& member(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) schema(at(path, key), "required field missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) schema(path, "number must be finite");
  return v;
}

double req_number(const json& j, const char* key, const std::string& path) {
  return number(member(j, key, path), at(path, key));
}

double opt_number(const json& j, const char* key, const std::string& path, double fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : number(*it, at(path, key));
}

std::string req_string(const json& j, const char* key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_string()) schema(at(path, key), "expected a string");
  return v.get<std::string>();
}

bool opt_bool(const json& j, const char* key, const std::string& path, bool fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) schema(at(path, key), "expected a boolean");
  return it->get<bool>();
}

const json& req_array(const json& j, const char* key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_array()) schema(at(path, key), "expected an array");
  return v;
}

const json* opt_array(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) return nullptr;
  if (!it->is_array()) schema(at(path, key), "expected an array");
  return &*it;
}

Depot parse_depot(const json& j, const std::string& path) {
  expect_object(j, path, {"id", "x", "y", "capacity"});
  Depot d;
  d.id = req_string(j, "id", path);
  d.x = req_number(j, "x", path);
  d.y = req_number(j, "y", path);
  double cap = req_number(j, "capacity", path);
  if (cap != std::floor(cap)) schema(at(path, "capacity"), "expected an integer");
  d.capacity = static_cast<int>(cap);
  return d;
}

TravelMatrix parse_matrix(const json& j, const std::string& path) {
  expect_object(j, path, {"locations", "minutes"});
  TravelMatrix m;
  const json& locs = req_array(j, "locations", path);
  for (std::size_t i = 0; i < locs.size(); ++i) {
    if (!locs[i].is_string()) schema(idx(at(path, "locations"), i), "expected a string");
    m.locations.push_back(locs[i].get<std::string>());
  }
  const json& rows = req_array(j, "minutes", path);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string rp = idx(at(path, "minutes"), i);
    if (!rows[i].is_array()) schema(rp, "expected an array");
    std::vector<double> row;
    for (std::size_t k = 0; k < rows[i].size(); ++k) row.push_back(number(rows[i][k], idx(rp, k)));
    m.minutes.push_back(std::move(row));
  }
  return m;
}

json matrix_to_json(const TravelMatrix& m) {
  return json{{"locations", m.locations}, {"minutes", m.minutes}};
}

bool valid_id(const std::string& id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.';
  });
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

void check_unique_ids(const std::vector<std::string>& ids, const std::string& path) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!valid_id(ids[i]))
      schema(idx(path, i) + ".id", "identifier '" + ids[i] + "' must match [A-Za-z0-9.-]+");
    if (!seen.insert(ids[i]).second) invariant(idx(path, i) + ".id", "duplicate identifier '" + ids[i] + "'");
  }
}

void check_matrix(const TravelMatrix& m, const std::vector<Location>& required, const std::string& path) {
  const std::size_t n = m.locations.size();
  if (m.minutes.size() != n) invariant(at(path, "minutes"), "matrix must be square over its locations");
  for (std::size_t i = 0; i < n; ++i) {
    if (m.minutes[i].size() != n) invariant(idx(at(path, "minutes"), i), "matrix must be square over its locations");
    for (std::size_t j = 0; j < n; ++j) {
      double v = m.minutes[i][j];
      if (!std::isfinite(v) || v < 0) invariant(idx(idx(at(path, "minutes"), i), j), "travel time must be finite and >= 0");
      if (i == j && v != 0) invariant(idx(idx(at(path, "minutes"), i), j), "travel diagonal must be 0");
    }
  }
  std::set<std::string> listed(m.locations.begin(), m.locations.end());
  if (listed.size() != n) invariant(at(path, "locations"), "duplicate location");
  for (const auto& loc : required)
    if (!listed.count(loc.id)) dangling(at(path, "locations"), "travel matrix lacks location '" + loc.id + "'");
}

}  // namespace

std::vector<Location> crew_locations(const Scenario& s) {
  std::vector<Location> out;
  for (const auto& d : s.crew_depots) out.push_back({d.id, d.x, d.y});
  for (const auto& line : s.grid.lines) {
    if (!line.sw && !line.faulted) continue;
    auto a = s.node_index(line.from);
    auto b = s.node_index(line.to);
    double x = 0, y = 0;
    if (a && b) {
      x = 0.5 * (s.grid.nodes[*a].x + s.grid.nodes[*b].x);
      y = 0.5 * (s.grid.nodes[*a].y + s.grid.nodes[*b].y);
    }
    out.push_back({line.id, x, y});
  }
  return out;
}

std::vector<Location> ecv_locations(const Scenario& s) {
  std::vector<Location> out;
  for (const auto& d : s.ecv_depots) out.push_back({d.id, d.x, d.y});
  for (const auto& k : s.ecv_sites) out.push_back({k.id, k.x, k.y});
  return out;
}

TravelMatrix euclidean_matrix(const std::vector<Location>& points, double scale, double resolution) {
  TravelMatrix m;
  const std::size_t n = points.size();
  m.minutes.assign(n, std::vector<double>(n, 0.0));
  for (const auto& p : points) m.locations.push_back(p.id);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double t = scale * std::hypot(points[i].x - points[j].x, points[i].y - points[j].y);
      if (resolution > 0) t = std::round(t / resolution) * resolution;
      m.minutes[i][j] = t;
    }
  }
  return m;
}

TravelModel derive_travel(const Scenario& s) {
  TravelModel out = s.travel;
  if (s.travel.mode == TravelMode::Explicit) {
    check_matrix(s.travel.crew, crew_locations(s), "travel.crew");
    check_matrix(s.travel.ecv, ecv_locations(s), "travel.ecv");
    return out;
  }
  out.mode = TravelMode::Explicit;
  out.crew = euclidean_matrix(crew_locations(s), s.travel.scale_minutes_per_unit, s.travel.resolution_minutes);
  out.ecv = euclidean_matrix(ecv_locations(s), s.travel.scale_minutes_per_unit, s.travel.resolution_minutes);
  return out;
}

Scenario parse_scenario(const json& doc) {
  expect_object(doc, "", {"name", "horizon_minutes", "start_time", "nodes", "lines", "sources", "crew_depots",
                          "ecv_depots", "crews", "ecvs", "ecv_sites", "travel", "defaults", "weights"});
  Scenario s;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) schema("name", "expected a string");
    s.name = it->get<std::string>();
  }

  if (auto it = doc.find("defaults"); it != doc.end()) {
    expect_object(*it, "defaults", {"repair_minutes", "manual_op_minutes", "auto_op_minutes", "residual_minutes",
                                    "min_stay_minutes", "horizon_minutes"});
    auto& d = s.defaults;
    d.repair_minutes = opt_number(*it, "repair_minutes", "defaults", d.repair_minutes);
    d.manual_op_minutes = opt_number(*it, "manual_op_minutes", "defaults", d.manual_op_minutes);
    d.auto_op_minutes = opt_number(*it, "auto_op_minutes", "defaults", d.auto_op_minutes);
    d.residual_minutes = opt_number(*it, "residual_minutes", "defaults", d.residual_minutes);
    d.min_stay_minutes = opt_number(*it, "min_stay_minutes", "defaults", d.min_stay_minutes);
    d.horizon_minutes = opt_number(*it, "horizon_minutes", "defaults", d.horizon_minutes);
  }
  s.horizon_minutes = opt_number(doc, "horizon_minutes", "", s.defaults.horizon_minutes);
  s.start_time = opt_number(doc, "start_time", "", 0.0);

  const json& nodes = req_array(doc, "nodes", "");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string p = idx("nodes", i);
    expect_object(nodes[i], p, {"id", "x", "y", "load_kw", "weight"});
    Node n;
    n.id = req_string(nodes[i], "id", p);
    n.x = req_number(nodes[i], "x", p);
    n.y = req_number(nodes[i], "y", p);
    n.load_kw = opt_number(nodes[i], "load_kw", p, 0.0);
    if (nodes[i].contains("weight")) n.weight = req_number(nodes[i], "weight", p);
    s.grid.nodes.push_back(std::move(n));
  }

  const json& lines = req_array(doc, "lines", "");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string p = idx("lines", i);
    expect_object(lines[i], p, {"id", "from", "to", "switch", "faulted", "repair_minutes"});
    Line l;
    l.id = req_string(lines[i], "id", p);
    l.from = req_string(lines[i], "from", p);
    l.to = req_string(lines[i], "to", p);
    l.faulted = opt_bool(lines[i], "faulted", p, false);
    l.repair_minutes = opt_number(lines[i], "repair_minutes", p, s.defaults.repair_minutes);
    if (auto it = lines[i].find("switch"); it != lines[i].end()) {
      std::string sp = at(p, "switch");
      expect_object(*it, sp, {"kind", "ftu", "manual_op_minutes", "auto_op_minutes", "intact_remote"});
      SwitchSpec sw;
      std::string kind = req_string(*it, "kind", sp);
      if (kind == "automatic") sw.kind = SwitchKind::Automatic;
      else if (kind == "manual") sw.kind = SwitchKind::Manual;
      else schema(at(sp, "kind"), "expected 'automatic' or 'manual'");
      sw.manual_op_minutes = opt_number(*it, "manual_op_minutes", sp, s.defaults.manual_op_minutes);
      sw.auto_op_minutes = opt_number(*it, "auto_op_minutes", sp, s.defaults.auto_op_minutes);
      sw.intact_remote = opt_bool(*it, "intact_remote", sp, false);
      if (auto ft = it->find("ftu"); ft != it->end()) {
        std::string fp = at(sp, "ftu");
        expect_object(*ft, fp, {"side", "x", "y", "residual_minutes", "damaged"});
        Ftu f;
        std::string side = req_string(*ft, "side", fp);
        if (side == "from") f.side = FtuSide::From;
        else if (side == "to") f.side = FtuSide::To;
        else schema(at(fp, "side"), "expected 'from' or 'to'");
        // Coordinates default to the node on the FTU's side.
        const std::string& side_node = f.side == FtuSide::From ? l.from : l.to;
        auto ni = s.node_index(side_node);
        double dx = ni ? s.grid.nodes[*ni].x : 0.0;
        double dy = ni ? s.grid.nodes[*ni].y : 0.0;
        f.x = opt_number(*ft, "x", fp, dx);
        f.y = opt_number(*ft, "y", fp, dy);
        f.residual_minutes = opt_number(*ft, "residual_minutes", fp, s.defaults.residual_minutes);
        if (f.residual_minutes > s.horizon_minutes) f.residual_minutes = s.horizon_minutes;
        f.damaged = opt_bool(*ft, "damaged", fp, false);
        sw.ftu = f;
      }
      l.sw = sw;
    }
    s.grid.lines.push_back(std::move(l));
  }

  const json& sources = req_array(doc, "sources", "");
  for (std::size_t i = 0; i < sources.size(); ++i) {
    std::string p = idx("sources", i);
    expect_object(sources[i], p, {"node", "available_at"});
    s.grid.sources.push_back({req_string(sources[i], "node", p), opt_number(sources[i], "available_at", p, 0.0)});
  }

  const json& cds = req_array(doc, "crew_depots", "");
  for (std::size_t i = 0; i < cds.size(); ++i) s.crew_depots.push_back(parse_depot(cds[i], idx("crew_depots", i)));
  if (const json* eds = opt_array(doc, "ecv_depots", ""))
    for (std::size_t i = 0; i < eds->size(); ++i) s.ecv_depots.push_back(parse_depot((*eds)[i], idx("ecv_depots", i)));

  const json& crews = req_array(doc, "crews", "");
  for (std::size_t i = 0; i < crews.size(); ++i) {
    std::string p = idx("crews", i);
    expect_object(crews[i], p, {"id", "depot"});
    s.crews.push_back({req_string(crews[i], "id", p), req_string(crews[i], "depot", p)});
  }
  if (const json* ecvs = opt_array(doc, "ecvs", ""))
    for (std::size_t i = 0; i < ecvs->size(); ++i) {
      std::string p = idx("ecvs", i);
      expect_object((*ecvs)[i], p, {"id", "depot", "radius"});
      s.ecvs.push_back({req_string((*ecvs)[i], "id", p), req_string((*ecvs)[i], "depot", p),
                        req_number((*ecvs)[i], "radius", p)});
    }
  if (const json* sites = opt_array(doc, "ecv_sites", ""))
    for (std::size_t i = 0; i < sites->size(); ++i) {
      std::string p = idx("ecv_sites", i);
      const json& k = (*sites)[i];
      expect_object(k, p, {"id", "x", "y", "min_stay_minutes", "intact_base_station"});
      EcvWorkSite w;
      w.id = req_string(k, "id", p);
      w.x = req_number(k, "x", p);
      w.y = req_number(k, "y", p);
      w.min_stay_minutes = opt_number(k, "min_stay_minutes", p, s.defaults.min_stay_minutes);
      w.intact_base_station = opt_bool(k, "intact_base_station", p, false);
      s.ecv_sites.push_back(std::move(w));
    }

  const json& travel = member(doc, "travel", "");
  expect_object(travel, "travel", {"mode", "scale_minutes_per_unit", "resolution_minutes", "crew", "ecv"});
  std::string mode = req_string(travel, "mode", "travel");
  if (mode == "euclidean_scaled") {
    s.travel.mode = TravelMode::EuclideanScaled;
    s.travel.scale_minutes_per_unit = req_number(travel, "scale_minutes_per_unit", "travel");
  } else if (mode == "explicit") {
    s.travel.mode = TravelMode::Explicit;
    s.travel.crew = parse_matrix(member(travel, "crew", "travel"), "travel.crew");
    if (travel.contains("ecv")) s.travel.ecv = parse_matrix(travel["ecv"], "travel.ecv");
  } else {
    schema("travel.mode", "expected 'euclidean_scaled' or 'explicit'");
  }
  s.travel.resolution_minutes = opt_number(travel, "resolution_minutes", "travel", 0.0);

  if (auto it = doc.find("weights"); it != doc.end()) {
    expect_object(*it, "weights", {"beta_ea", "beta_ra", "beta_ca", "omega_ra", "omega_ca"});
    auto& w = s.weights;
    w.beta_ea = opt_number(*it, "beta_ea", "weights", w.beta_ea);
    w.beta_ra = opt_number(*it, "beta_ra", "weights", w.beta_ra);
    w.beta_ca = opt_number(*it, "beta_ca", "weights", w.beta_ca);
    auto pair = [&](const char* key, double& a, double& b) {
      auto p = it->find(key);
      if (p == it->end()) return;
      std::string path = at("weights", key);
      if (!p->is_array() || p->size() != 2) schema(path, "expected [omega1, omega2]");
      a = number((*p)[0], idx(path, 0));
      b = number((*p)[1], idx(path, 1));
    };
    pair("omega_ra", w.omega_ra1, w.omega_ra2);
    pair("omega_ca", w.omega_ca1, w.omega_ca2);
  }

  validate_scenario(s);
  return s;
}

void validate_scenario(const Scenario& s) {
  if (!(s.horizon_minutes > 0)) invariant("horizon_minutes", "horizon must be positive");
  if (s.start_time < 0 || s.start_time >= s.horizon_minutes)
    invariant("start_time", "start time must satisfy 0 <= T0 < horizon");

  std::vector<std::string> ids;
  for (const auto& n : s.grid.nodes) ids.push_back(n.id);
  check_unique_ids(ids, "nodes");
  if (s.grid.nodes.empty()) invariant("nodes", "grid needs at least one node");
  for (std::size_t i = 0; i < s.grid.nodes.size(); ++i) {
    const auto& n = s.grid.nodes[i];
    if (n.load_kw < 0) invariant(idx("nodes", i) + ".load_kw", "load must be >= 0");
    if (n.weight && *n.weight < 0) invariant(idx("nodes", i) + ".weight", "weight must be >= 0");
  }

  ids.clear();
  for (const auto& l : s.grid.lines) ids.push_back(l.id);
  check_unique_ids(ids, "lines");

  const std::size_t nn = s.grid.nodes.size();
  UnionFind all(nn), cells(nn);
  for (std::size_t i = 0; i < s.grid.lines.size(); ++i) {
    const auto& l = s.grid.lines[i];
    std::string p = idx("lines", i);
    auto a = s.node_index(l.from);
    auto b = s.node_index(l.to);
    if (!a) dangling(p + ".from", "unknown node '" + l.from + "'");
    if (!b) dangling(p + ".to", "unknown node '" + l.to + "'");
    if (*a == *b) invariant(p, "line endpoints must differ");
    if (l.repair_minutes < 0) invariant(p + ".repair_minutes", "repair time must be >= 0");
    if (l.faulted && !(l.repair_minutes > 0)) invariant(p + ".repair_minutes", "faulted line requires repair_minutes > 0");
    all.unite(*a, *b);
    if (l.sw) {
      const auto& sw = *l.sw;
      std::string sp = p + ".switch";
      if (sw.kind == SwitchKind::Automatic && !sw.ftu) invariant(sp + ".ftu", "automatic switch requires an FTU");
      if (sw.kind == SwitchKind::Manual && sw.ftu) invariant(sp + ".ftu", "manual switch must not carry an FTU");
      if (sw.kind == SwitchKind::Manual && sw.intact_remote)
        invariant(sp + ".intact_remote", "manual switch cannot be remotely operable");
      if (!(sw.manual_op_minutes > 0)) invariant(sp + ".manual_op_minutes", "manual operation time must be > 0");
      if (!(sw.auto_op_minutes > 0)) invariant(sp + ".auto_op_minutes", "remote operation time must be > 0");
      if (sw.ftu) {
        if (sw.ftu->residual_minutes < 0) invariant(sp + ".ftu.residual_minutes", "residual time must be >= 0");
        if (sw.ftu->residual_minutes > s.horizon_minutes)
          invariant(sp + ".ftu.residual_minutes", "residual time must be clamped to the horizon");
      }
      if (sw.intact_remote && (l.faulted || (sw.ftu && sw.ftu->damaged)))
        invariant(sp + ".intact_remote", "an intact remote switch cannot be faulted or have a damaged FTU");
    } else {
      cells.unite(*a, *b);
    }
  }
  for (std::size_t i = 1; i < nn; ++i)
    if (all.find(i) != all.find(0)) invariant("lines", "grid with all switches closed must be connected");

  // Switch lines become cell-graph edges; the naming scheme keys directed
  // switch variables by cell pair, so each pair may carry one switch.
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < s.grid.lines.size(); ++i) {
    const auto& l = s.grid.lines[i];
    if (!l.sw) continue;
    std::size_t a = cells.find(*s.node_index(l.from));
    std::size_t b = cells.find(*s.node_index(l.to));
    if (a == b) invariant(idx("lines", i), "switch must connect two distinct node cells");
    if (!pairs.insert({std::min(a, b), std::max(a, b)}).second)
      invariant(idx("lines", i), "two switches join the same pair of node cells");
  }

  if (s.grid.sources.empty()) invariant("sources", "at least one source is required");
  for (std::size_t i = 0; i < s.grid.sources.size(); ++i) {
    const auto& src = s.grid.sources[i];
    if (!s.node_index(src.node)) dangling(idx("sources", i) + ".node", "unknown node '" + src.node + "'");
    if (src.available_at < 0 || src.available_at > s.horizon_minutes)
      invariant(idx("sources", i) + ".available_at", "availability must lie in [0, horizon]");
  }

  ids.clear();
  for (const auto& d : s.crew_depots) ids.push_back(d.id);
  check_unique_ids(ids, "crew_depots");
  ids.clear();
  for (const auto& d : s.ecv_depots) ids.push_back(d.id);
  check_unique_ids(ids, "ecv_depots");
  ids.clear();
  for (const auto& c : s.crews) ids.push_back(c.id);
  check_unique_ids(ids, "crews");
  ids.clear();
  for (const auto& v : s.ecvs) ids.push_back(v.id);
  check_unique_ids(ids, "ecvs");
  ids.clear();
  for (const auto& k : s.ecv_sites) ids.push_back(k.id);
  check_unique_ids(ids, "ecv_sites");

  // Route tables index depots and worksites jointly.
  for (const auto& d : s.crew_depots)
    if (s.line_index(d.id)) invariant("crew_depots", "crew depot id '" + d.id + "' collides with a line id");
  for (const auto& d : s.ecv_depots)
    for (const auto& k : s.ecv_sites)
      if (d.id == k.id) invariant("ecv_depots", "ECV depot id '" + d.id + "' collides with an ECV site id");

  auto check_fleet = [&](const std::vector<Depot>& depots, const std::string& depot_path,
                         const std::vector<std::string>& fleet_depots, const std::string& fleet_path) {
    std::map<std::string, int> count;
    for (std::size_t i = 0; i < fleet_depots.size(); ++i) {
      auto it = std::find_if(depots.begin(), depots.end(), [&](const Depot& d) { return d.id == fleet_depots[i]; });
      if (it == depots.end()) dangling(idx(fleet_path, i) + ".depot", "unknown depot '" + fleet_depots[i] + "'");
      ++count[fleet_depots[i]];
    }
    for (std::size_t i = 0; i < depots.size(); ++i) {
      if (depots[i].capacity < 0) invariant(idx(depot_path, i) + ".capacity", "capacity must be >= 0");
      if (count[depots[i].id] > depots[i].capacity)
        invariant(idx(depot_path, i) + ".capacity", "fleet stationed at depot exceeds its capacity");
    }
  };
  std::vector<std::string> fleet;
  for (const auto& c : s.crews) fleet.push_back(c.depot);
  check_fleet(s.crew_depots, "crew_depots", fleet, "crews");
  fleet.clear();
  for (const auto& v : s.ecvs) fleet.push_back(v.depot);
  check_fleet(s.ecv_depots, "ecv_depots", fleet, "ecvs");

  for (std::size_t i = 0; i < s.ecvs.size(); ++i)
    if (!(s.ecvs[i].radius > 0) || !std::isfinite(s.ecvs[i].radius))
      invariant(idx("ecvs", i) + ".radius", "radius must be positive and finite");
  for (std::size_t i = 0; i < s.ecv_sites.size(); ++i) {
    double m = s.ecv_sites[i].min_stay_minutes;
    if (m < 0 || m > s.horizon_minutes) invariant(idx("ecv_sites", i) + ".min_stay_minutes", "minimum stay must lie in [0, horizon]");
  }

  if (s.travel.mode == TravelMode::EuclideanScaled) {
    if (!(s.travel.scale_minutes_per_unit > 0)) invariant("travel.scale_minutes_per_unit", "scale must be positive");
  } else {
    check_matrix(s.travel.crew, crew_locations(s), "travel.crew");
    check_matrix(s.travel.ecv, ecv_locations(s), "travel.ecv");
  }
  if (s.travel.resolution_minutes < 0) invariant("travel.resolution_minutes", "resolution must be >= 0");

  const auto& w = s.weights;
  for (auto [name, v] : {std::pair{"beta_ra", w.beta_ra}, {"beta_ca", w.beta_ca}, {"omega_ra", w.omega_ra1},
                         {"omega_ra", w.omega_ra2}, {"omega_ca", w.omega_ca1}, {"omega_ca", w.omega_ca2}})
    if (v < 0) invariant(std::string("weights.") + name, "weights must be non-negative");
  if (!(w.beta_ea > 0)) invariant("weights.beta_ea", "beta_ea must be positive");
}

Scenario parse_scenario_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    schema("", std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario s = parse_scenario_text(buf.str());
  if (s.name.empty()) s.name = path.stem().string();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["horizon_minutes"] = s.horizon_minutes;
  doc["start_time"] = s.start_time;
  json nodes = json::array();
  for (const auto& n : s.grid.nodes) {
    json j{{"id", n.id}, {"x", n.x}, {"y", n.y}, {"load_kw", n.load_kw}};
    if (n.weight) j["weight"] = *n.weight;
    nodes.push_back(j);
  }
  doc["nodes"] = nodes;
  json lines = json::array();
  for (const auto& l : s.grid.lines) {
    json j{{"id", l.id}, {"from", l.from}, {"to", l.to}, {"faulted", l.faulted}, {"repair_minutes", l.repair_minutes}};
    if (l.sw) {
      json sw{{"kind", l.sw->kind == SwitchKind::Automatic ? "automatic" : "manual"},
              {"manual_op_minutes", l.sw->manual_op_minutes},
              {"auto_op_minutes", l.sw->auto_op_minutes},
              {"intact_remote", l.sw->intact_remote}};
      if (l.sw->ftu) {
        const auto& f = *l.sw->ftu;
        sw["ftu"] = json{{"side", f.side == FtuSide::From ? "from" : "to"},
                         {"x", f.x},
                         {"y", f.y},
                         {"residual_minutes", f.residual_minutes},
                         {"damaged", f.damaged}};
      }
      j["switch"] = sw;
    }
    lines.push_back(j);
  }
  doc["lines"] = lines;
  json sources = json::array();
  for (const auto& src : s.grid.sources) sources.push_back({{"node", src.node}, {"available_at", src.available_at}});
  doc["sources"] = sources;
  auto depots = [](const std::vector<Depot>& ds) {
    json arr = json::array();
    for (const auto& d : ds) arr.push_back({{"id", d.id}, {"x", d.x}, {"y", d.y}, {"capacity", d.capacity}});
    return arr;
  };
  doc["crew_depots"] = depots(s.crew_depots);
  doc["ecv_depots"] = depots(s.ecv_depots);
  json crews = json::array();
  for (const auto& c : s.crews) crews.push_back({{"id", c.id}, {"depot", c.depot}});
  doc["crews"] = crews;
  json ecvs = json::array();
  for (const auto& v : s.ecvs) ecvs.push_back({{"id", v.id}, {"depot", v.depot}, {"radius", v.radius}});
  doc["ecvs"] = ecvs;
  json sites = json::array();
  for (const auto& k : s.ecv_sites)
    sites.push_back({{"id", k.id},
                     {"x", k.x},
                     {"y", k.y},
                     {"min_stay_minutes", k.min_stay_minutes},
                     {"intact_base_station", k.intact_base_station}});
  doc["ecv_sites"] = sites;
  json travel;
  if (s.travel.mode == TravelMode::EuclideanScaled) {
    travel = {{"mode", "euclidean_scaled"}, {"scale_minutes_per_unit", s.travel.scale_minutes_per_unit}};
  } else {
    travel = {{"mode", "explicit"}, {"crew", matrix_to_json(s.travel.crew)}, {"ecv", matrix_to_json(s.travel.ecv)}};
  }
  travel["resolution_minutes"] = s.travel.resolution_minutes;
  doc["travel"] = travel;
  const auto& d = s.defaults;
  doc["defaults"] = {{"repair_minutes", d.repair_minutes},     {"manual_op_minutes", d.manual_op_minutes},
                     {"auto_op_minutes", d.auto_op_minutes},   {"residual_minutes", d.residual_minutes},
                     {"min_stay_minutes", d.min_stay_minutes}, {"horizon_minutes", d.horizon_minutes}};
  const auto& w = s.weights;
  doc["weights"] = {{"beta_ea", w.beta_ea},
                    {"beta_ra", w.beta_ra},
                    {"beta_ca", w.beta_ca},
                    {"omega_ra", {w.omega_ra1, w.omega_ra2}},
                    {"omega_ca", {w.omega_ca1, w.omega_ca2}}};
  return doc;
}

std::uint64_t scenario_hash(const Scenario& s) {
  const std::string text = scenario_to_json(s).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace dsr
