#include <numeric>
#include <random>

#include "doctest.h"
#include "dsr/coverage.hpp"
#include "dsr/topology.hpp"
#include "support.hpp"

using namespace dsr;
using namespace dsr::test;

namespace {

// Chain of nodes n1..nk along the x axis; `kinds[i]` describes line i
// ("" plain, "m" manual switch, "a" automatic switch, "f" faulted line).
std::string chain(const std::vector<std::string>& kinds) {
  nlohmann::json doc = {{"name", "chain"},
                        {"sources", {{{"node", "n1"}}}},
                        {"crew_depots", {{{"id", "D1"}, {"x", 0}, {"y", 10}, {"capacity", 1}}}},
                        {"ecv_depots", nlohmann::json::array()},
                        {"crews", {{{"id", "C1"}, {"depot", "D1"}}}},
                        {"ecvs", nlohmann::json::array()},
                        {"ecv_sites", nlohmann::json::array()},
                        {"travel", {{"mode", "euclidean_scaled"}, {"scale_minutes_per_unit", 1.0}}}};
  auto& nodes = doc["nodes"] = nlohmann::json::array();
  auto& lines = doc["lines"] = nlohmann::json::array();
  for (std::size_t i = 0; i <= kinds.size(); ++i)
    nodes.push_back({{"id", "n" + std::to_string(i + 1)}, {"x", 10.0 * i}, {"y", 0.0}, {"load_kw", 10.0}});
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    nlohmann::json ln = {{"id", "L" + std::to_string(i + 1)}, {"from", "n" + std::to_string(i + 1)},
                         {"to", "n" + std::to_string(i + 2)}};
    if (kinds[i] == "m") ln["switch"] = {{"kind", "manual"}};
    if (kinds[i] == "a") ln["switch"] = {{"kind", "automatic"}, {"ftu", {{"side", "from"}}}};
    if (kinds[i] == "f") ln["faulted"] = true;
    lines.push_back(ln);
  }
  return doc.dump();
}

// Independent union-find over the non-switch lines.
std::size_t components(const Scenario& sc) {
  std::vector<std::size_t> p(sc.grid.nodes.size());
  std::iota(p.begin(), p.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return p[x] == x ? x : p[x] = find(p[x]); };
  for (const auto& ln : sc.grid.lines)
    if (!ln.sw) p[find(*sc.node_index(ln.from))] = find(*sc.node_index(ln.to));
  std::size_t n = 0;
  for (std::size_t i = 0; i < p.size(); ++i) n += find(i) == i;
  return n;
}

}  // namespace

TEST_CASE("manual switch splits a chain into two cells") {
  CellGraph g = partition_cells(fixture_text(chain({"m"})));
  CHECK(g.cells.size() == 2);
  CHECK(g.switch_edges.size() == 1);
  CHECK(g.switch_edges[0].from_cell != g.switch_edges[0].to_cell);
}

TEST_CASE("no switches means one cell") {
  CellGraph g = partition_cells(fixture_text(chain({"", "f", ""})));
  CHECK(g.cells.size() == 1);
  CHECK(g.cells[0].faults == std::vector<std::string>{"L2"});
  CHECK(g.fault_to_cell.at("L2") == 0);
  CHECK(g.cells[0].is_source);
}

TEST_CASE("tiny1 partitions into four cells") {
  const Scenario& sc = fixture(data_dir() / "tiny1.json");
  CellGraph g = partition_cells(sc);
  CHECK(g.cells.size() == 4);
  CHECK(g.cells.size() == components(sc));
  CHECK(g.total_load() == doctest::Approx(500.0));
}

TEST_CASE("partition invariants on every fixture") {
  std::vector<std::filesystem::path> all = tiny_fixtures();
  all.push_back(data_dir() / "r123.json");
  for (const auto& p : all) {
    CAPTURE(p);
    const Scenario& sc = fixture(p);
    CellGraph g = partition_cells(sc);
    CHECK(g.cells.size() == components(sc));
    std::size_t members = 0;
    double load = 0, node_load = 0;
    for (const auto& c : g.cells) {
      CHECK(!c.nodes.empty());
      members += c.nodes.size();
      load += c.load_kw;
    }
    for (const auto& n : sc.grid.nodes) node_load += n.load_kw;
    CHECK(members == sc.grid.nodes.size());
    CHECK(load == doctest::Approx(node_load));
    for (const auto& e : g.switch_edges) CHECK(e.from_cell != e.to_cell);
    for (const auto& ln : sc.grid.lines)
      if (ln.faulted && !ln.sw) CHECK(g.fault_to_cell.count(ln.id) == 1);
  }
}

TEST_CASE("repair worksites") {
  {
    // sixteen switches and four faulted plain lines
    std::vector<std::string> kinds;
    for (int i = 0; i < 16; ++i) kinds.push_back(i % 4 == 0 ? "f" : "");
    for (int i = 0; i < 16; ++i) kinds.push_back(i % 2 ? "a" : "m");
    const Scenario& sc = fixture_text(chain(kinds));
    auto sites = repair_worksites(partition_cells(sc), sc);
    CHECK(sites.size() == 20);
  }

  const Scenario& sc = fixture(data_dir() / "tiny1.json");
  auto sites = repair_worksites(partition_cells(sc), sc);
  REQUIRE(sites.size() == 4);
  CHECK(sites[1].id == "L34");
  CHECK(sites[1].is_fault);
  CHECK(!sites[1].is_switch);
  CHECK(sites[1].x == doctest::Approx(50.0));

  const Scenario& none = fixture_text(chain({""}));
  CHECK(repair_worksites(partition_cells(none), none).empty());

  auto doc = nlohmann::json::parse(chain({"a"}));
  doc["lines"][0]["faulted"] = true;
  const Scenario& both = fixture_text(doc.dump());
  auto s = repair_worksites(partition_cells(both), both);
  REQUIRE(s.size() == 1);
  CHECK((s[0].is_switch && s[0].is_fault));
}

TEST_CASE("coverage boundary cases") {
  CoverageInput in;
  in.radius = {5.0};
  in.site_x = {0.0, 0.0, 10.0};
  in.site_y = {0.0, 0.0, 0.0};
  in.ftu_x = {0.0, 3.0};
  in.ftu_y = {0.0, 4.0};
  auto t = coverage_table(in);
  // site 0 sits on FTU 0 and is exactly 5 away from FTU 1
  CHECK(t[0] == 1);
  CHECK(t[1] == 1);
  CHECK(t[4] == 0);
  CHECK(t == coverage_table_serial(in));
}

TEST_CASE("parallel coverage equals the serial reference and a brute-force distance check") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0, 100), R(5, 40);
  for (int rep = 0; rep < 100; ++rep) {
    CoverageInput in;
    for (int v = 0; v < 3; ++v) in.radius.push_back(R(rng));
    for (int k = 0; k < 7; ++k) in.site_x.push_back(U(rng)), in.site_y.push_back(U(rng));
    for (int c = 0; c < 11; ++c) in.ftu_x.push_back(U(rng)), in.ftu_y.push_back(U(rng));
    auto par = coverage_table(in);
    REQUIRE(par == coverage_table_serial(in));
    std::size_t i = 0;
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < 7; ++k)
        for (int c = 0; c < 11; ++c, ++i) {
          const double dx = in.site_x[k] - in.ftu_x[c], dy = in.site_y[k] - in.ftu_y[c];
          CHECK((par[i] != 0) == (dx * dx + dy * dy <= in.radius[v] * in.radius[v] + 1e-9));
        }
  }
}

TEST_CASE("coverage map helpers invert the table") {
  const Scenario& sc = fixture(data_dir() / "r123.json");
  CellGraph g = partition_cells(sc);
  CoverageMap m = compute_coverage(sc, g);
  CHECK(m == compute_coverage_serial(sc, g));
  for (std::size_t v = 0; v < m.ecvs.size(); ++v)
    for (std::size_t c = 0; c < m.ftus.size(); ++c)
      for (std::size_t k : m.sites_covering(v, c)) {
        auto at = m.ftus_at(v, k);
        CHECK(std::find(at.begin(), at.end(), c) != at.end());
      }
  const std::string csv = coverage_csv(m);
  CHECK(csv.rfind("ecv,site,ftu,covered", 0) == 0);
}
