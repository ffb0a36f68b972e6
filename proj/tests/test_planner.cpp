#include "doctest.h"
#include "dsr/pipeline.hpp"
#include "support.hpp"

using namespace dsr;
using namespace dsr::test;

namespace {

nlohmann::json grid_with_sites(const std::vector<std::pair<double, double>>& sites, int ecvs) {
  // One source cell and three dead cells behind automatic switches whose FTUs
  // sit at x = 10, 20, 30; ECV sites are placed by the caller.
  nlohmann::json doc = {{"name", "cov"},
                        {"sources", {{{"node", "n0"}}}},
                        {"crew_depots", {{{"id", "D1"}, {"x", 0}, {"y", 5}, {"capacity", 1}}}},
                        {"ecv_depots", {{{"id", "E1"}, {"x", 0}, {"y", -5}, {"capacity", ecvs}}}},
                        {"crews", {{{"id", "C1"}, {"depot", "D1"}}}},
                        {"travel", {{"mode", "euclidean_scaled"}, {"scale_minutes_per_unit", 1.0}}}};
  doc["nodes"] = nlohmann::json::array();
  doc["lines"] = nlohmann::json::array();
  for (int i = 0; i <= 3; ++i)
    doc["nodes"].push_back({{"id", "n" + std::to_string(i)}, {"x", 10.0 * i}, {"y", 0}, {"load_kw", i ? 10 : 0}});
  for (int i = 1; i <= 3; ++i)
    doc["lines"].push_back({{"id", "S" + std::to_string(i)},
                            {"from", "n" + std::to_string(i - 1)},
                            {"to", "n" + std::to_string(i)},
                            {"switch", {{"kind", "automatic"}, {"ftu", {{"side", "to"}}}}}});
  doc["ecvs"] = nlohmann::json::array();
  for (int v = 1; v <= ecvs; ++v) doc["ecvs"].push_back({{"id", "V" + std::to_string(v)}, {"depot", "E1"}, {"radius", 4}});
  doc["ecv_sites"] = nlohmann::json::array();
  for (std::size_t k = 0; k < sites.size(); ++k)
    doc["ecv_sites"].push_back({{"id", "W" + std::to_string(k + 1)}, {"x", sites[k].first}, {"y", sites[k].second}});
  return doc;
}

}  // namespace

TEST_CASE("max-coverage takes the site reaching the most FTUs") {
  // radius 10: W1 reaches all three FTUs, W2 two of them, W3 none
  auto doc = grid_with_sites({{20, 0}, {10, 0}, {100, 100}}, 1);
  doc["ecvs"][0]["radius"] = 10;
  const Scenario& sc = fixture_text(doc.dump());
  Instance in = make_instance(sc, Variant::WCA);
  auto routes = max_coverage_routes(in);
  REQUIRE(routes.size() == 1);
  REQUIRE(routes[0].size() == 1);
  CHECK(in.ca_site_id(routes[0][0]) == "W1");
}

TEST_CASE("second ECV takes the best remaining site even when it covers nothing") {
  const Scenario& sc = fixture_text(grid_with_sites({{100, 100}, {20, 0}}, 2).dump());
  Instance in = make_instance(sc, Variant::WCA);
  auto routes = max_coverage_routes(in);
  REQUIRE(routes.size() == 2);
  CHECK(in.ca_site_id(routes[0][0]) == "W2");
  REQUIRE(routes[1].size() == 1);
  CHECK(in.ca_site_id(routes[1][0]) == "W1");
}

TEST_CASE("alg1 on a single fault") {
  const Scenario& sc = fixture(data_dir() / "tiny1.json");
  Instance in = make_instance(sc, Variant::WOCA);
  Plan p = algorithm1_dispatch(in, bfs_path(in));
  REQUIRE(p.ra_routes.size() == 1);
  CHECK(p.ra_routes[0].sites.front() == "L34");  // faults before switches
  Timeline tl = evaluate(p, in);
  REQUIRE(tl.feasible);
  CHECK(validate(p, tl, in).pass);
}

TEST_CASE("heuristics never beat the enumerator") {
  for (const auto& f : tiny_fixtures()) {
    CAPTURE(f);
    const Scenario& sc = fixture(f);
    Instance woca = make_instance(sc, Variant::WOCA), wca = make_instance(sc, Variant::WCA);
    EnumResult ew = enumerate_optimal(woca), ec = enumerate_optimal(wca);
    CHECK(obj_sum_of(algorithm1_dispatch(woca, path_from_plan(ew.plan, woca)), woca) >= ew.report.obj_sum);
    auto routes = max_coverage_routes(wca);
    CHECK(obj_sum_of(fixed_ca_heuristic(wca, routes, bfs_path(wca)), wca) >= ec.report.obj_sum);
    CHECK(obj_sum_of(fixed_ca_heuristic(wca, routes, bfs_path(wca), false), wca) >= ec.report.obj_sum);
    CHECK(ec.report.obj_sum <= ew.report.obj_sum);
  }
}

TEST_CASE("lifting a WOCA plan into WCA keeps it feasible") {
  for (const auto& f : tiny_fixtures()) {
    CAPTURE(f);
    const Scenario& sc = fixture(f);
    Instance woca = make_instance(sc, Variant::WOCA), wca = make_instance(sc, Variant::WCA);
    EnumResult ew = enumerate_optimal(woca);
    Plan lifted = lift_plan(wca, ew.plan, max_coverage_routes(wca));
    Timeline tl = evaluate(lifted, wca);
    REQUIRE(tl.feasible);
    CHECK(validate(lifted, tl, wca).pass);
  }
}

TEST_CASE("path from a plan reads only its closings") {
  Instance wca = make_instance(fixture(data_dir() / "tiny1.json"), Variant::WCA);
  Instance woca = make_instance(fixture(data_dir() / "tiny1.json"), Variant::WOCA);
  EnumResult e = enumerate_optimal(wca);
  ElectricPath a = path_from_plan(e.plan, wca), b = path_from_plan(e.plan, woca);
  REQUIRE(a.edges.size() == b.edges.size());
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    CHECK(a.edges[i].sw == b.edges[i].sw);
    CHECK(a.edges[i].child == b.edges[i].child);
  }
  CHECK(a.edges.size() == wca.n_cells() - 1);
}

TEST_CASE("parallel and serial enumeration agree") {
  for (const auto& f : tiny_fixtures())
    for (Variant v : {Variant::WCA, Variant::WOCA}) {
      CAPTURE(f);
      Instance in = make_instance(fixture(f), v);
      EnumOptions par, ser;
      ser.parallel = false;
      EnumResult a = enumerate_optimal(in, par), b = enumerate_optimal(in, ser);
      CHECK(a.plan == b.plan);
      CHECK(a.report.obj_sum == b.report.obj_sum);
    }
}

TEST_CASE("enumerator budget") {
  Instance in = make_instance(fixture(data_dir() / "r123.json"), Variant::WCA);
  CHECK_THROWS_AS(check_budget(in, EnumBudget{}), BudgetExceeded);
  Instance tiny = make_instance(fixture(data_dir() / "tiny1.json"), Variant::WCA);
  CHECK_NOTHROW(check_budget(tiny, EnumBudget{}));
}

TEST_CASE("fixed-route enumeration is never better than the free optimum") {
  for (const auto& f : tiny_fixtures()) {
    CAPTURE(f);
    Instance in = make_instance(fixture(f), Variant::WCA);
    EnumOptions o;
    o.fixed_ca = max_coverage_routes(in);
    CHECK(enumerate_optimal(in, o).report.obj_sum >= enumerate_optimal(in).report.obj_sum);
  }
}

TEST_CASE("protocol runs without a solver fall back and still validate") {
  const Scenario& sc = fixture(data_dir() / "tiny1.json");
  for (RunMode m : {RunMode::Wca, RunMode::Woca, RunMode::Alg1, RunMode::MaxCov, RunMode::Enumerate}) {
    CAPTURE(mode_name(m));
    RunOptions o;
    o.mode = m;
    RunOutcome r = run_protocol(sc, o);
    REQUIRE(r.ok);
    CHECK(r.verdict.pass);
    CHECK(!r.mps.empty());
  }
  RunOptions w, c;
  w.mode = RunMode::Woca;
  c.mode = RunMode::Wca;
  CHECK(run_protocol(sc, c).obj.obj_sum <= run_protocol(sc, w).obj.obj_sum);

  const Scenario& r123 = fixture(data_dir() / "r123.json");
  RunOptions a, b;
  a.mode = RunMode::Alg1;
  b.mode = RunMode::Woca;
  RunOutcome ra = run_protocol(r123, a), rb = run_protocol(r123, b);
  REQUIRE(ra.ok);
  REQUIRE(rb.ok);
  CHECK(ra.obj.obj_ea >= rb.obj.obj_ea);
}
