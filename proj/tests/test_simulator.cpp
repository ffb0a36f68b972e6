#include <cmath>

#include "doctest.h"
#include "dsr/artifacts.hpp"
#include "support.hpp"

using namespace dsr;
using namespace dsr::test;

namespace {

// n1 (source) --S12-- n2, crew depot D1 and ECV depot E1 placed by the caller.
nlohmann::json two_cells(const std::string& kind, double depot_x, double ecv_x) {
  nlohmann::json sw = {{"kind", kind}};
  if (kind == "automatic") sw["ftu"] = {{"side", "to"}, {"residual_minutes", 240}};
  return {{"name", "two"},
          {"nodes", {{{"id", "n1"}, {"x", 0}, {"y", 0}, {"load_kw", 0}}, {{"id", "n2"}, {"x", 20}, {"y", 0}, {"load_kw", 100}}}},
          {"lines", {{{"id", "S12"}, {"from", "n1"}, {"to", "n2"}, {"switch", sw}}}},
          {"sources", {{{"node", "n1"}, {"available_at", 0}}}},
          {"crew_depots", {{{"id", "D1"}, {"x", depot_x}, {"y", 0}, {"capacity", 1}}}},
          {"ecv_depots", {{{"id", "E1"}, {"x", ecv_x}, {"y", 0}, {"capacity", 1}}}},
          {"crews", {{{"id", "C1"}, {"depot", "D1"}}}},
          {"ecvs", {{{"id", "V1"}, {"depot", "E1"}, {"radius", 5}}}},
          {"ecv_sites", {{{"id", "W1"}, {"x", 20}, {"y", 0}}}},
          {"travel", {{"mode", "euclidean_scaled"}, {"scale_minutes_per_unit", 1.0}}}};
}

nlohmann::json single_cell(double available_at, double load) {
  return {{"name", "one"},
          {"nodes", {{{"id", "n1"}, {"x", 0}, {"y", 0}, {"load_kw", load}}}},
          {"lines", nlohmann::json::array()},
          {"sources", {{{"node", "n1"}, {"available_at", available_at}}}},
          {"crew_depots", {{{"id", "D1"}, {"x", 0}, {"y", 0}, {"capacity", 1}}}},
          {"ecv_depots", nlohmann::json::array()},
          {"crews", {{{"id", "C1"}, {"depot", "D1"}}}},
          {"ecvs", nlohmann::json::array()},
          {"ecv_sites", nlohmann::json::array()},
          {"travel", {{"mode", "euclidean_scaled"}, {"scale_minutes_per_unit", 1.0}}}};
}

Plan empty_plan(const Instance& in) { return to_plan(ResolvedPlan{{}, {}, std::vector<SwitchOp>(in.switches.size())}, in); }

}  // namespace

TEST_CASE("a source cell lights up when the source becomes available") {
  const Scenario& sc = fixture_text(single_cell(30, 100).dump());
  Instance in = make_instance(sc, Variant::WCA);
  Plan p = empty_plan(in);
  Timeline tl = evaluate(p, in);
  REQUIRE(tl.feasible);
  CHECK(tl.tE[0] == 30.0);
}

TEST_CASE("energization objective arithmetic") {
  {
    const Scenario& sc = fixture_text(single_cell(360, 100).dump());
    Instance in = make_instance(sc, Variant::WOCA);
    ResolvedPlan rp = resolve_plan(empty_plan(in), in);
    Timeline tl = evaluate(rp, in);
    CHECK(objectives(rp, tl, in).obj_ea == doctest::Approx(0.5));
  }
  {
    const Scenario& sc = fixture_text(single_cell(0, 100).dump());
    Instance in = make_instance(sc, Variant::WOCA);
    ResolvedPlan rp = resolve_plan(empty_plan(in), in);
    Timeline tl = evaluate(rp, in);
    ObjectiveReport r = objectives(rp, tl, in);
    CHECK(r.obj_ea == 0.0);
    CHECK(r.obj_ra == 0.0);
    CHECK(r.obj_sum == 0.0);
  }
}

TEST_CASE("one crew with 60 minutes of travel and one manual operation") {
  const Scenario& sc = fixture_text(two_cells("manual", 70, 0).dump());
  Instance in = make_instance(sc, Variant::WOCA);
  Plan p;
  p.ra_routes = {{"C1", {"S12"}}};
  p.switch_decisions = {{"S12", 1, 2, "ME"}};
  p.ea_parents = {{2, "S12"}};
  ResolvedPlan rp = resolve_plan(p, in);
  Timeline tl = evaluate(rp, in);
  REQUIRE(tl.feasible);
  CHECK(tl.tR[0] == doctest::Approx(60.0));
  CHECK(tl.tE[1] == doctest::Approx(75.0));
  ObjectiveReport r = objectives(rp, tl, in);
  CHECK(r.obj_ra == doctest::Approx(75.0 / 720.0));
  CHECK(validate(p, tl, in).pass);
}

TEST_CASE("a remote closing after the FTU battery runs out is infeasible") {
  // The ECV needs 300 minutes to reach the only site; RT is 240.
  const Scenario& sc = fixture_text(two_cells("automatic", 70, 320).dump());
  Instance in = make_instance(sc, Variant::WCA);
  Plan p;
  p.ca_routes = {{"V1", {"W1"}}};
  p.switch_decisions = {{"S12", 1, 2, "AE"}};
  p.z_assignment = {{"S12", "W1"}};
  p.ea_parents = {{2, "S12"}};
  Timeline tl = evaluate(p, in);
  CHECK(!tl.feasible);
  CHECK(tl.tag == "37");

  // Closer ECV: feasible, and the closing waits for the ECV.
  const Scenario& near = fixture_text(two_cells("automatic", 70, 60).dump());
  Instance in2 = make_instance(near, Variant::WCA);
  Timeline ok = evaluate(p, in2);
  REQUIRE(ok.feasible);
  CHECK(ok.tCa[0] == doctest::Approx(40.0));
  CHECK(ok.tE[1] == doctest::Approx(41.0));
  CHECK(validate(p, ok, in2).pass);
}

TEST_CASE("evaluate is deterministic and validates its own output") {
  for (const auto& f : tiny_fixtures())
    for (Variant v : {Variant::WCA, Variant::WOCA}) {
      CAPTURE(f);
      Instance in = make_instance(fixture(f), v);
      Plan p = v == Variant::WOCA ? algorithm1_dispatch(in, bfs_path(in))
                                  : fixed_ca_heuristic(in, max_coverage_routes(in), bfs_path(in));
      Timeline a = evaluate(p, in), b = evaluate(p, in);
      REQUIRE(a.feasible);
      CHECK(timeline_csv(resolve_plan(p, in), a, in) == timeline_csv(resolve_plan(p, in), b, in));
      CHECK(validate(p, a, in).pass);
    }
}

TEST_CASE("restored-load curve") {
  const Scenario& sc = fixture(data_dir() / "tiny1.json");
  Instance in = make_instance(sc, Variant::WOCA);
  Plan p = algorithm1_dispatch(in, bfs_path(in));
  Timeline tl = evaluate(p, in);
  auto curve = restored_curve(tl, in);
  REQUIRE(!curve.empty());
  CHECK(curve.back().second == doctest::Approx(500.0));
  for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].second >= curve[i - 1].second);

  const Scenario& empty = fixture_text(single_cell(0, 0).dump());
  Instance e = make_instance(empty, Variant::WOCA);
  CHECK(restored_curve(evaluate(empty_plan(e), e), e).empty());
}

TEST_CASE("structural defects raise PlanError") {
  Instance in = make_instance(fixture(data_dir() / "tiny1.json"), Variant::WCA);
  Plan p;
  p.ra_routes = {{"C9", {"L34"}}};
  CHECK_THROWS_AS(resolve_plan(p, in), PlanError);
  Plan q;
  q.switch_decisions = {{"S23", 1, 2, "A"}};
  CHECK_THROWS_AS(resolve_plan(q, in), PlanError);
}
