#include <algorithm>

#include "doctest.h"
#include "mutations.hpp"
#include "support.hpp"

using namespace dsr;
using namespace dsr::test;

namespace {

bool has_tag(const Verdict& v, const std::string& tag) {
  auto t = v.tags();
  return std::find(t.begin(), t.end(), tag) != t.end();
}

}  // namespace

TEST_CASE("every base plan validates against its own timeline") {
  for (const auto& b : mutation_bases()) {
    CAPTURE(b.name);
    REQUIRE(b.tl.feasible);
    Verdict v = validate(b.plan, b.tl, b.inst);
    CHECK(v.pass);
    CHECK(v.violations.empty());
  }
}

TEST_CASE("remote closing after battery depletion is reported under the residual-time families") {
  // one automatic switch whose FTU sits on the dead side; the ECV parks on it at minute 40
  nlohmann::json doc = {
      {"name", "two"},
      {"nodes", {{{"id", "n1"}, {"x", 0}, {"y", 0}, {"load_kw", 0}}, {{"id", "n2"}, {"x", 20}, {"y", 0}, {"load_kw", 100}}}},
      {"lines", {{{"id", "S12"}, {"from", "n1"}, {"to", "n2"}, {"switch", {{"kind", "automatic"}, {"ftu", {{"side", "to"}}}}}}}},
      {"sources", {{{"node", "n1"}}}},
      {"crew_depots", {{{"id", "D1"}, {"x", 70}, {"y", 0}, {"capacity", 1}}}},
      {"ecv_depots", {{{"id", "E1"}, {"x", 60}, {"y", 0}, {"capacity", 1}}}},
      {"crews", {{{"id", "C1"}, {"depot", "D1"}}}},
      {"ecvs", {{{"id", "V1"}, {"depot", "E1"}, {"radius", 5}}}},
      {"ecv_sites", {{{"id", "W1"}, {"x", 20}, {"y", 0}}}},
      {"travel", {{"mode", "euclidean_scaled"}, {"scale_minutes_per_unit", 1.0}}}};
  Instance in = make_instance(fixture_text(doc.dump()), Variant::WCA);
  Plan p;
  p.ca_routes = {{"V1", {"W1"}}};
  p.switch_decisions = {{"S12", 1, 2, "AE"}};
  p.z_assignment = {{"S12", "W1"}};
  p.ea_parents = {{2, "S12"}};
  Timeline tl = evaluate(p, in);
  REQUIRE(tl.feasible);
  REQUIRE(validate(p, tl, in).pass);
  Timeline m = tl;
  m.tAOop[0] = in.switches[0].residual + 1;
  Verdict v = validate(p, m, in);
  CHECK(!v.pass);
  CHECK((has_tag(v, "37") || has_tag(v, "40")));
  // besides the battery, only the ECV's stay and the energization that follows may complain
  for (const auto& t : v.tags()) {
    CAPTURE(t);
    CHECK((t == "33" || t == "36" || t == "37" || t == "40"));
  }
}

TEST_CASE("governance from a site that cannot cover the FTU") {
  Instance in = make_instance(fixture(data_dir() / "tiny1.json"), Variant::WCA);
  EnumResult e = enumerate_optimal(in);
  REQUIRE(!e.plan.z_assignment.empty());
  Plan p = e.plan;
  p.z_assignment[0].site = p.z_assignment[0].site == "W1" ? "W2" : "W1";
  CHECK(has_tag(validate(p, e.timeline, in), "30"));
}

TEST_CASE("mutation suite covers every family") {
  auto hits = run_mutation_suite(mutation_bases());
  for (const auto& fam : mutation_families()) {
    CAPTURE(fam);
    CHECK(hits[fam].found);
  }
}

TEST_CASE("validator never throws on garbage plans") {
  Instance in = make_instance(fixture(data_dir() / "tiny1.json"), Variant::WCA);
  Plan p;
  p.ra_routes = {{"C1", {"nope", "L34", "L34"}}};
  p.switch_decisions = {{"S23", 7, 9, "XY"}};
  p.z_assignment = {{"S99", "W7"}};
  p.ea_parents = {{42, "S23"}};
  Timeline tl;
  Verdict v;
  CHECK_NOTHROW(v = validate(p, tl, in));
  CHECK(!v.pass);
}
