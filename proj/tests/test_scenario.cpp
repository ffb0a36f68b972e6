#include <cmath>
#include <fstream>

#include "doctest.h"
#include "dsr/scenario.hpp"
#include "support.hpp"

using namespace dsr;
using namespace dsr::test;

namespace {

nlohmann::json tiny1_json() {
  std::ifstream f(data_dir() / "tiny1.json");
  return nlohmann::json::parse(f);
}

ScenarioError::Kind error_kind(const nlohmann::json& doc) {
  try {
    parse_scenario(doc);
  } catch (const ScenarioError& e) {
    return e.kind();
  }
  FAIL("scenario was accepted");
  return ScenarioError::Kind::Schema;
}

}  // namespace

TEST_CASE("defaults fill absent optional fields") {
  const Scenario& sc = fixture(data_dir() / "tiny1.json");
  const auto& s23 = sc.grid.lines[1];
  REQUIRE(s23.sw);
  CHECK(s23.sw->auto_op_minutes == 1.0);
  CHECK(s23.sw->manual_op_minutes == 15.0);
  CHECK(sc.grid.lines[2].repair_minutes == 60.0);
  CHECK(sc.ecv_sites[0].min_stay_minutes == 15.0);
  CHECK(sc.horizon_minutes == 720.0);
}

TEST_CASE("residual time above the horizon is clamped") {
  auto doc = tiny1_json();
  doc["lines"][1]["switch"]["ftu"]["residual_minutes"] = 5000;
  Scenario sc = parse_scenario(doc);
  CHECK(sc.grid.lines[1].sw->ftu->residual_minutes == 720.0);
}

TEST_CASE("load, serialize, reload is the identity") {
  for (const auto& p : tiny_fixtures()) {
    CAPTURE(p);
    Scenario a = load_scenario(p);
    Scenario b = parse_scenario(scenario_to_json(a));
    CHECK(a == b);
    CHECK(scenario_hash(a) == scenario_hash(b));
  }
  Scenario r = load_scenario(data_dir() / "r123.json");
  CHECK(parse_scenario(scenario_to_json(r)) == r);
}

TEST_CASE("malformed scenarios are rejected with the right kind") {
  auto doc = tiny1_json();
  doc["crews"][0]["depot"] = "nowhere";
  CHECK(error_kind(doc) == ScenarioError::Kind::DanglingReference);

  doc = tiny1_json();
  doc["lines"][0]["to"] = "n99";
  CHECK(error_kind(doc) == ScenarioError::Kind::DanglingReference);

  doc = tiny1_json();
  doc["nodes"][0]["x"] = "far";
  CHECK(error_kind(doc) == ScenarioError::Kind::Schema);

  doc = tiny1_json();
  doc["nodes"][1]["load_kw"] = -5;
  CHECK(error_kind(doc) == ScenarioError::Kind::Invariant);

  doc = tiny1_json();
  doc["unexpected"] = 1;
  CHECK_THROWS_AS(parse_scenario(doc), ScenarioError);

  try {
    doc = tiny1_json();
    doc["nodes"][0]["x"] = "far";
    parse_scenario(doc);
  } catch (const ScenarioError& e) {
    CHECK(e.field().find("nodes[0]") != std::string::npos);
  }
}

TEST_CASE("euclidean travel") {
  auto m = euclidean_matrix({{"a", 0, 0}, {"b", 3, 4}, {"c", 0, 0}}, 1.0);
  CHECK(m.at(0, 1) == doctest::Approx(5.0));
  CHECK(m.at(0, 2) == 0.0);
  auto scaled = euclidean_matrix({{"a", 0, 0}, {"b", 3, 4}}, 2.5);
  CHECK(scaled.at(1, 0) == doctest::Approx(12.5));
  auto rounded = euclidean_matrix({{"a", 0, 0}, {"b", 1, 1}}, 1.0, 1.0);
  CHECK(rounded.at(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("derived travel is symmetric, zero on the diagonal, linear in the coordinates") {
  const Scenario& sc = fixture(data_dir() / "r123.json");
  TravelModel t = derive_travel(sc);
  for (const TravelMatrix* m : {&t.crew, &t.ecv}) {
    for (std::size_t i = 0; i < m->locations.size(); ++i) {
      CHECK(m->at(i, i) == 0.0);
      for (std::size_t j = 0; j < i; ++j) CHECK(m->at(i, j) == m->at(j, i));
    }
  }
  auto pts = crew_locations(sc);
  auto base = euclidean_matrix(pts, 1.0);
  for (auto& p : pts) p.x *= 3, p.y *= 3;
  auto big = euclidean_matrix(pts, 1.0);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) CHECK(big.at(i, j) == doctest::Approx(3 * base.at(i, j)));
}

TEST_CASE("reconstructed 123-node travel peaks at 65 minutes between the crew depots") {
  const Scenario& sc = fixture(data_dir() / "r123.json");
  TravelModel t = derive_travel(sc);
  double mx = 0;
  for (const auto& row : t.crew.minutes)
    for (double v : row) mx = std::max(mx, v);
  CHECK(mx == doctest::Approx(65.0));
  auto d1 = t.crew.index_of("D1"), d2 = t.crew.index_of("D2");
  REQUIRE(d1);
  REQUIRE(d2);
  CHECK(t.crew.at(*d1, *d2) == doctest::Approx(65.0));
}
