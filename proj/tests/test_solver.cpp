#include <cmath>

#include "doctest.h"
#include "dsr/milp_builder.hpp"
#include "dsr/mps.hpp"
#include "support.hpp"

using namespace dsr;
using namespace dsr::test;

TEST_CASE("native solution dialect") {
  SolveResult r = parse_solution("status optimal\nobjective 2.5\nx 1\ny 0.25\n", Dialect::Native);
  CHECK(r.status == SolveStatus::Optimal);
  REQUIRE(r.objective);
  CHECK(*r.objective == 2.5);
  CHECK(r.values.at("y") == 0.25);
  Assignment a{{"x", 1.0}, {"y", 1.0 / 3.0}};
  SolveResult back = parse_solution(format_solution(a, SolveStatus::Feasible, 7.0), Dialect::Native);
  CHECK(back.status == SolveStatus::Feasible);
  CHECK(back.values == a);
  CHECK(parse_solution("status infeasible\n", Dialect::Native).status == SolveStatus::Infeasible);
}

TEST_CASE("CBC and Gurobi solution dialects") {
  SolveResult c = parse_solution("Optimal - objective value 3.00000000\n      0 x         1         -1\n      1 y       0.5          0\n",
                                 Dialect::Cbc);
  CHECK(c.status == SolveStatus::Optimal);
  CHECK(c.objective.value_or(0) == doctest::Approx(3.0));
  CHECK(c.values.at("x") == 1.0);
  CHECK(c.values.at("y") == 0.5);
  CHECK(parse_solution("Infeasible - objective value 0\n", Dialect::Cbc).status == SolveStatus::Infeasible);

  SolveResult g = parse_solution("# Objective value = 4\nx 1\ny 0\n", Dialect::GurobiSol);
  CHECK(g.objective.value_or(0) == doctest::Approx(4.0));
  CHECK(g.values.at("x") == 1.0);
}

TEST_CASE("a command that writes nothing is reported as an error") {
  SolverConfig cfg;
  cfg.command = "true {input} {output}";
  cfg.time_limit = 5;
  SolveResult r = solve_external("NAME x\nROWS\n N  OBJ\nCOLUMNS\nRHS\nBOUNDS\nENDATA\n", cfg);
  CHECK(r.status == SolveStatus::Error);
}

TEST_CASE("external solver") {
  auto cfg = solver();
  if (!cfg) {
    MESSAGE("no external solver found; skipping solver round trips");
    return;
  }
  cfg->time_limit = 30;

  SUBCASE("infeasible toy model") {
    MilpModel m;
    auto x = m.add_binary("x");
    m.add_row("lo", {{x, 1}}, Sense::GE, 1);
    m.add_row("hi", {{x, 1}}, Sense::LE, 0);
    CHECK(solve_external(write_mps(m), *cfg).status == SolveStatus::Infeasible);
  }

  SUBCASE("tiny1 optimum agrees with the enumerator and its timeline") {
    for (Variant v : {Variant::WCA, Variant::WOCA}) {
      Instance in = make_instance(fixture(data_dir() / "tiny1.json"), v);
      EnumResult e = enumerate_optimal(in);
      SolveResult r = solve_external(write_mps(build_model(in)), *cfg);
      REQUIRE(r.status == SolveStatus::Optimal);
      CHECK(*r.objective == doctest::Approx(e.report.obj_sum).epsilon(1e-6));
      Plan p = solution_to_plan(r.values, in);
      ResolvedPlan rp = resolve_plan(p, in);
      Timeline tl = evaluate(rp, in);
      REQUIRE(tl.feasible);
      CHECK(validate(p, tl, in).pass);
      CHECK(objectives(rp, tl, in).obj_sum == doctest::Approx(e.report.obj_sum).epsilon(1e-6));
      // Energization times of the solver coincide with the earliest timeline.
      for (std::size_t c = 0; c < in.n_cells(); ++c) {
        const std::string name = "tE_" + std::to_string(in.cell_id(c));
        if (r.values.count(name)) CHECK(r.values.at(name) == doctest::Approx(tl.tE[c]).epsilon(1e-6));
      }
    }
  }

  SUBCASE("a warm start is accepted") {
    Instance in = make_instance(fixture(data_dir() / "tiny1.json"), Variant::WCA);
    EnumResult e = enumerate_optimal(in);
    Assignment start = plan_to_assignment(e.resolved, e.timeline, in);
    SolveResult r = solve_external(write_mps(build_model(in)), *cfg, &start);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(*r.objective == doctest::Approx(e.report.obj_sum).epsilon(1e-6));
  }
}
