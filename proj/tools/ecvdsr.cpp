// ecvdsr: restoration planning from the command line.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dsr/artifacts.hpp"
#include "dsr/pipeline.hpp"
#include "dsr/planner.hpp"
#include "dsr/scenario.hpp"
#include "dsr/solver.hpp"
#include "dsr/validator.hpp"

#ifndef DSR_HIGHS_ADAPTER
#define DSR_HIGHS_ADAPTER "tools/highs_solve.py"
#endif

namespace fs = std::filesystem;
using namespace dsr;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

EnumBudget parse_budget(const std::string& text) {
  EnumBudget b;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("budget entries look like key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::size_t v = std::stoul(item.substr(eq + 1));
    if (key == "crews") b.crews = v;
    else if (key == "ecvs") b.ecvs = v;
    else if (key == "cells") b.cells = v;
    else if (key == "switches") b.switches = v;
    else if (key == "faults") b.faults = v;
    else throw std::invalid_argument("unknown budget key '" + key + "'");
  }
  return b;
}

Variant parse_variant(const std::string& v) {
  if (v == "wca") return Variant::WCA;
  if (v == "woca") return Variant::WOCA;
  throw std::invalid_argument("variant must be wca or woca");
}

std::vector<std::pair<double, double>> read_curve(const fs::path& p) {
  std::istringstream in(read_file(p));
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<double, double>> out;
  while (std::getline(in, line)) {
    auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    out.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  return out;
}

struct RunArgs {
  std::string scenario, mode = "wca", variant = "wca", solver_cmd, dialect = "native", out_dir = "out", budget;
  std::string path_plan, warm_start;
  double time_limit = 60, mip_gap = 0;
  bool literal = false, serial = false, no_heuristic_start = false;
  long seed = 0;
};

int cmd_run(const RunArgs& a) {
  const Scenario sc = load_scenario(a.scenario);
  RunOptions opt;
  opt.mode = parse_mode(a.mode);
  opt.enumerate_variant = parse_variant(a.variant);
  opt.objective.ra_literal = a.literal;
  opt.parallel = !a.serial;
  opt.heuristic_warm_start = !a.no_heuristic_start;
  if (!a.budget.empty()) opt.budget = parse_budget(a.budget);
  if (!a.path_plan.empty()) opt.path_plan = load_plan(a.path_plan);
  if (!a.warm_start.empty()) opt.warm_start = load_plan(a.warm_start);
  if (!a.solver_cmd.empty()) {
    SolverConfig cfg;
    if (a.solver_cmd == "auto") {
      auto found = discover_solver(DSR_HIGHS_ADAPTER);
      if (!found) throw std::runtime_error("--solver-cmd auto: no MILP solver found (need python3 with highspy, or cbc)");
      cfg = *found;
    } else {
      cfg.command = a.solver_cmd;
      cfg.dialect = parse_dialect(a.dialect);
    }
    cfg.time_limit = a.time_limit;
    cfg.mip_gap = a.mip_gap;
    opt.solver = cfg;
  }

  RunOutcome out = run_protocol(sc, opt);
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  if (!out.mps.empty()) write_file(dir / "model.mps", out.mps);
  const bool have_plan = !out.rp.ops.empty() || out.inst.switches.empty();
  if (have_plan && out.tl.tE.size() == out.inst.n_cells() && out.inst.scenario) {
    write_file(dir / "plan.json", plan_to_json(out.plan).dump(2) + "\n");
    if (out.tl.feasible) {
      write_file(dir / "timeline.csv", timeline_csv(out.rp, out.tl, out.inst));
      auto curve = restored_curve(out.tl, out.inst);
      write_file(dir / "curve.csv", curve_csv(curve));
      write_file(dir / "curve.svg",
                 curve_svg({{std::string(mode_name(opt.mode)), curve}}, out.inst.t0, out.inst.tmax,
                           out.inst.cells.total_load()));
    }
    ReportInfo info{mode_name(opt.mode), out.plan_source, out.solver_status, opt.objective};
    auto report = make_report(out.inst, info, out.rp, out.tl, out.obj, out.verdict);
    if (out.solver_objective) report["solver_objective"] = *out.solver_objective;
    if (!out.notes.empty()) report["notes"] = out.notes;
    if (!out.ok) report["error"] = out.error;
    write_file(dir / "report.json", report.dump(2) + "\n");
  }

  for (const auto& n : out.notes) std::cerr << "note: " << n << "\n";
  if (!out.ok) {
    std::cerr << "error: " << out.error << "\n";
    for (const auto& v : out.verdict.violations) std::cerr << "  [" << v.tag << "] " << v.message << "\n";
    return 1;
  }
  std::cout << "mode " << mode_name(opt.mode) << " (" << variant_name(out.inst.variant) << "), plan from "
            << out.plan_source;
  if (!out.solver_status.empty()) std::cout << ", solver " << out.solver_status;
  std::cout << "\n";
  std::cout << "obj_sum " << out.obj.obj_sum << "  obj_ea " << out.obj.obj_ea << "  obj_ra " << out.obj.obj_ra
            << "  obj_ca " << out.obj.obj_ca << "\n";
  std::cout << "unserved " << out.obj.unserved_kwh << " kWh, full restoration at minute "
            << out.obj.full_restoration_minute << ", verdict pass\n";
  std::cout << "artifacts in " << dir.string() << "\n";
  return 0;
}

int cmd_report(const std::vector<std::string>& paths, std::vector<std::string> labels) {
  std::vector<nlohmann::json> reports;
  for (const auto& p : paths) reports.push_back(nlohmann::json::parse(read_file(p)));
  for (std::size_t i = labels.size(); i < paths.size(); ++i) {
    fs::path p(paths[i]);
    labels.push_back(p.has_parent_path() ? p.parent_path().filename().string() : p.stem().string());
  }
  std::vector<std::string> warnings;
  std::cout << report_table(reports, labels, warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

int cmd_validate(const std::string& scenario, const std::string& plan_path, const std::string& variant) {
  const Scenario sc = load_scenario(scenario);
  const Instance inst = make_instance(sc, parse_variant(variant));
  const Plan plan = load_plan(plan_path);
  Timeline tl;
  try {
    tl = evaluate(resolve_plan(plan, inst), inst);
  } catch (const PlanError& e) {
    std::cout << "FAIL [" << e.tag() << "] " << e.what() << "\n";
    return 1;
  }
  if (!tl.feasible) std::cout << "evaluate: infeasible [" << tl.tag << "] " << tl.message << "\n";
  Verdict v = validate(plan, tl, inst);
  if (v.pass && tl.feasible) {
    std::cout << "pass\n";
    return 0;
  }
  for (const auto& x : v.violations) std::cout << "[" << x.tag << "] " << x.message << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-disaster restoration planner: crews, ECVs and switching"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run = app.add_subcommand("run", "plan one scenario and write artifacts");
  run->add_option("scenario", ra.scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--mode", ra.mode, "wca | woca | alg1 | maxcov | enumerate")
      ->check(CLI::IsMember({"wca", "woca", "alg1", "maxcov", "enumerate"}));
  run->add_option("--variant", ra.variant, "model variant for --mode enumerate")->check(CLI::IsMember({"wca", "woca"}));
  run->add_option("--solver-cmd", ra.solver_cmd,
                  "solver command template with {input} {output} {time_limit} {mip_gap} [{start}], or 'auto'");
  run->add_option("--solver-dialect", ra.dialect, "native | cbc | gurobi_sol")
      ->check(CLI::IsMember({"native", "cbc", "gurobi_sol"}));
  run->add_option("--time-limit", ra.time_limit, "solver wall-clock limit in seconds");
  run->add_option("--mip-gap", ra.mip_gap, "relative MIP gap forwarded to the solver");
  run->add_flag("--obj-ra-literal", ra.literal, "use the printed-formula reading of the crew work term");
  run->add_option("--out-dir", ra.out_dir, "artifact directory");
  run->add_option("--enumerate-budget", ra.budget, "e.g. crews=2,ecvs=1,cells=5,switches=5,faults=2");
  run->add_option("--path-plan", ra.path_plan, "plan whose electric path feeds the alg1 and maxcov heuristics");
  run->add_option("--warm-start", ra.warm_start, "plan handed to the solver as a start");
  run->add_flag("--no-heuristic-start", ra.no_heuristic_start, "do not warm-start the solver from a heuristic");
  run->add_flag("--serial", ra.serial, "run the enumerator on one thread");
  run->add_option("--seed", ra.seed, "reserved; all planners are deterministic");

  std::vector<std::string> report_paths, report_labels;
  auto* report = app.add_subcommand("report", "compare report.json files side by side");
  report->add_option("reports", report_paths, "report.json files")->required()->check(CLI::ExistingFile);
  report->add_option("--label", report_labels, "column labels, in order");

  std::string v_scenario, v_plan, v_variant = "wca";
  auto* val = app.add_subcommand("validate", "evaluate and validate a plan file");
  val->add_option("scenario", v_scenario)->required()->check(CLI::ExistingFile);
  val->add_option("plan", v_plan)->required()->check(CLI::ExistingFile);
  val->add_option("--variant", v_variant)->check(CLI::IsMember({"wca", "woca"}));

  std::string c_scenario;
  auto* cells = app.add_subcommand("cells", "print the node-cell partition as JSON");
  cells->add_option("scenario", c_scenario)->required()->check(CLI::ExistingFile);

  std::string cov_scenario;
  auto* cov = app.add_subcommand("coverage", "print the ECV coverage table as CSV");
  cov->add_option("scenario", cov_scenario)->required()->check(CLI::ExistingFile);

  std::vector<std::string> plot_curves, plot_labels;
  std::string plot_out = "curves.svg", plot_scenario;
  auto* plot = app.add_subcommand("plot", "overlay several curve.csv files in one SVG");
  plot->add_option("scenario", plot_scenario, "scenario the curves belong to")->required()->check(CLI::ExistingFile);
  plot->add_option("curves", plot_curves, "curve.csv files")->required()->check(CLI::ExistingFile);
  plot->add_option("--label", plot_labels, "series labels, in order");
  plot->add_option("--out", plot_out, "output SVG");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(ra);
    if (*report) return cmd_report(report_paths, report_labels);
    if (*val) return cmd_validate(v_scenario, v_plan, v_variant);
    if (*cells) {
      const Scenario sc = load_scenario(c_scenario);
      std::cout << cell_graph_to_json(partition_cells(sc)).dump(2) << "\n";
      return 0;
    }
    if (*cov) {
      const Scenario sc = load_scenario(cov_scenario);
      std::cout << coverage_csv(compute_coverage(sc, partition_cells(sc)));
      return 0;
    }
    if (*plot) {
      const Scenario sc = load_scenario(plot_scenario);
      std::vector<CurveSeries> series;
      for (std::size_t i = 0; i < plot_curves.size(); ++i)
        series.push_back({i < plot_labels.size() ? plot_labels[i] : fs::path(plot_curves[i]).parent_path().filename().string(),
                          read_curve(plot_curves[i])});
      write_file(plot_out, curve_svg(series, sc.start_time, sc.horizon_minutes, partition_cells(sc).total_load()));
      return 0;
    }
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
