#include "dsr/pipeline.hpp"

#include <stdexcept>

#include "dsr/milp_builder.hpp"
#include "dsr/mps.hpp"
#include "dsr/planner.hpp"

namespace dsr {

RunMode parse_mode(const std::string& name) {
  if (name == "wca") return RunMode::Wca;
  if (name == "woca") return RunMode::Woca;
  if (name == "alg1") return RunMode::Alg1;
  if (name == "maxcov") return RunMode::MaxCov;
  if (name == "enumerate") return RunMode::Enumerate;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

const char* mode_name(RunMode m) {
  switch (m) {
    case RunMode::Wca: return "wca";
    case RunMode::Woca: return "woca";
    case RunMode::Alg1: return "alg1";
    case RunMode::MaxCov: return "maxcov";
    case RunMode::Enumerate: return "enumerate";
  }
  return "?";
}

void finish(RunOutcome& out, const ResolvedPlan& rp, const ObjectiveOptions& obj) {
  out.rp = rp;
  out.plan = to_plan(rp, out.inst);
  out.tl = evaluate(rp, out.inst);
  if (!out.tl.feasible) {
    out.ok = false;
    out.error = "plan is infeasible [" + out.tl.tag + "]: " + out.tl.message;
    out.verdict = validate(out.plan, out.tl, out.inst);
    return;
  }
  out.obj = objectives(rp, out.tl, out.inst, obj);
  out.verdict = validate(out.plan, out.tl, out.inst);
  out.ok = out.verdict.pass;
  if (!out.ok) out.error = "plan failed validation";
}

namespace {

class Protocol {
 public:
  Protocol(const Scenario& sc, const RunOptions& opt, RunOutcome& out) : sc_(sc), opt_(opt), out_(out) {}

  void run() {
    switch (opt_.mode) {
      case RunMode::Enumerate: return enumerate_mode();
      case RunMode::Wca: return optimize_mode(Variant::WCA, std::nullopt);
      case RunMode::Woca: return optimize_mode(Variant::WOCA, std::nullopt);
      case RunMode::MaxCov: return maxcov_mode();
      case RunMode::Alg1: return alg1_mode();
    }
  }

 private:
  BuildOptions build_opts(std::optional<std::vector<std::vector<std::size_t>>> fixed) const {
    BuildOptions bo;
    bo.obj_ra_literal = opt_.objective.ra_literal;
    bo.fixed_ca = std::move(fixed);
    return bo;
  }

  bool within_budget(const Instance& inst) const {
    try {
      check_budget(inst, opt_.budget);
      return true;
    } catch (const BudgetExceeded&) {
      return false;
    }
  }

  double score(const Plan& plan, const Instance& inst) const {
    ResolvedPlan rp = resolve_plan(plan, inst);
    Timeline tl = evaluate(rp, inst);
    if (!tl.feasible) throw std::runtime_error("infeasible [" + tl.tag + "]");
    return objectives(rp, tl, inst, opt_.objective).obj_sum;
  }

  /// Best of a few cheap dispatches: the supplied plan lifted onto this
  /// instance, then dispatches along the supplied and the breadth-first
  /// paths. Under WCA each path is tried with and without ECV closings, and
  /// with no ECV routes at all when the routes are not fixed.
  Plan heuristic(const Instance& inst, const std::optional<std::vector<std::vector<std::size_t>>>& fixed) const {
    std::vector<ElectricPath> paths;
    if (opt_.path_plan) paths.push_back(path_from_plan(*opt_.path_plan, inst));
    paths.push_back(bfs_path(inst));
    std::optional<Plan> best;
    double best_obj = 0;
    std::string last_error;
    auto consider = [&](auto&& make) {
      try {
        Plan p = make();
        const double v = score(p, inst);
        if (!best || v < best_obj - 1e-9) {
          best = std::move(p);
          best_obj = v;
        }
      } catch (const std::exception& e) {
        last_error = e.what();
      }
    };
    if (opt_.path_plan) {
      if (fixed) {
        consider([&] { return lift_plan(inst, *opt_.path_plan, *fixed); });
      } else {
        consider([&] { return lift_plan(inst, *opt_.path_plan, {}); });
        if (inst.variant == Variant::WCA)
          consider([&] { return lift_plan(inst, *opt_.path_plan, max_coverage_routes(inst)); });
      }
    }
    for (const auto& path : paths) {
      if (inst.variant == Variant::WOCA) {
        consider([&] { return algorithm1_dispatch(inst, path); });
        continue;
      }
      const auto routes = fixed ? *fixed : max_coverage_routes(inst);
      consider([&] { return fixed_ca_heuristic(inst, routes, path, true); });
      consider([&] { return fixed_ca_heuristic(inst, routes, path, false); });
      if (!fixed)
        consider([&] { return fixed_ca_heuristic(inst, std::vector<std::vector<std::size_t>>(inst.n_ecvs()), path); });
    }
    if (!best) throw std::runtime_error("no heuristic plan: " + last_error);
    return *best;
  }

  std::optional<Assignment> warm_start(const Instance& inst, const BuildOptions& bo,
                                       const std::optional<std::vector<std::vector<std::size_t>>>& fixed) {
    // An explicit start competes with the heuristic; the cheaper one wins.
    std::optional<Plan> plan = opt_.warm_start;
    if (opt_.heuristic_warm_start) {
      try {
        Plan h = heuristic(inst, fixed);
        bool take = !plan;
        if (plan) {
          try {
            take = score(h, inst) < score(*plan, inst) - 1e-9;
          } catch (const std::exception&) {
            take = true;
          }
        }
        if (take) plan = std::move(h);
      } catch (const std::exception& e) {
        out_.notes.push_back(std::string("no heuristic warm start: ") + e.what());
      }
    }
    if (!plan) return std::nullopt;
    try {
      ResolvedPlan rp = resolve_plan(*plan, inst);
      Timeline tl = evaluate(rp, inst);
      if (!tl.feasible) {
        out_.notes.push_back("warm start plan is infeasible [" + tl.tag + "]; solving cold");
        return std::nullopt;
      }
      return plan_to_assignment(rp, tl, inst, bo);
    } catch (const std::exception& e) {
      out_.notes.push_back(std::string("warm start rejected: ") + e.what());
      return std::nullopt;
    }
  }

  void optimize(const std::optional<std::vector<std::vector<std::size_t>>>& fixed) {
    const Instance& inst = out_.inst;
    const BuildOptions bo = build_opts(fixed);
    if (opt_.solver) {
      std::optional<Assignment> start = warm_start(inst, bo, fixed);
      SolveResult res = solve_external(out_.mps, *opt_.solver, start ? &*start : nullptr);
      out_.solver_status = status_name(res.status);
      out_.solver_objective = res.objective;
      if (res.values.empty() || res.status == SolveStatus::Infeasible || res.status == SolveStatus::Error) {
        out_.ok = false;
        out_.error = "solver returned no usable solution (" + out_.solver_status + ")" +
                     (res.message.empty() ? "" : ": " + res.message);
        return;
      }
      out_.plan_source = "solver";
      finish(out_, resolve_plan(solution_to_plan(res.values, inst), inst), opt_.objective);
      if (!out_.ok) out_.error = "solver solution failed validation; " + out_.error;
      return;
    }
    if (within_budget(inst)) {
      EnumOptions eo;
      eo.budget = opt_.budget;
      eo.objective = opt_.objective;
      eo.fixed_ca = fixed;
      eo.parallel = opt_.parallel;
      EnumResult r = enumerate_optimal(inst, eo);
      out_.plan_source = "enumerator";
      finish(out_, r.resolved, opt_.objective);
      return;
    }
    out_.plan_source = "heuristic";
    out_.notes.push_back("no solver configured and the instance exceeds the enumeration budget; heuristic plan");
    finish(out_, resolve_plan(heuristic(inst, fixed), inst), opt_.objective);
  }

  void enumerate_mode() {
    out_.inst = make_instance(sc_, opt_.enumerate_variant);
    out_.mps = write_mps(build_model(out_.inst, build_opts(std::nullopt)));
    EnumOptions eo;
    eo.budget = opt_.budget;
    eo.objective = opt_.objective;
    eo.parallel = opt_.parallel;
    EnumResult r = enumerate_optimal(out_.inst, eo);
    out_.plan_source = "enumerator";
    finish(out_, r.resolved, opt_.objective);
  }

  void optimize_mode(Variant v, std::optional<std::vector<std::vector<std::size_t>>> fixed) {
    out_.inst = make_instance(sc_, v);
    out_.mps = write_mps(build_model(out_.inst, build_opts(fixed)));
    optimize(fixed);
  }

  void maxcov_mode() {
    out_.inst = make_instance(sc_, Variant::WCA);
    auto routes = max_coverage_routes(out_.inst);
    out_.mps = write_mps(build_model(out_.inst, build_opts(routes)));
    optimize(routes);
  }

  void alg1_mode() {
    ElectricPath path;
    if (opt_.path_plan) {
      out_.inst = make_instance(sc_, Variant::WOCA);
      path = path_from_plan(*opt_.path_plan, out_.inst);
      out_.notes.push_back("electric path taken from the supplied plan");
    } else {
      // The electric path comes from the WOCA optimum when one can be had.
      RunOptions sub = opt_;
      sub.mode = RunMode::Woca;
      RunOutcome woca;
      Protocol(sc_, sub, woca).run();
      out_.inst = make_instance(sc_, Variant::WOCA);
      if (woca.ok) {
        path = path_from_plan(woca.plan, out_.inst);
        out_.notes.push_back("electric path taken from the WOCA " + woca.plan_source + " plan");
      } else {
        path = bfs_path(out_.inst);
        out_.notes.push_back("WOCA run failed (" + woca.error + "); breadth-first electric path");
      }
    }
    out_.mps = write_mps(build_model(out_.inst, build_opts(std::nullopt)));
    out_.plan_source = "algorithm1";
    finish(out_, resolve_plan(algorithm1_dispatch(out_.inst, path), out_.inst), opt_.objective);
  }

  const Scenario& sc_;
  const RunOptions& opt_;
  RunOutcome& out_;
};

}  // namespace

RunOutcome run_protocol(const Scenario& scenario, const RunOptions& opt) {
  RunOutcome out;
  try {
    Protocol(scenario, opt, out).run();
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
  }
  return out;
}

}  // namespace dsr
