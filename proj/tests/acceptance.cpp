// Acceptance gate: one PASS/FAIL/SKIP line per criterion, exit status 0 only
// when nothing failed. `acceptance 2 7` runs a subset.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>

#include "dsr/artifacts.hpp"
#include "dsr/milp_builder.hpp"
#include "dsr/mps.hpp"
#include "dsr/pipeline.hpp"
#include "mutations.hpp"
#include "support.hpp"

using namespace dsr;
using namespace dsr::test;
namespace fs = std::filesystem;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status = Status::Pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

// Enumerator optima are shared by several criteria.
struct Optimum {
  std::string name;
  const Scenario* sc;
  Instance wca, woca;
  EnumResult ewca, ewoca;
  double secs_wca = 0, secs_woca = 0;
};

const std::vector<Optimum>& optima() {
  static const std::vector<Optimum> all = [] {
    std::vector<Optimum> out;
    for (const auto& f : tiny_fixtures()) {
      Optimum o{f.stem().string(), &fixture(f), {}, {}, {}, {}};
      o.wca = make_instance(*o.sc, Variant::WCA);
      o.woca = make_instance(*o.sc, Variant::WOCA);
      auto t = std::chrono::steady_clock::now();
      o.ewca = enumerate_optimal(o.wca);
      o.secs_wca = seconds_since(t);
      t = std::chrono::steady_clock::now();
      o.ewoca = enumerate_optimal(o.woca);
      o.secs_woca = seconds_since(t);
      out.push_back(std::move(o));
    }
    return out;
  }();
  return all;
}

double obj_sum(const Plan& plan, const Instance& in) {
  ResolvedPlan rp = resolve_plan(plan, in);
  Timeline tl = evaluate(rp, in);
  if (!tl.feasible) return std::numeric_limits<double>::infinity();
  return objectives(rp, tl, in).obj_sum;
}

// 1 -----------------------------------------------------------------------
Outcome linearization() {
  const double T = 720.0, tol = 1e-9;
  MilpModel m;
  const std::size_t t = m.add_var("t", VarKind::Continuous, 0, T), f = m.add_var("f", VarKind::Continuous, 0, T);
  MaxVars mv = linearize_max(m, t, f, T, "p");
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(0.0, T);
  auto start = std::chrono::steady_clock::now();
  int bad = 0;
  for (int n = 0; n < 1000; ++n) {
    const double tv = U(rng), fv = U(rng), want = std::max(tv, fv);
    bool any = false;
    for (int de = 0; de <= 1; ++de) {
      std::vector<double> x(m.vars().size(), 0.0);
      x[t] = tv;
      x[f] = fv;
      x[mv.dE] = de;
      x[mv.dR] = 1 - de;
      // Feasible interval of y given everything else, read off the rows.
      double lo = m.vars()[mv.y].lb, hi = m.vars()[mv.y].ub;
      bool rows_ok = true;
      for (const auto& row : m.rows()) {
        double a = 0, rest = 0;
        for (auto [v, c] : row.terms) (v == mv.y ? a : rest) += v == mv.y ? c : c * x[v];
        const double r = row.rhs - rest;
        if (a == 0) {
          rows_ok &= row.sense == Sense::LE ? r >= -tol : row.sense == Sense::GE ? r <= tol : std::fabs(r) <= tol;
          continue;
        }
        const double b = r / a;
        const bool upper = (row.sense == Sense::LE) == (a > 0);
        if (row.sense == Sense::EQ) lo = std::max(lo, b), hi = std::min(hi, b);
        else if (upper) hi = std::min(hi, b);
        else lo = std::max(lo, b);
      }
      if (!rows_ok || lo > hi + tol) continue;
      any = true;
      if (lo < want - tol || hi > want + tol) ++bad;
    }
    if (!any) ++bad;
  }
  const double secs = seconds_since(start);
  Outcome o;
  o.status = bad == 0 && secs < 1.0 ? Status::Pass : Status::Fail;
  o.detail = std::to_string(1000 - bad) + "/1000 pairs admit only y = max(t, f); " + fmt(secs, 3) + " s";
  return o;
}

// 2 -----------------------------------------------------------------------
Outcome cross_oracle() {
  const auto& opt = optima();
  double worst_time = 0;
  for (const auto& o : opt) worst_time = std::max({worst_time, o.secs_wca, o.secs_woca});
  auto cfg = solver();
  if (!cfg) return {Status::Skip, "no external solver found (need python3 with highspy, or cbc on PATH); enumerator max " +
                                      fmt(worst_time, 3) + " s per run"};
  cfg->time_limit = 60;
  double worst = 0;
  std::vector<std::string> bad;
  for (const auto& o : opt)
    for (int v = 0; v < 2; ++v) {
      const Instance& in = v == 0 ? o.wca : o.woca;
      const EnumResult& e = v == 0 ? o.ewca : o.ewoca;
      SolveResult r = solve_external(write_mps(build_model(in)), *cfg);
      const std::string id = o.name + "/" + variant_name(in.variant);
      if (r.status != SolveStatus::Optimal || !r.objective) {
        bad.push_back(id + " solver " + status_name(r.status));
        continue;
      }
      const double d = std::fabs(*r.objective - e.report.obj_sum);
      worst = std::max(worst, d);
      if (d > 1e-6) bad.push_back(id + " differs by " + fmt(d));
    }
  Outcome out;
  out.status = bad.empty() && worst_time < 60 && opt.size() >= 10 ? Status::Pass : Status::Fail;
  out.detail = std::to_string(opt.size()) + " fixtures x 2 variants, max |enum - solver| = " + fmt(worst, 3) +
               ", enumerator max " + fmt(worst_time, 3) + " s";
  for (const auto& b : bad) out.detail += "; " + b;
  return out;
}

// 3 -----------------------------------------------------------------------
Outcome dominance() {
  std::vector<std::string> bad;
  std::size_t strict = 0;
  for (const auto& o : optima()) {
    if (!(o.ewca.report.obj_sum <= o.ewoca.report.obj_sum))
      bad.push_back(o.name + ": " + fmt(o.ewca.report.obj_sum, 10) + " > " + fmt(o.ewoca.report.obj_sum, 10));
    if (o.ewca.report.obj_sum < o.ewoca.report.obj_sum) ++strict;
  }
  Outcome out{bad.empty() ? Status::Pass : Status::Fail,
              std::to_string(optima().size()) + " fixtures, WCA <= WOCA everywhere (" + std::to_string(strict) + " strict)"};
  for (const auto& b : bad) out.detail += "; " + b;
  return out;
}

// 4 -----------------------------------------------------------------------
Outcome one_sided() {
  std::vector<std::string> bad;
  std::size_t checked = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  auto check = [&](const std::string& id, const Plan& plan, const Instance& in, double opt) {
    ++checked;
    Timeline tl = evaluate(plan, in);
    Verdict v = validate(plan, tl, in);
    if (!tl.feasible || !v.pass) {
      bad.push_back(id + " fails validation");
      return;
    }
    const double got = objectives(resolve_plan(plan, in), tl, in).obj_sum;
    min_gap = std::min(min_gap, got - opt);
    if (got < opt) bad.push_back(id + " beats the optimum by " + fmt(opt - got));
  };
  for (const auto& o : optima()) {
    const double owoca = o.ewoca.report.obj_sum, owca = o.ewca.report.obj_sum;
    try {
      check(o.name + "/alg1(opt path)", algorithm1_dispatch(o.woca, path_from_plan(o.ewoca.plan, o.woca)), o.woca, owoca);
      check(o.name + "/alg1(bfs path)", algorithm1_dispatch(o.woca, bfs_path(o.woca)), o.woca, owoca);
      auto routes = max_coverage_routes(o.wca);
      check(o.name + "/maxcov(heuristic)", fixed_ca_heuristic(o.wca, routes, bfs_path(o.wca)), o.wca, owca);
      EnumOptions eo;
      eo.fixed_ca = routes;
      check(o.name + "/maxcov(fixed-route optimum)", enumerate_optimal(o.wca, eo).plan, o.wca, owca);
    } catch (const std::exception& e) {
      bad.push_back(o.name + ": " + e.what());
    }
  }
  Outcome out{bad.empty() ? Status::Pass : Status::Fail,
              std::to_string(checked) + " heuristic plans valid and never below the optimum (min gap " + fmt(min_gap, 3) + ")"};
  for (const auto& b : bad) out.detail += "; " + b;
  return out;
}

// 5 -----------------------------------------------------------------------
Outcome mutation_suite() {
  auto hits = run_mutation_suite(mutation_bases());
  std::size_t found = 0, exact = 0;
  std::string missing;
  for (const auto& fam : mutation_families()) {
    const auto& h = hits[fam];
    if (h.found) {
      ++found;
      if (h.tags.size() == 1) ++exact;
    } else {
      missing += " " + fam;
    }
  }
  const std::size_t n = mutation_families().size();
  Outcome out{found == n ? Status::Pass : Status::Fail,
              std::to_string(found) + "/" + std::to_string(n) + " families tripped (" + std::to_string(exact) +
                  " by a mutation reporting only that family)"};
  if (!missing.empty()) out.detail += "; missing:" + missing;
  return out;
}

// 6 -----------------------------------------------------------------------
Outcome earliest_feasible() {
  std::size_t lowered = 0, lowered_caught = 0, raised = 0, raised_ok = 0, infeasible = 0;
  std::vector<std::string> bad;
  const auto& opt = optima();
  for (std::size_t n = 0; n < 5 && n < opt.size(); ++n) {
    for (int v = 0; v < 2; ++v) {
      const Instance& in = v == 0 ? opt[n].wca : opt[n].woca;
      const EnumResult& e = v == 0 ? opt[n].ewca : opt[n].ewoca;
      const std::string id = opt[n].name + "/" + variant_name(in.variant);
      const Timeline& tl = e.timeline;
      using Field = std::vector<double> Timeline::*;
      for (auto [field, name] : {std::pair<Field, const char*>{&Timeline::tCa, "tCa"}, {&Timeline::tCd, "tCd"},
                                 {&Timeline::tR, "tR"}, {&Timeline::fR, "fR"}, {&Timeline::tE, "tE"},
                                 {&Timeline::tAOop, "tAOop"}}) {
        for (std::size_t i = 0; i < (tl.*field).size(); ++i) {
          if (std::isnan((tl.*field)[i])) continue;
          Timeline m = tl;
          (m.*field)[i] -= 1;
          ++lowered;
          if (!validate(e.plan, m, in).pass) ++lowered_caught;
          else bad.push_back(id + " " + name + "[" + std::to_string(i) + "]-1 still validates");
        }
      }
      // Delays through evaluation floors: the objective may only grow.
      const double base = e.report.obj_sum;
      auto probe = [&](EvalFloors fl, const std::string& what) {
        Timeline t2 = evaluate(e.resolved, in, &fl);
        if (!t2.feasible) {
          ++infeasible;
          return;
        }
        ++raised;
        const double got = objectives(e.resolved, t2, in).obj_sum;
        if (got >= base - 1e-12) ++raised_ok;
        else bad.push_back(id + " " + what + "+1 improves the objective");
      };
      for (std::size_t c = 0; c < in.n_cells(); ++c) {
        EvalFloors fl;
        fl.tE.assign(in.n_cells(), -std::numeric_limits<double>::infinity());
        fl.tE[c] = tl.tE[c] + 1;
        probe(fl, "tE[" + std::to_string(c) + "]");
      }
      for (std::size_t s = 0; s < in.switches.size(); ++s) {
        if (std::isnan(tl.tAOop[s])) continue;
        EvalFloors fl;
        fl.tAOop.assign(in.switches.size(), -std::numeric_limits<double>::infinity());
        fl.tAOop[s] = tl.tAOop[s] + 1;
        probe(fl, "tAOop[" + std::to_string(s) + "]");
      }
      for (std::size_t k = 0; k < in.ca_sites.size(); ++k) {
        if (tl.tCd[k] >= in.tmax) continue;
        EvalFloors fl;
        fl.tCd.assign(in.ca_sites.size(), -std::numeric_limits<double>::infinity());
        fl.tCd[k] = tl.tCd[k] + 1;
        probe(fl, "tCd[" + std::to_string(k) + "]");
      }
    }
  }
  Outcome out{bad.empty() ? Status::Pass : Status::Fail,
              "5 fixtures x 2 variants: " + std::to_string(lowered_caught) + "/" + std::to_string(lowered) +
                  " one-minute advances rejected; " + std::to_string(raised_ok) + "/" + std::to_string(raised) +
                  " one-minute delays no better (" + std::to_string(infeasible) + " delays beyond slack)"};
  for (std::size_t i = 0; i < bad.size() && i < 5; ++i) out.detail += "; " + bad[i];
  return out;
}

// 7 -----------------------------------------------------------------------
double restored_kw(const RunOutcome& r) {
  auto curve = restored_curve(r.tl, r.inst);
  return curve.empty() ? 0.0 : curve.back().second;
}

Outcome r123_orderings() {
  const Scenario& sc = fixture(data_dir() / "r123.json");
  const double total = partition_cells(sc).total_load();
  std::vector<std::string> bad;

  // Heuristic runs of the alg1 and max-coverage modes, no solver.
  RunOptions h;
  h.mode = RunMode::MaxCov;
  auto t = std::chrono::steady_clock::now();
  RunOutcome hm = run_protocol(sc, h);
  const double secs_maxcov = seconds_since(t);
  h.mode = RunMode::Alg1;
  t = std::chrono::steady_clock::now();
  RunOutcome ha = run_protocol(sc, h);
  const double secs_alg1 = seconds_since(t);
  if (!hm.ok) bad.push_back("max-coverage heuristic run failed: " + hm.error);
  if (!ha.ok) bad.push_back("alg1 heuristic run failed: " + ha.error);
  if (secs_maxcov >= 10 || secs_alg1 >= 10) bad.push_back("heuristic runs too slow");
  std::string timing = "heuristic runs " + fmt(secs_alg1, 2) + " s (alg1), " + fmt(secs_maxcov, 2) + " s (maxcov)";

  auto cfg = solver();
  if (!cfg) {
    Outcome o{bad.empty() ? Status::Skip : Status::Fail,
              "no external solver found; case orderings need the WOCA/WCA solves; " + timing};
    for (const auto& b : bad) o.detail += "; " + b;
    return o;
  }
  const char* env = std::getenv("DSR_R123_TIME_LIMIT");
  cfg->time_limit = env ? std::atof(env) : 60.0;

  RunOptions base;
  base.solver = cfg;
  RunOptions o2 = base;
  o2.mode = RunMode::Woca;
  RunOutcome c2 = run_protocol(sc, o2);
  if (!c2.ok) {
    Outcome o{Status::Fail, "Case 2 (WOCA) failed: " + c2.error};
    return o;
  }
  RunOptions o1 = base;
  o1.mode = RunMode::Alg1;
  o1.path_plan = c2.plan;
  RunOutcome c1 = run_protocol(sc, o1);
  RunOptions o3 = base;
  o3.mode = RunMode::MaxCov;
  o3.path_plan = c2.plan;
  RunOutcome c3 = run_protocol(sc, o3);
  RunOptions o4 = base;
  o4.mode = RunMode::Wca;
  o4.path_plan = c2.plan;
  if (c3.ok) o4.warm_start = c3.plan;
  RunOutcome c4 = run_protocol(sc, o4);

  const RunOutcome* cases[4] = {&c1, &c2, &c3, &c4};
  std::string ea;
  for (int i = 0; i < 4; ++i) {
    const RunOutcome& c = *cases[i];
    if (!c.ok) {
      bad.push_back("Case " + std::to_string(i + 1) + " failed: " + c.error);
      continue;
    }
    ea += (i ? ", " : "") + std::string("C") + std::to_string(i + 1) + "=" + fmt(c.obj.obj_ea, 4);
    if (std::fabs(restored_kw(c) - total) > 1e-6 || std::fabs(total - 3385.0) > 1e-6)
      bad.push_back("Case " + std::to_string(i + 1) + " restores " + fmt(restored_kw(c)) + " kW");
  }
  if (bad.empty()) {
    if (!(c4.obj.obj_ea <= c3.obj.obj_ea)) bad.push_back("Case4 > Case3");
    if (!(c3.obj.obj_ea <= c2.obj.obj_ea)) bad.push_back("Case3 > Case2");
    if (!(c2.obj.obj_ea <= c1.obj.obj_ea)) bad.push_back("Case2 > Case1");
  }
  Outcome out{bad.empty() ? Status::Pass : Status::Fail,
              "Obj^EA " + ea + " (solver limit " + fmt(cfg->time_limit) + " s, status C2 " + c2.solver_status + ", C3 " +
                  c3.solver_status + ", C4 " + c4.solver_status + "); 3385 kW in every case; " + timing};
  for (const auto& b : bad) out.detail += "; " + b;
  return out;
}

// 8 -----------------------------------------------------------------------
Outcome conservation() {
  std::vector<Base> plans;
  for (const auto& o : optima()) {
    plans.push_back(base_of(o.name + "/wca", o.wca, o.ewca.plan));
    plans.push_back(base_of(o.name + "/woca", o.woca, o.ewoca.plan));
    plans.push_back(base_of(o.name + "/alg1", o.woca, algorithm1_dispatch(o.woca, bfs_path(o.woca))));
  }
  for (const char* f : {"mutation/mut2.json", "r123.json"}) {
    const Scenario& sc = fixture(data_dir() / f);
    Instance in = make_instance(sc, Variant::WOCA);
    plans.push_back(base_of(f, in, algorithm1_dispatch(in, bfs_path(in))));
  }
  std::vector<std::string> bad;
  double worst = 0;
  for (const auto& b : plans) {
    if (!b.tl.feasible) {
      bad.push_back(b.name + " infeasible");
      continue;
    }
    const double total = b.inst.cells.total_load();
    auto curve = restored_curve(b.tl, b.inst);
    for (std::size_t i = 1; i < curve.size(); ++i)
      if (curve[i].first < curve[i - 1].first || curve[i].second < curve[i - 1].second)
        bad.push_back(b.name + " curve decreases");
    const double terminal = curve.empty() ? 0.0 : curve.back().second;
    if (std::fabs(terminal - total) > 1e-9 * std::max(1.0, total)) bad.push_back(b.name + " terminal " + fmt(terminal));
    ObjectiveReport r = objectives(resolve_plan(b.plan, b.inst), b.tl, b.inst);
    if (r.obj_ea < 0 || r.obj_ea > 1) bad.push_back(b.name + " obj_ea " + fmt(r.obj_ea));
    const double energy = total * b.inst.tmax / 60.0;
    const double dev = std::fabs(r.unserved_kwh + r.served_kwh - energy) / std::max(1.0, energy);
    worst = std::max(worst, dev);
    if (dev > 1e-9) bad.push_back(b.name + " energy identity off by " + fmt(dev));
  }
  Outcome out{bad.empty() ? Status::Pass : Status::Fail,
              std::to_string(plans.size()) + " plans: curves monotone to the total load, obj_ea in [0,1], energy identity max rel. dev " +
                  fmt(worst, 3)};
  for (const auto& b : bad) out.detail += "; " + b;
  return out;
}

// 9 -----------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism() {
  const fs::path tmp = fs::temp_directory_path() / ("dsr_accept_" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  struct Job {
    fs::path scenario;
    std::string args;
  };
  std::vector<Job> jobs;
  for (const auto& f : tiny_fixtures())
    for (const char* a : {"--mode enumerate --variant wca", "--mode enumerate --variant woca", "--mode wca",
                          "--mode woca", "--mode alg1", "--mode maxcov"})
      jobs.push_back({f, a});
  jobs.push_back({data_dir() / "r123.json", "--mode alg1"});
  jobs.push_back({data_dir() / "r123.json", "--mode maxcov"});
  jobs.push_back({data_dir() / "mutation" / "mut2.json", "--mode alg1"});
  if (solver()) jobs.push_back({data_dir() / "tiny1.json", "--mode wca --solver-cmd auto"});
  std::vector<std::string> bad;
  std::size_t n = 0;
  for (const auto& j : jobs) {
    std::string files[2][3];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = tmp / ("run" + std::to_string(run));
      fs::remove_all(out);
      const std::string cmd = std::string("\"") + DSR_ECVDSR + "\" run \"" + j.scenario.string() + "\" " + j.args +
                              " --out-dir \"" + out.string() + "\" > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      if (rc != 0) bad.push_back(j.scenario.stem().string() + " " + j.args + " exit " + std::to_string(rc));
      files[run][0] = slurp(out / "plan.json");
      files[run][1] = slurp(out / "timeline.csv");
      files[run][2] = slurp(out / "model.mps");
    }
    ++n;
    const char* names[3] = {"plan.json", "timeline.csv", "model.mps"};
    for (int k = 0; k < 3; ++k)
      if (files[0][k].empty() || files[0][k] != files[1][k])
        bad.push_back(j.scenario.stem().string() + " " + j.args + ": " + names[k] + " differs or is empty");
  }
  fs::remove_all(tmp);
  Outcome out{bad.empty() ? Status::Pass : Status::Fail,
              std::to_string(n) + " CLI runs repeated, plan.json/timeline.csv/model.mps byte-identical"};
  for (std::size_t i = 0; i < bad.size() && i < 5; ++i) out.detail += "; " + bad[i];
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"linearization oracle", linearization},      {"cross-oracle optimality", cross_oracle},
      {"dominance WCA <= WOCA", dominance},         {"heuristic one-sidedness", one_sided},
      {"validator mutation suite", mutation_suite}, {"earliest-feasible timelines", earliest_feasible},
      {"reconstructed 123-node orderings", r123_orderings}, {"conservation and normalization", conservation},
      {"artifact determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    auto t = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {Status::Fail, std::string("exception: ") + e.what()};
    }
    const char* word = o.status == Status::Pass ? "PASS" : o.status == Status::Skip ? "SKIP" : "FAIL";
    if (o.status == Status::Fail) ++failed;
    std::cout << "criterion " << id << " [" << word << "] " << criteria[i].first << ": " << o.detail << " ("
              << fmt(seconds_since(t), 3) << " s)" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
