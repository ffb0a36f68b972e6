#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dsr/plan.hpp"
#include "dsr/problem.hpp"
#include "dsr/simulator.hpp"
#include "dsr/validator.hpp"
#include "json.hpp"

namespace dsr {

/// `entity,kind,minute,detail` rows sorted by minute, then entity and kind.
std::string timeline_csv(const ResolvedPlan& rp, const Timeline& tl, const Instance& inst);

/// `minute,kw` rows of the cumulative restored load.
std::string curve_csv(const std::vector<std::pair<double, double>>& curve);

struct CurveSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Step plot of one or more restoration curves over [t0, tmax].
std::string curve_svg(const std::vector<CurveSeries>& series, double t0, double tmax, double total_kw);

struct ReportInfo {
  std::string mode;         // run mode
  std::string plan_source;  // enumerator, solver, heuristic, ...
  std::string solver_status;
  ObjectiveOptions objective;
};

nlohmann::json make_report(const Instance& inst, const ReportInfo& info, const ResolvedPlan& rp, const Timeline& tl,
                           const ObjectiveReport& obj, const Verdict& verdict);

/// Side-by-side comparison, one column per report. Mismatched scenario
/// hashes are appended to `warnings`.
std::string report_table(const std::vector<nlohmann::json>& reports, const std::vector<std::string>& labels,
                         std::vector<std::string>& warnings);

std::string hex_hash(std::uint64_t h);

}  // namespace dsr
