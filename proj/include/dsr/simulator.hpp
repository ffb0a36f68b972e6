#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dsr/plan.hpp"
#include "dsr/problem.hpp"

namespace dsr {

/// Every time quantity of a schedule, indexed like the instance. Unvisited
/// sites sit at the horizon; NaN marks quantities of switches left open.
struct Timeline {
  bool feasible = false;
  std::string tag;      // constraint family of the first failure
  std::string message;
  std::vector<double> tCa, tCd;  // per W^C position
  std::vector<double> tR;        // per W^R index
  std::vector<double> fR, tE;    // per cell
  std::vector<double> tAOop;     // per switch, remote operations only
  std::vector<double> op_done;   // per switch, completion of its closing
};

/// Optional lower bounds injected into the schedule; used to probe that
/// delaying an event never improves the objective.
struct EvalFloors {
  std::vector<double> tE;     // per cell
  std::vector<double> tAOop;  // per switch
  std::vector<double> tCd;    // per W^C position
};

/// Earliest feasible timeline of a plan. Crew arrivals follow from the
/// routes; remote operations, ECV departures and cell energization times are
/// the least fixed point of the precedence relations. Structural defects and
/// violated deadlines come back as feasible = false with a family tag.
Timeline evaluate(const ResolvedPlan& plan, const Instance& inst, const EvalFloors* floors = nullptr);
Timeline evaluate(const Plan& plan, const Instance& inst);

struct ObjectiveOptions {
  bool ra_literal = false;  // printed-formula reading of the crew work term
};

struct ObjectiveReport {
  double obj_ea = 0, obj_ra = 0, obj_ca = 0, obj_sum = 0;
  double unserved_kwh = 0;
  double served_kwh = 0;
  double ra_travel_min = 0, ra_work_min = 0;
  double ca_travel_min = 0, ca_dwell_min = 0;
  double ra_hours = 0, ca_hours = 0;
  double full_restoration_minute = 0;
};

ObjectiveReport objectives(const ResolvedPlan& plan, const Timeline& tl, const Instance& inst,
                           const ObjectiveOptions& opt = {});

/// (minute, cumulative kW) steps over load cells; empty without load.
std::vector<std::pair<double, double>> restored_curve(const Timeline& tl, const Instance& inst);

}  // namespace dsr
