#include "dsr/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dsr {

namespace {

constexpr double kEps = 1e-9;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Failure {
  std::string tag;
  std::string message;
};

class Scheduler {
 public:
  Scheduler(const ResolvedPlan& rp, const Instance& inst, const EvalFloors* floors)
      : rp_(rp), in_(inst), floors_(floors) {}

  Timeline run() {
    Timeline tl;
    try {
      check_structure();
      schedule_crews();
      build_groups();
      fixed_point();
      final_checks();
      tl.feasible = true;
    } catch (const Failure& f) {
      tl.feasible = false;
      tl.tag = f.tag;
      tl.message = f.message;
    }
    tl.tCa = tCa_;
    tl.tCd = tCd_;
    tl.tR = tR_;
    tl.fR = fR_;
    tl.tE.assign(in_.n_cells(), kNaN);
    if (!group_.empty())
      for (std::size_t c = 0; c < in_.n_cells(); ++c) tl.tE[c] = T_[group_[c]];
    tl.tAOop.assign(in_.switches.size(), kNaN);
    tl.op_done.assign(in_.switches.size(), kNaN);
    for (std::size_t s = 0; s < in_.switches.size(); ++s) {
      const SwitchOp& op = rp_.ops[s];
      if (!op.used) continue;
      if (op.automatic) {
        if (s >= aop_.size()) continue;  // structure check failed first
        tl.tAOop[s] = aop_[s];
        tl.op_done[s] = aop_[s] + in_.switches[s].auto_op;
      } else if (in_.switches[s].site && *in_.switches[s].site < tR_.size()) {
        tl.op_done[s] = tR_[*in_.switches[s].site] + in_.switches[s].dwell();
      }
    }
    return tl;
  }

 private:
  [[noreturn]] void fail(const std::string& tag, const std::string& msg) { throw Failure{tag, msg}; }

  std::string sw_name(std::size_t s) const { return "switch " + in_.switches[s].id; }
  std::string cell_name(std::size_t c) const { return "cell " + std::to_string(in_.cell_id(c)); }

  double floor_of(const std::vector<double>* v, std::size_t i) const {
    if (!v || i >= v->size()) return -std::numeric_limits<double>::infinity();
    return (*v)[i];
  }

  void check_structure() {
    const std::size_t nk = in_.ca_sites.size();
    ca_visitor_.assign(nk, -1);
    for (std::size_t v = 0; v < rp_.ca.size(); ++v)
      for (std::size_t k : rp_.ca[v]) {
        if (ca_visitor_[k] >= 0) fail("6", "ECV site " + in_.ca_site_id(k) + " visited more than once");
        ca_visitor_[k] = static_cast<int>(v);
      }
    std::vector<int> ra_visitor(in_.ra_sites.size(), -1);
    for (std::size_t c = 0; c < rp_.ra.size(); ++c)
      for (std::size_t k : rp_.ra[c]) {
        if (ra_visitor[k] >= 0) fail("17", "crew site " + in_.ra_sites[k].id + " visited more than once");
        ra_visitor[k] = static_cast<int>(c);
        if (in_.ra_sites[k].cluster != in_.crew_depot[c])
          fail("p2", "crew " + in_.crew_id(c) + " visits " + in_.ra_sites[k].id + " outside its depot cluster");
      }

    for (std::size_t s = 0; s < in_.switches.size(); ++s) {
      const SwitchInfo& sw = in_.switches[s];
      const SwitchOp& op = rp_.ops[s];
      if (op.used && op.automatic && !sw.remote) fail("27", sw_name(s) + " cannot be operated remotely");
      if (sw.intact && !(op.used && op.automatic)) fail("28", sw_name(s) + " is remotely operable and must be closed remotely");
      const bool visited = sw.site && ra_visitor[*sw.site] >= 0;
      const bool manual = op.used && !op.automatic;
      if (visited != manual)
        fail("41", sw_name(s) + (visited ? " is visited by a crew but not closed manually" : " is closed manually without a crew visit"));
      if (op.gov && !(op.used && op.automatic && !sw.intact)) fail("28", sw_name(s) + " has a governing site but no remote operation");
      if (op.used && op.automatic && !sw.intact) {
        if (!op.gov) fail("28", sw_name(s) + " is operated remotely without a governing site");
        std::size_t k = *op.gov;
        if (ca_visitor_[k] < 0) fail("31", sw_name(s) + " governed by unvisited site " + in_.ca_site_id(k));
        if (!in_.ecv_covers(static_cast<std::size_t>(ca_visitor_[k]), k, s))
          fail("30", sw_name(s) + " is outside the coverage of the ECV at " + in_.ca_site_id(k));
      }
    }

    // Energization forest.
    const std::size_t nc = in_.n_cells();
    parent_op_.assign(nc, -1);
    for (std::size_t s = 0; s < in_.switches.size(); ++s) {
      const SwitchOp& op = rp_.ops[s];
      if (!op.used) continue;
      if (parent_op_[op.child] >= 0) fail("E26", cell_name(op.child) + " has two energizing switches");
      parent_op_[op.child] = static_cast<int>(s);
    }
    for (std::size_t c = 0; c < nc; ++c) {
      const bool src = in_.cells.cells[c].is_source;
      if (src && parent_op_[c] >= 0) fail("E26", "source " + cell_name(c) + " must not be fed through a switch");
      if (!src && parent_op_[c] < 0) fail("E26", cell_name(c) + " is never energized");
    }
    for (std::size_t c = 0; c < nc; ++c) {
      std::size_t cur = c, steps = 0;
      while (parent_op_[cur] >= 0) {
        cur = rp_.ops[static_cast<std::size_t>(parent_op_[cur])].parent;
        if (++steps > nc) fail("E26", "energization path of " + cell_name(c) + " contains a cycle");
      }
    }
  }

  void schedule_crews() {
    tR_.assign(in_.ra_sites.size(), in_.tmax);
    for (std::size_t c = 0; c < rp_.ra.size(); ++c) {
      std::size_t loc = in_.crew_depot[c];
      double t = in_.t0;
      for (std::size_t k : rp_.ra[c]) {
        std::size_t next = in_.ra_site_loc(k);
        t += in_.ra_leg(loc, next);
        tR_[k] = t;
        if (t > in_.tmax + kEps) fail("23", "crew " + in_.crew_id(c) + " reaches " + in_.ra_sites[k].id + " after the horizon");
        t += in_.ra_sites[k].dwell;
        loc = next;
      }
    }
    fR_.assign(in_.n_cells(), in_.t0);
    for (const auto& f : in_.faults) fR_[f.cell] = std::max(fR_[f.cell], tR_[f.site] + f.repair);
    for (std::size_t c = 0; c < fR_.size(); ++c)
      if (fR_[c] > in_.tmax + kEps) fail("24", "faults in " + cell_name(c) + " are not repaired within the horizon");
  }

  // Cells joined by de-energized closings share one energization instant;
  // the group root is a source cell or the child of an energized closing.
  void build_groups() {
    const std::size_t nc = in_.n_cells();
    group_.assign(nc, 0);
    roots_.clear();
    std::vector<int> root_slot(nc, -1);
    for (std::size_t c = 0; c < nc; ++c) {
      std::size_t cur = c;
      while (parent_op_[cur] >= 0 && !rp_.ops[static_cast<std::size_t>(parent_op_[cur])].energized)
        cur = rp_.ops[static_cast<std::size_t>(parent_op_[cur])].parent;
      if (root_slot[cur] < 0) {
        root_slot[cur] = static_cast<int>(roots_.size());
        roots_.push_back(cur);
      }
      group_[c] = static_cast<std::size_t>(root_slot[cur]);
    }
    const std::size_t ng = roots_.size();
    lb_static_.assign(ng, in_.t0);
    internal_ad_.assign(ng, {});
    for (std::size_t c = 0; c < nc; ++c) {
      double& lb = lb_static_[group_[c]];
      lb = std::max(lb, fR_[c]);
      lb = std::max(lb, floor_of(floors_ ? &floors_->tE : nullptr, c));
      if (in_.cells.cells[c].is_source) lb = std::max(lb, in_.cells.cells[c].available_at);
    }
    for (std::size_t s = 0; s < in_.switches.size(); ++s) {
      const SwitchInfo& sw = in_.switches[s];
      if (sw.faulted) {
        // A faulted switch keeps both end cells dark until it is repaired.
        double done = tR_[*sw.site] + sw.repair;
        lb_static_[group_[sw.a]] = std::max(lb_static_[group_[sw.a]], done);
        lb_static_[group_[sw.b]] = std::max(lb_static_[group_[sw.b]], done);
      }
      const SwitchOp& op = rp_.ops[s];
      if (!op.used || op.energized) continue;
      std::size_t g = group_[op.parent];
      if (op.automatic) internal_ad_[g].push_back(s);
      else lb_static_[g] = std::max(lb_static_[g], tR_[*sw.site] + sw.dwell());
    }
  }

  double group_lb(std::size_t g) const {
    double lb = lb_static_[g];
    for (std::size_t s : internal_ad_[g]) lb = std::max(lb, aop_[s] + in_.switches[s].auto_op);
    return lb;
  }

  static bool update(double& slot, double value) {
    if (value == slot) return false;
    slot = value;
    return true;
  }

  void fixed_point() {
    const std::size_t nk = in_.ca_sites.size();
    tCa_.assign(nk, in_.tmax);
    tCd_.assign(nk, in_.tmax);
    aop_.assign(in_.switches.size(), in_.t0);
    T_.assign(roots_.size(), in_.t0);
    for (std::size_t g = 0; g < roots_.size(); ++g) T_[g] = lb_static_[g];

    std::vector<std::vector<std::size_t>> governed(nk);
    for (std::size_t s = 0; s < in_.switches.size(); ++s)
      if (rp_.ops[s].used && rp_.ops[s].automatic && rp_.ops[s].gov) governed[*rp_.ops[s].gov].push_back(s);

    std::size_t events = nk + in_.switches.size() + roots_.size() + 1;
    const std::size_t cap = events * events + 2;
    for (std::size_t iter = 0;; ++iter) {
      if (iter > cap) fail("E26", "timeline does not settle; operations wait on each other");
      bool changed = false;

      for (std::size_t v = 0; v < rp_.ca.size(); ++v) {
        std::size_t loc = in_.ecv_depot[v];
        double t = in_.t0;
        for (std::size_t k : rp_.ca[v]) {
          std::size_t next = in_.ca_site_loc(k);
          double arrive = t + in_.ca_leg(loc, next);
          double depart = std::max(arrive + in_.ca_min_stay[k], floor_of(floors_ ? &floors_->tCd : nullptr, k));
          for (std::size_t s : governed[k]) depart = std::max(depart, aop_[s]);
          changed |= update(tCa_[k], arrive);
          changed |= update(tCd_[k], depart);
          if (depart > in_.tmax + kEps) fail("8", "ECV " + in_.ecv_id(v) + " stays at " + in_.ca_site_id(k) + " past the horizon");
          t = depart;
          loc = next;
        }
      }

      for (std::size_t s = 0; s < in_.switches.size(); ++s) {
        const SwitchOp& op = rp_.ops[s];
        if (!op.used || !op.automatic) continue;
        const SwitchInfo& sw = in_.switches[s];
        double t = std::max(in_.t0, floor_of(floors_ ? &floors_->tAOop : nullptr, s));
        if (op.gov) t = std::max(t, tCa_[*op.gov]);
        if (op.energized) {
          t = std::max(t, T_[group_[op.parent]]);
          t = std::max(t, fR_[op.child]);
          t = std::max(t, group_lb(group_[op.child]) - sw.auto_op);
        }
        changed |= update(aop_[s], t);
        if (t > in_.tmax + kEps) fail("32", sw_name(s) + " cannot be operated within the horizon");
      }

      for (std::size_t g = 0; g < roots_.size(); ++g) {
        std::size_t r = roots_[g];
        double t;
        if (parent_op_[r] < 0) {
          t = group_lb(g);
        } else {
          std::size_t s = static_cast<std::size_t>(parent_op_[r]);
          const SwitchInfo& sw = in_.switches[s];
          if (rp_.ops[s].automatic) t = aop_[s] + sw.auto_op;
          else t = tR_[*sw.site] + sw.dwell();
        }
        changed |= update(T_[g], t);
        if (t > in_.tmax + kEps) fail("E26", cell_name(r) + " cannot be energized within the horizon");
      }
      if (!changed) break;
    }
  }

  void final_checks() {
    for (std::size_t g = 0; g < roots_.size(); ++g) {
      std::size_t r = roots_[g];
      if (parent_op_[r] < 0) continue;
      std::size_t s = static_cast<std::size_t>(parent_op_[r]);
      const SwitchOp& op = rp_.ops[s];
      const SwitchInfo& sw = in_.switches[s];
      if (op.automatic) continue;
      double arrive = tR_[*sw.site];
      if (arrive < T_[group_[op.parent]] - kEps)
        fail("43", sw_name(s) + " closed energized but the crew arrives before " + cell_name(op.parent) + " is live");
      if (T_[g] < group_lb(g) - kEps)
        fail(sw.faulted ? "45" : "44", sw_name(s) + " energizes " + cell_name(r) + " before the cells behind it are ready");
    }
    for (std::size_t s = 0; s < in_.switches.size(); ++s) {
      const SwitchOp& op = rp_.ops[s];
      if (!op.used || !op.automatic) continue;
      const SwitchInfo& sw = in_.switches[s];
      if (op.energized) {
        if (sw.ftu_cell && *sw.ftu_cell == op.child && aop_[s] > sw.residual + kEps)
          fail("37", sw_name(s) + " operated after its FTU battery is depleted");
      } else if (aop_[s] > sw.residual + kEps) {
        fail("40", sw_name(s) + " operated de-energized after its FTU battery is depleted");
      }
    }
  }

  const ResolvedPlan& rp_;
  const Instance& in_;
  const EvalFloors* floors_;
  std::vector<int> ca_visitor_;
  std::vector<int> parent_op_;
  std::vector<double> tCa_, tCd_, tR_, fR_, aop_, T_;
  std::vector<std::size_t> group_, roots_;
  std::vector<double> lb_static_;
  std::vector<std::vector<std::size_t>> internal_ad_;
};

}  // namespace

Timeline evaluate(const ResolvedPlan& plan, const Instance& inst, const EvalFloors* floors) {
  return Scheduler(plan, inst, floors).run();
}

Timeline evaluate(const Plan& plan, const Instance& inst) {
  ResolvedPlan rp;
  try {
    rp = resolve_plan(plan, inst);
  } catch (const PlanError& e) {
    Timeline tl;
    tl.feasible = false;
    tl.tag = e.tag();
    tl.message = e.what();
    return tl;
  }
  return evaluate(rp, inst);
}

}  // namespace dsr
