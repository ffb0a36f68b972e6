#include <algorithm>
#include <map>

#include "dsr/simulator.hpp"

namespace dsr {

ObjectiveReport objectives(const ResolvedPlan& rp, const Timeline& tl, const Instance& in, const ObjectiveOptions& opt) {
  const Scenario& s = *in.scenario;
  const WeightSet& w = s.weights;
  ObjectiveReport r;

  double weighted = 0.0;
  for (std::size_t c : in.load_cells) {
    weighted += in.cells.cells[c].weight * tl.tE[c];
    const double load = in.cells.cells[c].load_kw;
    r.unserved_kwh += load * tl.tE[c] / 60.0;
    r.served_kwh += load * (in.tmax - tl.tE[c]) / 60.0;
    r.full_restoration_minute = std::max(r.full_restoration_minute, tl.tE[c]);
  }
  if (in.load_cells.empty()) r.full_restoration_minute = in.t0;
  if (in.load_weight_total > 0) r.obj_ea = weighted / (in.load_weight_total * in.tmax);

  double literal_work = 0.0;
  for (std::size_t c = 0; c < rp.ra.size(); ++c) {
    std::size_t loc = in.crew_depot[c];
    for (std::size_t k : rp.ra[c]) {
      r.ra_travel_min += in.ra_leg(loc, in.ra_site_loc(k));
      r.ra_work_min += in.ra_sites[k].dwell;
      literal_work += tl.tR[k] + in.ra_sites[k].manual_op;
      loc = in.ra_site_loc(k);
    }
  }
  if (in.n_crews() > 0) {
    double work = opt.ra_literal ? literal_work : r.ra_work_min;
    r.obj_ra = (w.omega_ra1 * r.ra_travel_min + w.omega_ra2 * work) / (static_cast<double>(in.n_crews()) * in.tmax);
  }
  r.ra_hours = (r.ra_travel_min + r.ra_work_min) / 60.0;

  for (std::size_t v = 0; v < rp.ca.size(); ++v) {
    std::size_t loc = in.ecv_depot[v];
    for (std::size_t k : rp.ca[v]) {
      r.ca_travel_min += in.ca_leg(loc, in.ca_site_loc(k));
      r.ca_dwell_min += tl.tCd[k] - tl.tCa[k];
      loc = in.ca_site_loc(k);
    }
  }
  if (in.variant == Variant::WCA && in.n_ecvs() > 0)
    r.obj_ca = (w.omega_ca1 * r.ca_travel_min + w.omega_ca2 * r.ca_dwell_min) / (static_cast<double>(in.n_ecvs()) * in.tmax);
  r.ca_hours = (r.ca_travel_min + r.ca_dwell_min) / 60.0;

  r.obj_sum = w.beta_ea * r.obj_ea + w.beta_ra * r.obj_ra;
  if (in.variant == Variant::WCA) r.obj_sum += w.beta_ca * r.obj_ca;
  return r;
}

std::vector<std::pair<double, double>> restored_curve(const Timeline& tl, const Instance& in) {
  std::map<double, double> at;
  for (std::size_t c : in.load_cells) at[tl.tE[c]] += in.cells.cells[c].load_kw;
  std::vector<std::pair<double, double>> out;
  double total = 0.0;
  for (const auto& [t, kw] : at) {
    total += kw;
    out.emplace_back(t, total);
  }
  return out;
}

}  // namespace dsr
