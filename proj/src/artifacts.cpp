#include "dsr/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <tuple>

#include "dsr/mps.hpp"

namespace dsr {

using nlohmann::json;

namespace {

struct Row {
  double minute;
  std::string entity, kind, detail;
};

std::string mode_name(const SwitchOp& op) { return std::string(op.automatic ? "A" : "M") + (op.energized ? "E" : "D"); }

std::string fixed(double v, int prec) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(prec) << v;
  return s.str();
}

}  // namespace

std::string hex_hash(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string timeline_csv(const ResolvedPlan& rp, const Timeline& tl, const Instance& in) {
  std::vector<Row> rows;
  for (std::size_t v = 0; v < rp.ca.size(); ++v)
    for (std::size_t k : rp.ca[v]) {
      rows.push_back({tl.tCa[k], "ecv:" + in.ecv_id(v), "arrive", in.ca_site_id(k)});
      rows.push_back({tl.tCd[k], "ecv:" + in.ecv_id(v), "depart", in.ca_site_id(k)});
    }
  std::vector<std::string> crew_at(in.ra_sites.size());
  for (std::size_t c = 0; c < rp.ra.size(); ++c)
    for (std::size_t k : rp.ra[c]) {
      crew_at[k] = in.crew_id(c);
      const RaSite& site = in.ra_sites[k];
      rows.push_back({tl.tR[k], "crew:" + in.crew_id(c), "arrive", site.id});
      rows.push_back({tl.tR[k] + site.dwell, "crew:" + in.crew_id(c), "leave", site.id});
    }
  for (const auto& f : in.faults)
    if (!crew_at[f.site].empty())
      rows.push_back({tl.tR[f.site] + f.repair, "line:" + f.id, "repaired", "crew " + crew_at[f.site]});
  for (std::size_t s = 0; s < in.switches.size(); ++s) {
    const SwitchOp& op = rp.ops[s];
    if (!op.used) continue;
    const SwitchInfo& sw = in.switches[s];
    std::string detail = "cells " + std::to_string(in.cell_id(op.parent)) + "->" + std::to_string(in.cell_id(op.child));
    if (op.automatic) {
      detail += op.gov ? " via ECV at " + in.ca_site_id(*op.gov) : " remote";
      rows.push_back({tl.tAOop[s], "switch:" + sw.id, "start-" + mode_name(op), detail});
    } else if (sw.site) {
      detail += " by crew " + crew_at[*sw.site];
    }
    rows.push_back({tl.op_done[s], "switch:" + sw.id, mode_name(op), detail});
  }
  for (std::size_t c = 0; c < in.n_cells(); ++c) {
    const NodeCell& cell = in.cells.cells[c];
    std::string detail = fixed(cell.load_kw, 3) + " kW";
    if (cell.is_source) detail += " source";
    rows.push_back({tl.tE[c], "cell:" + std::to_string(cell.id), "energized", detail});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.minute, a.entity, a.kind) < std::tie(b.minute, b.entity, b.kind);
  });
  std::string out = "entity,kind,minute,detail\n";
  for (const auto& r : rows) out += r.entity + "," + r.kind + "," + format_number(r.minute) + "," + r.detail + "\n";
  return out;
}

std::string curve_csv(const std::vector<std::pair<double, double>>& curve) {
  std::string out = "minute,kw\n";
  for (const auto& [t, kw] : curve) out += format_number(t) + "," + format_number(kw) + "\n";
  return out;
}

std::string curve_svg(const std::vector<CurveSeries>& series, double t0, double tmax, double total_kw) {
  const double W = 720, H = 420, left = 70, right = 20, top = 30, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  const double span = std::max(tmax - t0, 1e-9), ymax = total_kw > 0 ? total_kw : 1.0;
  auto X = [&](double t) { return left + pw * (std::clamp(t, t0, tmax) - t0) / span; };
  auto Y = [&](double kw) { return top + ph * (1.0 - kw / ymax); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " "
    << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double t = t0 + span * i / 4, kw = ymax * i / 4;
    s << "<text x=\"" << fixed(X(t), 1) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << fixed(t, 0)
      << "</text>\n";
    s << "<text x=\"" << left - 6 << "\" y=\"" << fixed(Y(kw) + 4, 1) << "\" text-anchor=\"end\">" << fixed(kw, 0)
      << "</text>\n";
  }
  s << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">Time (min)</text>\n";
  s << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << top + ph / 2
    << ")\">Restored load (kW)</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = colors[i % 6];
    std::ostringstream path;
    double kw = 0;
    path << fixed(X(t0), 2) << "," << fixed(Y(0), 2);
    for (const auto& [t, v] : series[i].points) {
      path << " " << fixed(X(t), 2) << "," << fixed(Y(kw), 2);
      kw = v;
      path << " " << fixed(X(t), 2) << "," << fixed(Y(kw), 2);
    }
    path << " " << fixed(X(tmax), 2) << "," << fixed(Y(kw), 2);
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << path.str() << "\"/>\n";
    s << "<text x=\"" << left + 10 << "\" y=\"" << top + 14 + 16 * static_cast<double>(i) << "\" fill=\"" << color << "\">"
      << series[i].label << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

json make_report(const Instance& in, const ReportInfo& info, const ResolvedPlan& rp, const Timeline& tl,
                 const ObjectiveReport& obj, const Verdict& verdict) {
  (void)rp;
  json r;
  r["scenario"] = in.scenario->name;
  r["scenario_hash"] = hex_hash(scenario_hash(*in.scenario));
  r["variant"] = variant_name(in.variant);
  r["mode"] = info.mode;
  r["plan_source"] = info.plan_source;
  if (!info.solver_status.empty()) r["solver_status"] = info.solver_status;
  r["obj_ra_reading"] = info.objective.ra_literal ? "literal" : "textual";
  r["obj_ea"] = obj.obj_ea;
  r["obj_ra"] = obj.obj_ra;
  r["obj_ca"] = obj.obj_ca;
  r["obj_sum"] = obj.obj_sum;
  r["unserved_kwh"] = obj.unserved_kwh;
  r["served_kwh"] = obj.served_kwh;
  r["ra_hours"] = obj.ra_hours;
  r["ca_hours"] = obj.ca_hours;
  r["full_restoration_minute"] = obj.full_restoration_minute;
  double total = 0, restored = 0;
  for (std::size_t c : in.load_cells) {
    total += in.cells.cells[c].load_kw;
    if (tl.feasible && tl.tE[c] <= in.tmax + 1e-9) restored += in.cells.cells[c].load_kw;
  }
  r["total_load_kw"] = total;
  r["restored_kw"] = restored;
  json v;
  v["pass"] = verdict.pass;
  v["tags"] = verdict.tags();
  json list = json::array();
  for (const auto& x : verdict.violations) list.push_back({{"tag", x.tag}, {"message", x.message}});
  v["violations"] = list;
  r["verdict"] = v;
  return r;
}

std::string report_table(const std::vector<json>& reports, const std::vector<std::string>& labels,
                         std::vector<std::string>& warnings) {
  for (std::size_t i = 1; i < reports.size(); ++i)
    if (reports[i].value("scenario_hash", "") != reports[0].value("scenario_hash", ""))
      warnings.push_back("report '" + labels[i] + "' comes from a different scenario than '" + labels[0] + "'");
  struct Line {
    const char* title;
    const char* key;
    int prec;
  };
  const Line lines[] = {{"Obj EA", "obj_ea", 4},
                        {"Obj RA", "obj_ra", 4},
                        {"Obj CA", "obj_ca", 4},
                        {"Obj sum", "obj_sum", 4},
                        {"Total unserved energy (kWh)", "unserved_kwh", 2},
                        {"Total time all RAs take (hours)", "ra_hours", 2},
                        {"Total time all CAs take (hours)", "ca_hours", 2},
                        {"Full restoration (min)", "full_restoration_minute", 2}};
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head{"metric"};
  for (const auto& l : labels) head.push_back(l);
  cells.push_back(head);
  std::vector<std::string> mode{"mode"};
  for (const auto& r : reports) mode.push_back(r.value("mode", "") + "/" + r.value("variant", ""));
  cells.push_back(mode);
  for (const auto& l : lines) {
    std::vector<std::string> row{l.title};
    for (const auto& r : reports) row.push_back(r.contains(l.key) ? fixed(r[l.key].get<double>(), l.prec) : "-");
    cells.push_back(row);
  }
  std::vector<std::string> verdict{"verdict"};
  for (const auto& r : reports) verdict.push_back(r.contains("verdict") && r["verdict"].value("pass", false) ? "pass" : "FAIL");
  cells.push_back(verdict);

  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::ostringstream out;
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == 0) out << std::left << std::setw(static_cast<int>(width[i])) << row[i];
      else out << "  " << std::right << std::setw(static_cast<int>(width[i])) << row[i];
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace dsr
