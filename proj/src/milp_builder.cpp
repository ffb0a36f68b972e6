#include "dsr/milp_builder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace dsr {

using Terms = std::vector<std::pair<std::size_t, double>>;

std::string ca_loc_name(const Instance& in, std::size_t loc) {
  return loc < in.ecv_depots.size() ? in.ecv_depots[loc] : in.ca_site_id(loc - in.ecv_depots.size());
}

std::string ra_loc_name(const Instance& in, std::size_t loc) {
  return loc < in.crew_depots.size() ? in.crew_depots[loc] : in.ra_sites[loc - in.crew_depots.size()].id;
}

std::string dir_suffix(const Instance& in, std::size_t from_cell, std::size_t to_cell) {
  return std::to_string(in.cell_id(from_cell)) + "_" + std::to_string(in.cell_id(to_cell));
}

namespace {

struct DirVars {
  std::size_t from = 0, to = 0;
  std::size_t xE = 0, dMO = 0;
  std::optional<std::size_t> dMOe, dMOde;
  std::optional<std::size_t> dAO, dAOe, dAOde, tAOop, y, dE, dR;
};

class Builder {
 public:
  Builder(const Instance& in, const BuildOptions& opt) : in_(in), opt_(opt), wca_(in.variant == Variant::WCA), M_(in.big_m) {}

  MilpModel build() {
    m_.name = std::string("dsr_") + variant_name(in_.variant);
    declare();
    if (wca_) ca_rows();
    ra_rows();
    ea_rows();
    switch_rows();
    objective();
    return std::move(m_);
  }

 private:
  std::size_t nCL() const { return in_.ecv_depots.size() + in_.ca_sites.size(); }
  std::size_t nRL() const { return in_.crew_depots.size() + in_.ra_sites.size(); }
  std::string cn(std::size_t loc) const { return ca_loc_name(in_, loc); }
  std::string rn(std::size_t loc) const { return ra_loc_name(in_, loc); }
  std::size_t ra_cluster(std::size_t loc) const {
    return loc < in_.crew_depots.size() ? loc : in_.ra_sites[loc - in_.crew_depots.size()].cluster;
  }

  void declare() {
    const double t0 = in_.t0, tmax = in_.tmax;
    if (wca_) {
      const std::size_t n = nCL(), nd = in_.ecv_depots.size();
      std::set<std::pair<std::size_t, std::size_t>> fixed_legs;
      if (opt_.fixed_ca)
        for (std::size_t v = 0; v < opt_.fixed_ca->size(); ++v) {
          std::size_t loc = in_.ecv_depot[v];
          for (std::size_t k : (*opt_.fixed_ca)[v]) {
            fixed_legs.insert({loc, nd + k});
            loc = nd + k;
          }
        }
      xC_.assign(n, std::vector<std::size_t>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          xC_[i][j] = m_.add_binary("xC_" + cn(i) + "_" + cn(j));
          if (opt_.fixed_ca && i != j) {
            double v = fixed_legs.count({i, j}) ? 1.0 : 0.0;
            m_.vars()[xC_[i][j]].lb = v;
            m_.vars()[xC_[i][j]].ub = v;
          }
        }
      for (std::size_t i = 0; i < n; ++i) {
        tCa_.push_back(m_.add_var("tCa_" + cn(i), VarKind::Continuous, t0, tmax));
        tCd_.push_back(m_.add_var("tCd_" + cn(i), VarKind::Continuous, t0, tmax));
      }
    }
    const std::size_t nr = nRL(), ndr = in_.crew_depots.size();
    xR_.assign(nr, std::vector<std::size_t>(nr));
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nr; ++j) {
        xR_[i][j] = m_.add_binary("xR_" + rn(i) + "_" + rn(j));
        // Crew legs stay inside the depot cluster of their endpoints.
        if (i != j && j >= ndr && ra_cluster(i) != ra_cluster(j)) m_.vars()[xR_[i][j]].ub = 0.0;
      }
    for (std::size_t i = 0; i < nr; ++i) tR_.push_back(m_.add_var("tR_" + rn(i), VarKind::Continuous, t0, tmax));
    const std::size_t nc = in_.n_cells();
    for (std::size_t c = 0; c < nc; ++c) {
      fR_.push_back(m_.add_var("fR_" + std::to_string(in_.cell_id(c)), VarKind::Continuous, t0, tmax));
      tE_.push_back(m_.add_var("tE_" + std::to_string(in_.cell_id(c)), VarKind::Continuous, t0, tmax));
    }
    for (std::size_t c = 0; c < nc; ++c)
      lvl_.push_back(m_.add_var("lvl_" + std::to_string(in_.cell_id(c)), VarKind::Continuous, 0.0,
                                static_cast<double>(nc > 0 ? nc - 1 : 0)));

    dirs_.resize(in_.switches.size());
    for (std::size_t s = 0; s < in_.switches.size(); ++s) {
      const SwitchInfo& sw = in_.switches[s];
      for (int d = 0; d < 2; ++d) {
        DirVars& v = dirs_[s][d];
        v.from = d == 0 ? sw.a : sw.b;
        v.to = d == 0 ? sw.b : sw.a;
        const std::string sfx = dir_suffix(in_, v.from, v.to);
        v.xE = m_.add_binary("xE_" + sfx);
        v.dMO = m_.add_binary("dMO_" + sfx);
        if (sw.site) {
          v.dMOe = m_.add_binary("dMOe_" + sfx);
          v.dMOde = m_.add_binary("dMOde_" + sfx);
        }
        if (sw.remote) {
          v.dAO = m_.add_binary("dAO_" + sfx);
          v.dAOe = m_.add_binary("dAOe_" + sfx);
          v.dAOde = m_.add_binary("dAOde_" + sfx);
          v.tAOop = m_.add_var("tAOop_" + sfx, VarKind::Continuous, t0, tmax);
        }
      }
      if (sw.remote && !sw.intact)
        for (std::size_t k : sw.gov_sites) z_[{s, k}] = m_.add_binary("z_" + sw.id + "_" + in_.ca_site_id(k));
    }
    if (opt_.obj_ra_literal && in_.n_crews() > 0 && !in_.ra_sites.empty())
      objconst_ = m_.add_var("objconst", VarKind::Continuous, 1.0, 1.0, "objconst");
  }

  Terms inflow(const std::vector<std::vector<std::size_t>>& x, std::size_t k, double coef = 1.0) const {
    Terms t;
    for (std::size_t h = 0; h < x.size(); ++h)
      if (h != k) t.push_back({x[h][k], coef});
    return t;
  }

  void ca_rows() {
    const std::size_t n = nCL(), nd = in_.ecv_depots.size();
    for (std::size_t d = 0; d < nd; ++d) m_.add_row("c1_" + cn(d), {{xC_[d][d], 1}}, Sense::EQ, 1);
    for (std::size_t k = nd; k < n; ++k) m_.add_row("c2_" + cn(k), {{xC_[k][k], 1}}, Sense::EQ, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < nd; ++j)
        if (i != j) m_.add_row("c3_" + cn(i) + "_" + cn(j), {{xC_[i][j], 1}}, Sense::EQ, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        m_.add_row("c4_" + cn(i) + "_" + cn(j), {{xC_[i][j], 1}, {xC_[j][i], 1}}, Sense::LE, 1);
    for (std::size_t d = 0; d < nd; ++d) {
      Terms t;
      for (std::size_t j = 0; j < n; ++j)
        if (j != d) t.push_back({xC_[d][j], 1});
      m_.add_row("c5_" + cn(d), t, Sense::LE, in_.ecv_fleet[d]);
    }
    for (std::size_t k = nd; k < n; ++k) {
      Terms t = inflow(xC_, k, -1.0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) t.push_back({xC_[k][j], 1});
      m_.add_row("c6a_" + cn(k), t, Sense::LE, 0);
      m_.add_row("c6b_" + cn(k), inflow(xC_, k), Sense::LE, 1);
    }
    for (std::size_t d = 0; d < nd; ++d) {
      m_.add_row("c7_" + cn(d), {{tCa_[d], 1}}, Sense::EQ, in_.t0);
      // ECVs leave their depot at the start; any waiting counts as stay.
      m_.add_row("c7d_" + cn(d), {{tCd_[d], 1}}, Sense::EQ, in_.t0);
    }
    for (std::size_t i = 0; i < n; ++i) m_.add_row("c8_" + cn(i), {{tCa_[i], 1}, {tCd_[i], -1}}, Sense::LE, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = nd; j < n; ++j) {
        if (i == j) continue;
        const double T = in_.ca_leg(i, j);
        const std::string sfx = cn(i) + "_" + cn(j);
        m_.add_row("c9a_" + sfx, {{tCa_[j], 1}, {tCd_[i], -1}, {xC_[i][j], -M_}}, Sense::GE, T - M_);
        m_.add_row("c9b_" + sfx, {{tCa_[j], 1}, {tCd_[i], -1}, {xC_[i][j], M_}}, Sense::LE, T + M_);
      }
    for (std::size_t k = nd; k < n; ++k) {
      Terms t{{tCd_[k], 1}, {tCa_[k], -1}};
      for (auto& e : inflow(xC_, k, -M_)) t.push_back(e);
      m_.add_row("c10_" + cn(k), t, Sense::GE, in_.ca_min_stay[k - nd] - M_);
      Terms a{{tCa_[k], 1}}, b{{tCa_[k], 1}};
      for (auto& e : inflow(xC_, k, M_)) a.push_back(e);
      for (auto& e : inflow(xC_, k, -M_)) b.push_back(e);
      m_.add_row("c11a_" + cn(k), a, Sense::GE, in_.tmax);
      m_.add_row("c11b_" + cn(k), b, Sense::LE, in_.tmax);
    }
  }

  void ra_rows() {
    const std::size_t n = nRL(), nd = in_.crew_depots.size();
    for (std::size_t d = 0; d < nd; ++d) m_.add_row("c12_" + rn(d), {{xR_[d][d], 1}}, Sense::EQ, 1);
    for (std::size_t k = nd; k < n; ++k) m_.add_row("c13_" + rn(k), {{xR_[k][k], 1}}, Sense::EQ, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < nd; ++j)
        if (i != j) m_.add_row("c14_" + rn(i) + "_" + rn(j), {{xR_[i][j], 1}}, Sense::EQ, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        m_.add_row("c15_" + rn(i) + "_" + rn(j), {{xR_[i][j], 1}, {xR_[j][i], 1}}, Sense::LE, 1);
    for (std::size_t d = 0; d < nd; ++d) {
      Terms t;
      for (std::size_t j = 0; j < n; ++j)
        if (j != d) t.push_back({xR_[d][j], 1});
      m_.add_row("c16_" + rn(d), t, Sense::LE, in_.crew_fleet[d]);
    }
    for (std::size_t k = nd; k < n; ++k) {
      Terms t = inflow(xR_, k, -1.0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) t.push_back({xR_[k][j], 1});
      m_.add_row("c17a_" + rn(k), t, Sense::LE, 0);
      m_.add_row("c17b_" + rn(k), inflow(xR_, k), Sense::LE, 1);
    }
    for (std::size_t d = 0; d < nd; ++d) m_.add_row("c18_" + rn(d), {{tR_[d], 1}}, Sense::EQ, in_.t0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = nd; j < n; ++j) {
        if (i == j) continue;
        std::string fam = "c19";
        double dwell = 0.0;
        if (i >= nd) {
          const RaSite& site = in_.ra_sites[i - nd];
          dwell = site.dwell;
          fam = !site.is_switch ? "c20" : (in_.switches[site.index].faulted ? "c22" : "c21");
        }
        const double T = in_.ra_leg(i, j);
        const std::string sfx = rn(i) + "_" + rn(j);
        m_.add_row(fam + "a_" + sfx, {{tR_[j], 1}, {tR_[i], -1}, {xR_[i][j], -M_}}, Sense::GE, dwell + T - M_);
        m_.add_row(fam + "b_" + sfx, {{tR_[j], 1}, {tR_[i], -1}, {xR_[i][j], M_}}, Sense::LE, dwell + T + M_);
      }
    for (std::size_t k = nd; k < n; ++k) {
      Terms a{{tR_[k], 1}}, b{{tR_[k], 1}};
      for (auto& e : inflow(xR_, k, M_)) a.push_back(e);
      for (auto& e : inflow(xR_, k, -M_)) b.push_back(e);
      m_.add_row("c23a_" + rn(k), a, Sense::GE, in_.tmax);
      m_.add_row("c23b_" + rn(k), b, Sense::LE, in_.tmax);
    }
    std::vector<bool> has_fault(in_.n_cells(), false);
    for (const auto& f : in_.faults) {
      has_fault[f.cell] = true;
      m_.add_row("c24_" + f.id, {{fR_[f.cell], 1}, {tR_[nd + f.site], -1}}, Sense::GE, f.repair);
    }
    for (std::size_t c = 0; c < in_.n_cells(); ++c)
      if (!has_fault[c]) m_.add_row("c25_" + std::to_string(in_.cell_id(c)), {{fR_[c], 1}}, Sense::EQ, in_.t0);
  }

  void ea_rows() {
    const std::size_t nc = in_.n_cells();
    std::vector<Terms> into(nc);
    Terms all;
    std::size_t sources = 0;
    for (const auto& pair : dirs_)
      for (const auto& v : pair) {
        into[v.to].push_back({v.xE, 1});
        all.push_back({v.xE, 1});
      }
    for (std::size_t c = 0; c < nc; ++c) {
      const bool src = in_.cells.cells[c].is_source;
      if (src) ++sources;
      m_.add_row("eIn_" + std::to_string(in_.cell_id(c)), into[c], Sense::EQ, src ? 0.0 : 1.0);
    }
    m_.add_row("eRad", all, Sense::EQ, static_cast<double>(nc - sources));
    const double n = static_cast<double>(nc);
    for (const auto& pair : dirs_)
      for (const auto& v : pair)
        m_.add_row("eMtz_" + dir_suffix(in_, v.from, v.to), {{lvl_[v.to], 1}, {lvl_[v.from], -1}, {v.xE, -n}}, Sense::GE,
                   1.0 - n);
    for (std::size_t c = 0; c < nc; ++c)
      if (in_.cells.cells[c].is_source)
        m_.add_row("eSrc_" + std::to_string(in_.cell_id(c)), {{tE_[c], 1}}, Sense::GE, in_.cells.cells[c].available_at);
  }

  void switch_rows() {
    const std::size_t ndr = in_.crew_depots.size(), ndc = in_.ecv_depots.size();
    for (std::size_t s = 0; s < in_.switches.size(); ++s) {
      const SwitchInfo& sw = in_.switches[s];
      for (const auto& v : dirs_[s]) {
        const std::string sfx = dir_suffix(in_, v.from, v.to);
        Terms t{{v.xE, 1}, {v.dMO, -1}};
        if (v.dAO) t.push_back({*v.dAO, -1});
        m_.add_row((sw.remote ? "c27_" : "r27_") + sfx, t, Sense::EQ, 0);
      }
      if (sw.remote) remote_rows(s, ndc);
      manual_rows(s, ndr);
    }
    apply_partial_damage_fixes(m_, in_);
    for (std::size_t c = 0; c < in_.n_cells(); ++c)
      m_.add_row("c50_" + std::to_string(in_.cell_id(c)), {{tE_[c], 1}, {fR_[c], -1}}, Sense::GE, 0);
  }

  void remote_rows(std::size_t s, std::size_t ndc) {
    const SwitchInfo& sw = in_.switches[s];
    const auto& d0 = dirs_[s][0];
    const auto& d1 = dirs_[s][1];
    if (!sw.intact) {
      Terms t{{*d0.dAO, 1}, {*d1.dAO, 1}};
      for (std::size_t k : sw.gov_sites) t.push_back({z_.at({s, k}), -1});
      m_.add_row("c28_" + sw.id, t, Sense::EQ, 0);
      if (!sw.gov_sites.empty()) {
        Terms zs;
        for (std::size_t k : sw.gov_sites) zs.push_back({z_.at({s, k}), 1});
        m_.add_row("c29_" + sw.id, zs, Sense::LE, 1);
      }
      for (std::size_t k : sw.gov_sites) {
        const std::size_t z = z_.at({s, k});
        const std::size_t loc = ndc + k;
        Terms t31{{z, 1}};
        for (auto& e : inflow(xC_, loc, -1.0)) t31.push_back(e);
        const std::string zs = sw.id + "_" + in_.ca_site_id(k);
        m_.add_row("c31_" + zs, t31, Sense::LE, 0);
        for (const auto& v : dirs_[s]) {
          const std::string sfx = dir_suffix(in_, v.from, v.to) + "_" + in_.ca_site_id(k);
          m_.add_row("c33a_" + sfx, {{*v.tAOop, 1}, {tCa_[loc], -1}, {z, -M_}, {*v.dAO, -M_}}, Sense::GE, -2 * M_);
          m_.add_row("c33b_" + sfx, {{*v.tAOop, 1}, {tCd_[loc], -1}, {z, M_}, {*v.dAO, M_}}, Sense::LE, 2 * M_);
        }
      }
    }
    for (auto& v : dirs_[s]) {
      const std::string sfx = dir_suffix(in_, v.from, v.to);
      const std::size_t ti = tE_[v.from], tj = tE_[v.to], op = *v.tAOop, e = *v.dAOe, de = *v.dAOde, ao = *v.dAO;
      m_.add_row("c34a_" + sfx, {{e, 1}, {de, 1}, {ao, -M_}}, Sense::GE, 1 - M_);
      m_.add_row("c34b_" + sfx, {{e, 1}, {de, 1}, {ao, M_}}, Sense::LE, 1 + M_);
      MaxVars mv = linearize_max(m_, ti, fR_[v.to], in_.tmax, sfx, in_.t0);
      v.y = mv.y;
      v.dE = mv.dE;
      v.dR = mv.dR;
      m_.add_row("c35a_" + sfx, {{op, 1}, {mv.y, -1}, {e, -M_}}, Sense::LE, 0);
      m_.add_row("c35b_" + sfx, {{e, M_}, {op, -1}, {mv.y, 1}}, Sense::LE, M_);
      m_.add_row("c36a_" + sfx, {{tj, 1}, {op, -1}, {ao, -M_}, {e, -M_}}, Sense::GE, sw.auto_op - 2 * M_);
      m_.add_row("c36b_" + sfx, {{tj, 1}, {op, -1}, {ao, M_}, {e, M_}}, Sense::LE, sw.auto_op + 2 * M_);
      if (sw.ftu_cell && *sw.ftu_cell == v.to)
        m_.add_row("c37_" + sfx, {{op, 1}, {ao, M_}, {e, M_}}, Sense::LE, sw.residual + 2 * M_);
      m_.add_row("c38a_" + sfx, {{ti, 1}, {op, -1}, {de, -M_}}, Sense::LE, sw.auto_op);
      m_.add_row("c38b_" + sfx, {{de, M_}, {ti, -1}, {op, 1}}, Sense::LE, M_ - sw.auto_op);
      m_.add_row("c39a_" + sfx, {{tj, 1}, {ti, -1}, {ao, -M_}, {de, -M_}}, Sense::GE, -2 * M_);
      m_.add_row("c39b_" + sfx, {{tj, 1}, {ti, -1}, {ao, M_}, {de, M_}}, Sense::LE, 2 * M_);
      m_.add_row("c40_" + sfx, {{op, 1}, {ao, M_}, {de, M_}}, Sense::LE, sw.residual + 2 * M_);
    }
  }

  void manual_rows(std::size_t s, std::size_t ndr) {
    const SwitchInfo& sw = in_.switches[s];
    if (!sw.site) return;  // fixed by apply_partial_damage_fixes
    const std::size_t loc = ndr + *sw.site;
    const std::size_t tr = tR_[loc];
    Terms t41{{dirs_[s][0].dMO, 1}, {dirs_[s][1].dMO, 1}};
    for (auto& e : inflow(xR_, loc, -1.0)) t41.push_back(e);
    m_.add_row("c41_" + sw.id, t41, Sense::EQ, 0);
    const double D = sw.dwell();
    const std::string f44 = sw.faulted ? "c45" : "c44", f46 = sw.faulted ? "c47" : "c46";
    for (const auto& v : dirs_[s]) {
      const std::string sfx = dir_suffix(in_, v.from, v.to);
      const std::size_t ti = tE_[v.from], tj = tE_[v.to], mo = v.dMO, e = *v.dMOe, de = *v.dMOde;
      m_.add_row("c42a_" + sfx, {{e, 1}, {de, 1}, {mo, -M_}}, Sense::GE, 1 - M_);
      m_.add_row("c42b_" + sfx, {{e, 1}, {de, 1}, {mo, M_}}, Sense::LE, 1 + M_);
      m_.add_row("c43a_" + sfx, {{tr, 1}, {ti, -1}, {e, -M_}}, Sense::LE, 0);
      m_.add_row("c43b_" + sfx, {{e, M_}, {tr, -1}, {ti, 1}}, Sense::LE, M_);
      m_.add_row(f44 + "a_" + sfx, {{tj, 1}, {tr, -1}, {mo, -M_}, {e, -M_}}, Sense::GE, D - 2 * M_);
      m_.add_row(f44 + "b_" + sfx, {{tj, 1}, {tr, -1}, {mo, M_}, {e, M_}}, Sense::LE, D + 2 * M_);
      m_.add_row(f46 + "a_" + sfx, {{ti, 1}, {tr, -1}, {de, -M_}}, Sense::LE, D);
      m_.add_row(f46 + "b_" + sfx, {{de, M_}, {ti, -1}, {tr, 1}}, Sense::LE, M_ - D);
      m_.add_row("c48a_" + sfx, {{tj, 1}, {ti, -1}, {mo, -M_}, {de, -M_}}, Sense::GE, -2 * M_);
      m_.add_row("c48b_" + sfx, {{tj, 1}, {ti, -1}, {mo, M_}, {de, M_}}, Sense::LE, 2 * M_);
    }
    if (sw.faulted) {
      m_.add_row("c49a_" + sw.id, {{tE_[sw.a], 1}, {tr, -1}}, Sense::GE, sw.repair);
      m_.add_row("c49b_" + sw.id, {{tE_[sw.b], 1}, {tr, -1}}, Sense::GE, sw.repair);
    }
  }

  void objective() {
    const WeightSet& w = in_.scenario->weights;
    if (in_.load_weight_total > 0)
      for (std::size_t c : in_.load_cells)
        m_.add_objective(tE_[c], w.beta_ea * in_.cells.cells[c].weight / (in_.load_weight_total * in_.tmax));
    if (in_.n_crews() > 0) {
      const double sc = w.beta_ra / (static_cast<double>(in_.n_crews()) * in_.tmax);
      const std::size_t n = nRL(), nd = in_.crew_depots.size();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = nd; j < n; ++j)
          if (i != j) {
            const RaSite& site = in_.ra_sites[j - nd];
            double c = w.omega_ra1 * in_.ra_leg(i, j);
            c += w.omega_ra2 * (opt_.obj_ra_literal ? in_.tmax + site.manual_op : site.dwell);
            if (c != 0.0) m_.add_objective(xR_[i][j], sc * c);
          }
      if (opt_.obj_ra_literal && objconst_) {
        for (std::size_t j = nd; j < n; ++j) m_.add_objective(tR_[j], sc * w.omega_ra2);
        m_.add_objective(*objconst_, -sc * w.omega_ra2 * in_.tmax * static_cast<double>(in_.ra_sites.size()));
      }
    }
    if (wca_ && in_.n_ecvs() > 0) {
      const double sc = w.beta_ca / (static_cast<double>(in_.n_ecvs()) * in_.tmax);
      const std::size_t n = nCL(), nd = in_.ecv_depots.size();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = nd; j < n; ++j)
          if (i != j && in_.ca_leg(i, j) != 0.0) m_.add_objective(xC_[i][j], sc * w.omega_ca1 * in_.ca_leg(i, j));
      for (std::size_t k = nd; k < n; ++k) {
        m_.add_objective(tCd_[k], sc * w.omega_ca2);
        m_.add_objective(tCa_[k], -sc * w.omega_ca2);
      }
    }
  }

  const Instance& in_;
  const BuildOptions& opt_;
  bool wca_;
  double M_;
  MilpModel m_;
  std::vector<std::vector<std::size_t>> xC_, xR_;
  std::vector<std::size_t> tCa_, tCd_, tR_, fR_, tE_, lvl_;
  std::vector<std::array<DirVars, 2>> dirs_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> z_;
  std::optional<std::size_t> objconst_;
};

}  // namespace

void apply_partial_damage_fixes(MilpModel& m, const Instance& in) {
  for (const auto& sw : in.switches) {
    if (!sw.intact) continue;
    const std::string f = dir_suffix(in, sw.a, sw.b), b = dir_suffix(in, sw.b, sw.a);
    if (m.find("pd28_" + sw.id)) continue;
    m.add_row("pd28_" + sw.id, {{m.at("dAO_" + f), 1}, {m.at("dAO_" + b), 1}}, Sense::EQ, 1);
    m.add_row("pd41_" + sw.id, {{m.at("dMO_" + f), 1}, {m.at("dMO_" + b), 1}}, Sense::EQ, 0);
  }
}

MilpModel build_wca(const Instance& inst, const BuildOptions& opt) {
  if (inst.variant != Variant::WCA) throw std::invalid_argument("build_wca needs a WCA instance");
  return Builder(inst, opt).build();
}

MilpModel build_woca(const Instance& inst, const BuildOptions& opt) {
  if (inst.variant != Variant::WOCA) throw std::invalid_argument("build_woca needs a WOCA instance");
  return Builder(inst, opt).build();
}

MilpModel build_model(const Instance& inst, const BuildOptions& opt) {
  return inst.variant == Variant::WCA ? build_wca(inst, opt) : build_woca(inst, opt);
}

Assignment plan_to_assignment(const ResolvedPlan& rp, const Timeline& tl, const Instance& in, const BuildOptions& opt) {
  Assignment a;
  const bool wca = in.variant == Variant::WCA;
  if (wca) {
    const std::size_t nd = in.ecv_depots.size(), n = nd + in.ca_sites.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a["xC_" + ca_loc_name(in, i) + "_" + ca_loc_name(in, j)] = (i == j && i < nd) ? 1 : 0;
    for (std::size_t v = 0; v < rp.ca.size(); ++v) {
      std::size_t loc = in.ecv_depot[v];
      for (std::size_t k : rp.ca[v]) {
        a["xC_" + ca_loc_name(in, loc) + "_" + ca_loc_name(in, nd + k)] = 1;
        loc = nd + k;
      }
    }
    for (std::size_t d = 0; d < nd; ++d) {
      a["tCa_" + in.ecv_depots[d]] = in.t0;
      a["tCd_" + in.ecv_depots[d]] = in.t0;
    }
    for (std::size_t k = 0; k < in.ca_sites.size(); ++k) {
      a["tCa_" + in.ca_site_id(k)] = tl.tCa[k];
      a["tCd_" + in.ca_site_id(k)] = tl.tCd[k];
    }
  }
  const std::size_t ndr = in.crew_depots.size(), nr = ndr + in.ra_sites.size();
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nr; ++j) a["xR_" + ra_loc_name(in, i) + "_" + ra_loc_name(in, j)] = (i == j && i < ndr) ? 1 : 0;
  for (std::size_t c = 0; c < rp.ra.size(); ++c) {
    std::size_t loc = in.crew_depot[c];
    for (std::size_t k : rp.ra[c]) {
      a["xR_" + ra_loc_name(in, loc) + "_" + ra_loc_name(in, ndr + k)] = 1;
      loc = ndr + k;
    }
  }
  for (std::size_t d = 0; d < ndr; ++d) a["tR_" + in.crew_depots[d]] = in.t0;
  for (std::size_t k = 0; k < in.ra_sites.size(); ++k) a["tR_" + in.ra_sites[k].id] = tl.tR[k];

  std::vector<int> depth(in.n_cells(), 0);
  std::vector<int> parent(in.n_cells(), -1);
  for (const auto& op : rp.ops)
    if (op.used) parent[op.child] = static_cast<int>(op.parent);
  for (std::size_t c = 0; c < in.n_cells(); ++c) {
    int d = 0;
    for (int cur = static_cast<int>(c); parent[static_cast<std::size_t>(cur)] >= 0 && d <= static_cast<int>(in.n_cells());
         cur = parent[static_cast<std::size_t>(cur)])
      ++d;
    depth[c] = d;
  }
  for (std::size_t c = 0; c < in.n_cells(); ++c) {
    const std::string id = std::to_string(in.cell_id(c));
    a["fR_" + id] = tl.fR[c];
    a["tE_" + id] = tl.tE[c];
    a["lvl_" + id] = depth[c];
  }

  for (std::size_t s = 0; s < in.switches.size(); ++s) {
    const SwitchInfo& sw = in.switches[s];
    const SwitchOp& op = rp.ops[s];
    const double tr = sw.site ? tl.tR[*sw.site] : in.tmax;
    for (int d = 0; d < 2; ++d) {
      const std::size_t i = d == 0 ? sw.a : sw.b, j = d == 0 ? sw.b : sw.a;
      const std::string sfx = dir_suffix(in, i, j);
      const bool used = op.used && op.parent == i;
      const double ti = tl.tE[i];
      a["xE_" + sfx] = used ? 1 : 0;
      a["dMO_" + sfx] = used && !op.automatic ? 1 : 0;
      if (sw.site) {
        bool e, de;
        if (used && !op.automatic) {
          e = op.energized;
          de = !op.energized;
        } else {
          // Any value the unconditioned mode rows admit.
          e = tr >= ti;
          de = ti >= tr + sw.dwell();
        }
        a["dMOe_" + sfx] = e;
        a["dMOde_" + sfx] = de;
      }
      if (sw.remote) {
        const double y = std::max(ti, tl.fR[j]);
        double aop;
        bool e, de;
        if (used && op.automatic) {
          aop = tl.tAOop[s];
          e = op.energized;
          de = !op.energized;
        } else {
          aop = y;
          e = true;
          de = ti >= aop + sw.auto_op;
        }
        a["dAO_" + sfx] = used && op.automatic ? 1 : 0;
        a["dAOe_" + sfx] = e;
        a["dAOde_" + sfx] = de;
        a["tAOop_" + sfx] = aop;
        a["ymax_" + sfx] = y;
        const bool dE = ti >= tl.fR[j];
        a["dE_" + sfx] = dE;
        a["dR_" + sfx] = !dE;
      }
    }
    if (sw.remote && !sw.intact)
      for (std::size_t k : sw.gov_sites)
        a["z_" + sw.id + "_" + in.ca_site_id(k)] = (op.used && op.automatic && op.gov && *op.gov == k) ? 1 : 0;
  }
  if (opt.obj_ra_literal && in.n_crews() > 0 && !in.ra_sites.empty()) a["objconst"] = 1;
  return a;
}

namespace {

double get(const Assignment& a, const std::string& name) {
  auto it = a.find(name);
  return it == a.end() ? 0.0 : it->second;
}

/// Chains of legs leaving each depot, assigned to that depot's fleet in
/// input order. Returns per fleet member the list of site positions.
std::vector<std::vector<std::size_t>> decode_routes(const Assignment& a, const std::string& prefix,
                                                    std::size_t n_depots, std::size_t n_sites,
                                                    const std::vector<std::size_t>& member_depot,
                                                    const std::function<std::string(std::size_t)>& name) {
  std::vector<std::vector<std::size_t>> out(member_depot.size());
  auto leg = [&](std::size_t i, std::size_t j) { return get(a, prefix + name(i) + "_" + name(j)) > 0.5; };
  for (std::size_t d = 0; d < n_depots; ++d) {
    std::vector<std::size_t> members;
    for (std::size_t m = 0; m < member_depot.size(); ++m)
      if (member_depot[m] == d) members.push_back(m);
    std::size_t slot = 0;
    for (std::size_t k = 0; k < n_sites; ++k) {
      if (!leg(d, n_depots + k)) continue;
      std::vector<std::size_t> chain;
      std::set<std::size_t> seen;
      std::size_t cur = k;
      while (seen.insert(cur).second) {
        chain.push_back(cur);
        std::optional<std::size_t> next;
        for (std::size_t j = 0; j < n_sites; ++j)
          if (j != cur && leg(n_depots + cur, n_depots + j)) {
            next = j;
            break;
          }
        if (!next) break;
        cur = *next;
      }
      if (slot < members.size()) out[members[slot++]] = chain;
    }
  }
  return out;
}

}  // namespace

Plan solution_to_plan(const Assignment& a, const Instance& in) {
  Plan p;
  if (in.variant == Variant::WCA) {
    auto routes = decode_routes(a, "xC_", in.ecv_depots.size(), in.ca_sites.size(), in.ecv_depot,
                                [&](std::size_t l) { return ca_loc_name(in, l); });
    for (std::size_t v = 0; v < routes.size(); ++v) {
      CaRoute r{in.ecv_id(v), {}};
      for (std::size_t k : routes[v]) r.sites.push_back(in.ca_site_id(k));
      p.ca_routes.push_back(std::move(r));
    }
  }
  auto routes = decode_routes(a, "xR_", in.crew_depots.size(), in.ra_sites.size(), in.crew_depot,
                              [&](std::size_t l) { return ra_loc_name(in, l); });
  for (std::size_t c = 0; c < routes.size(); ++c) {
    RaRoute r{in.crew_id(c), {}};
    for (std::size_t k : routes[c]) r.sites.push_back(in.ra_sites[k].id);
    p.ra_routes.push_back(std::move(r));
  }
  std::vector<std::pair<int, std::string>> parents;
  for (const auto& sw : in.switches) {
    for (int d = 0; d < 2; ++d) {
      const std::size_t i = d == 0 ? sw.a : sw.b, j = d == 0 ? sw.b : sw.a;
      const std::string sfx = dir_suffix(in, i, j);
      std::string mode;
      if (sw.remote && get(a, "dAO_" + sfx) > 0.5) mode = get(a, "dAOe_" + sfx) > 0.5 ? "AE" : "AD";
      else if (get(a, "dMO_" + sfx) > 0.5) mode = get(a, "dMOe_" + sfx) > 0.5 ? "ME" : "MD";
      if (mode.empty()) continue;
      p.switch_decisions.push_back({sw.id, in.cell_id(i), in.cell_id(j), mode});
      parents.emplace_back(in.cell_id(j), sw.id);
      if (mode[0] == 'A')
        for (std::size_t k : sw.gov_sites)
          if (get(a, "z_" + sw.id + "_" + in.ca_site_id(k)) > 0.5) p.z_assignment.push_back({sw.id, in.ca_site_id(k)});
    }
  }
  std::sort(parents.begin(), parents.end());
  for (auto& [cell, sw] : parents) p.ea_parents.push_back({cell, sw});
  return p;
}

}  // namespace dsr
