#include "dsr/coverage.hpp"

#include <cmath>
#include <sstream>

namespace dsr {

namespace {

inline bool reaches(double r, double sx, double sy, double fx, double fy) {
  // Boundary counts as covered: step(r - d) with step(0) = 1.
  return r - std::hypot(fx - sx, fy - sy) >= 0.0;
}

CoverageMap skeleton(const Scenario& s) {
  CoverageMap m;
  for (const auto& v : s.ecvs) m.ecvs.push_back(v.id);
  for (const auto& k : s.ecv_sites) m.sites.push_back(k.id);
  for (const auto& l : s.grid.lines)
    if (l.sw && l.sw->ftu) m.ftus.push_back(l.id);
  return m;
}

}  // namespace

std::vector<std::size_t> CoverageMap::sites_covering(std::size_t ecv, std::size_t ftu) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < sites.size(); ++k)
    if (covered(ecv, k, ftu)) out.push_back(k);
  return out;
}

std::vector<std::size_t> CoverageMap::sites_covering_all(std::size_t ftu) const {
  std::vector<std::size_t> out;
  if (ecvs.empty()) return out;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    bool all = true;
    for (std::size_t v = 0; v < ecvs.size() && all; ++v) all = covered(v, k, ftu);
    if (all) out.push_back(k);
  }
  return out;
}

std::vector<std::size_t> CoverageMap::ftus_at(std::size_t ecv, std::size_t site) const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < ftus.size(); ++c)
    if (covered(ecv, site, c)) out.push_back(c);
  return out;
}

std::optional<std::size_t> CoverageMap::ftu_index(const std::string& id) const {
  for (std::size_t c = 0; c < ftus.size(); ++c)
    if (ftus[c] == id) return c;
  return std::nullopt;
}

std::optional<std::size_t> CoverageMap::site_index(const std::string& id) const {
  for (std::size_t k = 0; k < sites.size(); ++k)
    if (sites[k] == id) return k;
  return std::nullopt;
}

CoverageInput coverage_input(const Scenario& s) {
  CoverageInput in;
  for (const auto& v : s.ecvs) in.radius.push_back(v.radius);
  for (const auto& k : s.ecv_sites) {
    in.site_x.push_back(k.x);
    in.site_y.push_back(k.y);
  }
  for (const auto& l : s.grid.lines)
    if (l.sw && l.sw->ftu) {
      in.ftu_x.push_back(l.sw->ftu->x);
      in.ftu_y.push_back(l.sw->ftu->y);
    }
  return in;
}

std::vector<unsigned char> coverage_table(const CoverageInput& in) {
  const std::size_t nv = in.radius.size(), nk = in.site_x.size(), nc = in.ftu_x.size();
  const long long total = static_cast<long long>(nv * nk * nc);
  std::vector<unsigned char> t(static_cast<std::size_t>(total), 0);
#pragma omp parallel for schedule(static)
  for (long long idx = 0; idx < total; ++idx) {
    std::size_t c = static_cast<std::size_t>(idx) % nc;
    std::size_t k = (static_cast<std::size_t>(idx) / nc) % nk;
    std::size_t v = static_cast<std::size_t>(idx) / (nc * nk);
    t[static_cast<std::size_t>(idx)] = reaches(in.radius[v], in.site_x[k], in.site_y[k], in.ftu_x[c], in.ftu_y[c]);
  }
  return t;
}

std::vector<unsigned char> coverage_table_serial(const CoverageInput& in) {
  const std::size_t nv = in.radius.size(), nk = in.site_x.size(), nc = in.ftu_x.size();
  std::vector<unsigned char> t(nv * nk * nc, 0);
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t k = 0; k < nk; ++k)
      for (std::size_t c = 0; c < nc; ++c)
        t[(v * nk + k) * nc + c] = reaches(in.radius[v], in.site_x[k], in.site_y[k], in.ftu_x[c], in.ftu_y[c]);
  return t;
}

CoverageMap compute_coverage(const Scenario& s, const CellGraph&) {
  CoverageMap m = skeleton(s);
  m.table = coverage_table(coverage_input(s));
  return m;
}

CoverageMap compute_coverage_serial(const Scenario& s, const CellGraph&) {
  CoverageMap m = skeleton(s);
  m.table = coverage_table_serial(coverage_input(s));
  return m;
}

std::string coverage_csv(const CoverageMap& m) {
  std::ostringstream out;
  out << "ecv,site,ftu,covered\n";
  for (std::size_t v = 0; v < m.ecvs.size(); ++v)
    for (std::size_t k = 0; k < m.sites.size(); ++k)
      for (std::size_t c = 0; c < m.ftus.size(); ++c)
        out << m.ecvs[v] << ',' << m.sites[k] << ',' << m.ftus[c] << ',' << (m.covered(v, k, c) ? 1 : 0) << '\n';
  return out.str();
}

}  // namespace dsr
