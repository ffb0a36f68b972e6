#pragma once

#include <string>
#include <vector>

#include "dsr/scenario.hpp"
#include "dsr/topology.hpp"

namespace dsr {

/// u[v][k][c]: ECV v parked at ECV site k reaches FTU c. FTUs are indexed in
/// the order of their switch lines; sites and ECVs in input order.
struct CoverageMap {
  std::vector<std::string> ecvs;
  std::vector<std::string> sites;
  std::vector<std::string> ftus;  // switch line ids carrying an FTU
  std::vector<unsigned char> table;

  bool covered(std::size_t v, std::size_t k, std::size_t c) const {
    return table[(v * sites.size() + k) * ftus.size() + c] != 0;
  }
  std::vector<std::size_t> sites_covering(std::size_t ecv, std::size_t ftu) const;
  /// Sites that cover the FTU whichever ECV parks there.
  std::vector<std::size_t> sites_covering_all(std::size_t ftu) const;
  std::vector<std::size_t> ftus_at(std::size_t ecv, std::size_t site) const;
  std::optional<std::size_t> ftu_index(const std::string& switch_id) const;
  std::optional<std::size_t> site_index(const std::string& site_id) const;
  bool operator==(const CoverageMap&) const = default;
};

/// Points used by the coverage test, exposed for the benchmark and tests.
struct CoverageInput {
  std::vector<double> radius;               // per ECV
  std::vector<double> site_x, site_y;       // per site
  std::vector<double> ftu_x, ftu_y;         // per FTU
};

CoverageInput coverage_input(const Scenario& scenario);

/// OpenMP-parallel over the flattened (v, k, c) index space.
std::vector<unsigned char> coverage_table(const CoverageInput& in);
/// Plain triple loop; kept as the reference for tests and the benchmark.
std::vector<unsigned char> coverage_table_serial(const CoverageInput& in);

CoverageMap compute_coverage(const Scenario& scenario, const CellGraph& cells);
CoverageMap compute_coverage_serial(const Scenario& scenario, const CellGraph& cells);

/// CSV `ecv,site,ftu,covered`, one row per triple.
std::string coverage_csv(const CoverageMap& map);

}  // namespace dsr
