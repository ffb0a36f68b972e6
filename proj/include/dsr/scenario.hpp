#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace dsr {

// All times are minutes, stored as doubles without implicit rounding.

struct Node {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  double load_kw = 0.0;
  std::optional<double> weight;  // cell weight contribution; unset -> cell default 1
  bool operator==(const Node&) const = default;
};

enum class SwitchKind { Automatic, Manual };
enum class FtuSide { From, To };

struct Ftu {
  FtuSide side = FtuSide::From;
  double x = 0.0;
  double y = 0.0;
  double residual_minutes = 240.0;  // backup battery depletion time RT
  bool damaged = false;
  bool operator==(const Ftu&) const = default;
};

struct SwitchSpec {
  SwitchKind kind = SwitchKind::Manual;
  std::optional<Ftu> ftu;
  double manual_op_minutes = 15.0;
  double auto_op_minutes = 1.0;
  bool intact_remote = false;  // switch and FTU both intact with a live base station
  bool operator==(const SwitchSpec&) const = default;
};

struct Line {
  std::string id;
  std::string from;
  std::string to;
  std::optional<SwitchSpec> sw;
  bool faulted = false;
  double repair_minutes = 120.0;
  bool operator==(const Line&) const = default;
};

struct Source {
  std::string node;
  double available_at = 0.0;
  bool operator==(const Source&) const = default;
};

struct GridGraph {
  std::vector<Node> nodes;
  std::vector<Line> lines;
  std::vector<Source> sources;
  bool operator==(const GridGraph&) const = default;
};

struct Depot {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  int capacity = 0;
  bool operator==(const Depot&) const = default;
};

struct Ecv {
  std::string id;
  std::string depot;
  double radius = 0.0;
  bool operator==(const Ecv&) const = default;
};

struct Crew {
  std::string id;
  std::string depot;
  bool operator==(const Crew&) const = default;
};

struct EcvWorkSite {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  double min_stay_minutes = 15.0;
  bool intact_base_station = false;
  bool operator==(const EcvWorkSite&) const = default;
};

/// Square travel-time table over a named location list.
struct TravelMatrix {
  std::vector<std::string> locations;
  std::vector<std::vector<double>> minutes;

  double at(std::size_t i, std::size_t j) const { return minutes[i][j]; }
  std::optional<std::size_t> index_of(const std::string& id) const;
  bool operator==(const TravelMatrix&) const = default;
};

enum class TravelMode { EuclideanScaled, Explicit };

struct TravelModel {
  TravelMode mode = TravelMode::EuclideanScaled;
  double scale_minutes_per_unit = 1.0;
  double resolution_minutes = 0.0;  // 0 = no rounding
  TravelMatrix crew;                // depots of crews + repair worksites
  TravelMatrix ecv;                 // depots of ECVs + ECV worksites
  bool operator==(const TravelModel&) const = default;
};

struct TimeDefaults {
  double repair_minutes = 120.0;
  double manual_op_minutes = 15.0;
  double auto_op_minutes = 1.0;
  double residual_minutes = 240.0;
  double min_stay_minutes = 15.0;
  double horizon_minutes = 720.0;
  bool operator==(const TimeDefaults&) const = default;
};

struct WeightSet {
  double beta_ea = 10.0;
  double beta_ra = 1.0;
  double beta_ca = 1.0;
  double omega_ra1 = 1.0;
  double omega_ra2 = 1.0;
  double omega_ca1 = 1.0;
  double omega_ca2 = 1.0;
  bool operator==(const WeightSet&) const = default;
};

struct Scenario {
  std::string name;
  double horizon_minutes = 720.0;
  double start_time = 0.0;
  GridGraph grid;
  std::vector<Depot> crew_depots;
  std::vector<Depot> ecv_depots;
  std::vector<Ecv> ecvs;
  std::vector<Crew> crews;
  std::vector<EcvWorkSite> ecv_sites;
  TravelModel travel;
  TimeDefaults defaults;
  WeightSet weights;
  bool operator==(const Scenario&) const = default;

  std::optional<std::size_t> node_index(const std::string& id) const;
  std::optional<std::size_t> line_index(const std::string& id) const;
};

/// Raised for any malformed scenario. `field` is a JSON path such as
/// `lines[3].switch.ftu`; `what()` carries the full diagnostic.
class ScenarioError : public std::runtime_error {
 public:
  enum class Kind { Schema, Invariant, DanglingReference };
  ScenarioError(Kind kind, std::string field, const std::string& message);
  Kind kind() const { return kind_; }
  const std::string& field() const { return field_; }

 private:
  Kind kind_;
  std::string field_;
};

Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const nlohmann::json& doc);
Scenario parse_scenario_text(const std::string& text);

/// Checks every invariant; throws ScenarioError on the first failure.
void validate_scenario(const Scenario& scenario);

nlohmann::json scenario_to_json(const Scenario& scenario);

/// Stable 64-bit FNV-1a hash of the canonical serialization.
std::uint64_t scenario_hash(const Scenario& scenario);

/// Locations a crew may travel between: crew depots, then repair worksites
/// (switch lines and faulted lines) in input order, with their coordinates.
struct Location {
  std::string id;
  double x = 0.0;
  double y = 0.0;
};
std::vector<Location> crew_locations(const Scenario& scenario);
std::vector<Location> ecv_locations(const Scenario& scenario);

/// Explicit travel model. Euclidean mode computes
/// `scale * hypot(dx, dy)` (optionally rounded); explicit mode is checked and
/// returned unchanged.
TravelModel derive_travel(const Scenario& scenario);

/// Euclidean travel matrix over arbitrary points; exposed for tests.
TravelMatrix euclidean_matrix(const std::vector<Location>& points, double scale,
                              double resolution = 0.0);

}  // namespace dsr
