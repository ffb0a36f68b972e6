#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dsr {

enum class VarKind { Binary, Continuous };
enum class Sense { LE, EQ, GE };

struct MilpVar {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lb = 0.0;
  double ub = 0.0;
};

struct MilpRow {
  std::string name;
  std::vector<std::pair<std::size_t, double>> terms;  // (variable index, coefficient)
  Sense sense = Sense::LE;
  double rhs = 0.0;
};

using Assignment = std::map<std::string, double>;

/// Solver-agnostic MILP: minimize objective subject to rows and bounds.
class MilpModel {
 public:
  std::string name = "dsr";

  std::size_t add_var(const std::string& name, VarKind kind, double lb, double ub, const std::string& role = "");
  std::size_t add_binary(const std::string& name, const std::string& role = "") {
    return add_var(name, VarKind::Binary, 0.0, 1.0, role);
  }
  void add_row(const std::string& name, std::vector<std::pair<std::size_t, double>> terms, Sense sense, double rhs);
  void add_objective(std::size_t var, double coef);

  const std::vector<MilpVar>& vars() const { return vars_; }
  std::vector<MilpVar>& vars() { return vars_; }
  const std::vector<MilpRow>& rows() const { return rows_; }
  const std::vector<double>& objective() const { return objective_; }
  /// Semantic role (e.g. "xC", "tE", "ymax") per variable name.
  const std::map<std::string, std::string>& registry() const { return registry_; }

  std::optional<std::size_t> find(const std::string& name) const;
  std::size_t at(const std::string& name) const;
  std::size_t count_prefix(const std::string& prefix) const;

  /// Objective value of an assignment; missing variables count as zero.
  double evaluate(const Assignment& a) const;

  /// Names of violated rows, bounds ("bound:<var>") and integrality
  /// ("int:<var>") under an absolute tolerance.
  std::vector<std::string> check(const Assignment& a, double tol = 1e-6) const;

 private:
  std::vector<MilpVar> vars_;
  std::vector<MilpRow> rows_;
  std::vector<double> objective_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, std::string> registry_;
};

/// y = max(t, f) for t, f in [0, bound]: adds y, dE, dR and the five rows
/// y >= t, y >= f, y <= t + bound(1 - dE), y <= f + bound(1 - dR),
/// dE + dR = 1. Returns the index of y.
struct MaxVars {
  std::size_t y, dE, dR;
};
MaxVars linearize_max(MilpModel& m, std::size_t t, std::size_t f, double bound, const std::string& suffix,
                      double lower = 0.0);

}  // namespace dsr
