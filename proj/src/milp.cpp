#include "dsr/milp.hpp"

#include <cmath>
#include <stdexcept>

namespace dsr {

std::size_t MilpModel::add_var(const std::string& name, VarKind kind, double lb, double ub, const std::string& role) {
  if (name.empty() || name.size() > 255) throw std::invalid_argument("bad variable name '" + name + "'");
  if (index_.count(name)) throw std::invalid_argument("duplicate variable '" + name + "'");
  std::size_t i = vars_.size();
  vars_.push_back({name, kind, lb, ub});
  objective_.push_back(0.0);
  index_[name] = i;
  registry_[name] = role.empty() ? name.substr(0, name.find('_')) : role;
  return i;
}

void MilpModel::add_row(const std::string& name, std::vector<std::pair<std::size_t, double>> terms, Sense sense,
                        double rhs) {
  for (const auto& [v, c] : terms)
    if (v >= vars_.size()) throw std::invalid_argument("row '" + name + "' references an undeclared variable");
  rows_.push_back({name, std::move(terms), sense, rhs});
}

void MilpModel::add_objective(std::size_t var, double coef) { objective_.at(var) += coef; }

std::optional<std::size_t> MilpModel::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t MilpModel::at(const std::string& name) const {
  auto i = find(name);
  if (!i) throw std::out_of_range("no variable '" + name + "'");
  return *i;
}

std::size_t MilpModel::count_prefix(const std::string& prefix) const {
  std::size_t n = 0;
  for (const auto& v : vars_)
    if (v.name.rfind(prefix, 0) == 0) ++n;
  return n;
}

namespace {
double value_of(const Assignment& a, const std::string& name) {
  auto it = a.find(name);
  return it == a.end() ? 0.0 : it->second;
}
}  // namespace

double MilpModel::evaluate(const Assignment& a) const {
  double z = 0.0;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (objective_[i] != 0.0) z += objective_[i] * value_of(a, vars_[i].name);
  return z;
}

std::vector<std::string> MilpModel::check(const Assignment& a, double tol) const {
  std::vector<std::string> bad;
  std::vector<double> x(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const MilpVar& v = vars_[i];
    x[i] = value_of(a, v.name);
    if (x[i] < v.lb - tol || x[i] > v.ub + tol) bad.push_back("bound:" + v.name);
    if (v.kind == VarKind::Binary && std::fabs(x[i] - std::round(x[i])) > tol) bad.push_back("int:" + v.name);
  }
  for (const auto& r : rows_) {
    double lhs = 0.0;
    for (const auto& [v, c] : r.terms) lhs += c * x[v];
    // Rows carrying big-M coefficients are checked relative to their scale.
    double scale = 1.0;
    for (const auto& [v, c] : r.terms) scale = std::max(scale, std::fabs(c));
    const double t = tol * scale;
    bool ok = r.sense == Sense::LE ? lhs <= r.rhs + t : r.sense == Sense::GE ? lhs >= r.rhs - t : std::fabs(lhs - r.rhs) <= t;
    if (!ok) bad.push_back(r.name);
  }
  return bad;
}

MaxVars linearize_max(MilpModel& m, std::size_t t, std::size_t f, double bound, const std::string& suffix,
                      double lower) {
  MaxVars mv;
  mv.y = m.add_var("ymax_" + suffix, VarKind::Continuous, lower, bound, "ymax");
  mv.dE = m.add_binary("dE_" + suffix, "dE");
  mv.dR = m.add_binary("dR_" + suffix, "dR");
  m.add_row("A1_" + suffix, {{mv.y, 1.0}, {t, -1.0}}, Sense::GE, 0.0);
  m.add_row("A2_" + suffix, {{mv.y, 1.0}, {f, -1.0}}, Sense::GE, 0.0);
  m.add_row("A3_" + suffix, {{mv.y, 1.0}, {t, -1.0}, {mv.dE, bound}}, Sense::LE, bound);
  m.add_row("A4_" + suffix, {{mv.y, 1.0}, {f, -1.0}, {mv.dR, bound}}, Sense::LE, bound);
  m.add_row("A5_" + suffix, {{mv.dE, 1.0}, {mv.dR, 1.0}}, Sense::EQ, 1.0);
  return mv;
}

}  // namespace dsr
