#include "dsr/mps.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dsr {

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

void check_name(const std::string& name) {
  for (char c : name)
    if (std::isspace(static_cast<unsigned char>(c))) throw std::invalid_argument("MPS name contains whitespace: '" + name + "'");
}

char sense_code(Sense s) { return s == Sense::LE ? 'L' : s == Sense::GE ? 'G' : 'E'; }

}  // namespace

std::string write_mps(const MilpModel& m) {
  std::ostringstream out;
  out << "NAME " << m.name << "\n";
  out << "ROWS\n N  OBJ\n";
  std::set<std::string> row_names{"OBJ"};
  for (const auto& r : m.rows()) {
    check_name(r.name);
    if (!row_names.insert(r.name).second) throw std::invalid_argument("duplicate row name '" + r.name + "'");
    out << " " << sense_code(r.sense) << "  " << r.name << "\n";
  }
  const auto& vars = m.vars();
  std::vector<std::vector<std::pair<std::size_t, double>>> cols(vars.size());
  for (std::size_t r = 0; r < m.rows().size(); ++r)
    for (const auto& [v, c] : m.rows()[r].terms)
      if (c != 0.0) cols[v].push_back({r, c});
  out << "COLUMNS\n";
  for (std::size_t v = 0; v < vars.size(); ++v) {
    check_name(vars[v].name);
    const double obj = m.objective()[v];
    // Every column appears at least once, so empty columns keep an OBJ entry.
    if (obj != 0.0 || cols[v].empty()) out << "    " << vars[v].name << "  OBJ  " << format_number(obj) << "\n";
    // Repeated (row, column) pairs are merged.
    std::map<std::size_t, double> merged;
    for (const auto& [r, c] : cols[v]) merged[r] += c;
    for (const auto& [r, c] : merged) out << "    " << vars[v].name << "  " << m.rows()[r].name << "  " << format_number(c) << "\n";
  }
  out << "RHS\n";
  for (const auto& r : m.rows())
    if (r.rhs != 0.0) out << "    RHS  " << r.name << "  " << format_number(r.rhs) << "\n";
  out << "BOUNDS\n";
  for (const auto& v : vars) {
    if (v.kind == VarKind::Binary) {
      // Readers treat BV as a complete bound; a binary fixed by the model is
      // written as an integer column with explicit LI/UI bounds instead.
      if (v.lb == 0.0 && v.ub == 1.0) {
        out << " BV BND  " << v.name << "\n";
      } else {
        if (v.lb != 0.0) out << " LI BND  " << v.name << "  " << format_number(v.lb) << "\n";
        out << " UI BND  " << v.name << "  " << format_number(v.ub) << "\n";
      }
      continue;
    }
    if (v.lb == v.ub) {
      out << " FX BND  " << v.name << "  " << format_number(v.lb) << "\n";
      continue;
    }
    if (std::isinf(v.lb)) out << " MI BND  " << v.name << "\n";
    else if (v.lb != 0.0) out << " LO BND  " << v.name << "  " << format_number(v.lb) << "\n";
    if (std::isinf(v.ub)) out << " PL BND  " << v.name << "\n";
    else out << " UP BND  " << v.name << "  " << format_number(v.ub) << "\n";
  }
  out << "ENDATA\n";
  return out.str();
}

MilpModel read_mps(const std::string& text) {
  MilpModel m;
  std::istringstream in(text);
  std::string line, section;
  std::string obj_row;
  std::vector<std::string> row_order;
  std::map<std::string, Sense> senses;
  std::map<std::string, std::vector<std::pair<std::string, double>>> row_terms;
  std::map<std::string, double> rhs, ranges;
  std::vector<std::string> col_order;
  struct Col {
    bool integer = false, binary = false;
    double lb = 0.0, ub = std::numeric_limits<double>::infinity();
    bool ub_set = false;
    double obj = 0.0;
  };
  std::map<std::string, Col> cols;
  bool in_int = false;
  auto num = [](const std::string& s) {
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      // Accept forms from_chars rejects, such as a leading '+'.
      return std::stod(s);
    }
    return v;
  };
  auto touch_col = [&](const std::string& name) -> Col& {
    if (!cols.count(name)) col_order.push_back(name);
    return cols[name];
  };
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      section = tok[0];
      if (section == "NAME") m.name = tok.size() > 1 ? tok[1] : "";
      if (section == "ENDATA") break;
      continue;
    }
    auto fail = [&](const std::string& why) {
      throw std::runtime_error("MPS line " + std::to_string(lineno) + ": " + why);
    };
    if (section == "ROWS") {
      if (tok.size() != 2) fail("expected '<sense> <row>'");
      if (tok[0] == "N") {
        if (obj_row.empty()) obj_row = tok[1];
        continue;
      }
      Sense s = tok[0] == "L" ? Sense::LE : tok[0] == "G" ? Sense::GE : tok[0] == "E" ? Sense::EQ : (fail("bad row sense"), Sense::LE);
      senses[tok[1]] = s;
      row_order.push_back(tok[1]);
    } else if (section == "COLUMNS") {
      if (tok.size() >= 3 && tok[1] == "'MARKER'") {
        in_int = tok[2] == "'INTORG'";
        continue;
      }
      if (tok.size() != 3 && tok.size() != 5) fail("expected column entries");
      Col& c = touch_col(tok[0]);
      if (in_int) c.integer = true;
      for (std::size_t i = 1; i + 1 < tok.size(); i += 2) {
        double v = num(tok[i + 1]);
        if (tok[i] == obj_row) c.obj += v;
        else if (senses.count(tok[i])) row_terms[tok[i]].push_back({tok[0], v});
        else fail("unknown row '" + tok[i] + "'");
      }
    } else if (section == "RHS" || section == "RANGES") {
      auto& target = section == "RHS" ? rhs : ranges;
      std::size_t start = tok.size() % 2 == 1 ? 1 : 0;
      for (std::size_t i = start; i + 1 < tok.size(); i += 2) {
        if (tok[i] == obj_row) continue;
        target[tok[i]] = num(tok[i + 1]);
      }
    } else if (section == "BOUNDS") {
      if (tok.size() < 3) fail("bad bound");
      Col& c = touch_col(tok[2]);
      const std::string& t = tok[0];
      double v = tok.size() > 3 ? num(tok[3]) : 0.0;
      if (t == "BV") {
        c.binary = true;
        c.lb = 0;
        c.ub = 1;
        c.ub_set = true;
      } else if (t == "LO") c.lb = v;
      else if (t == "UP") {
        c.ub = v;
        c.ub_set = true;
      } else if (t == "FX") {
        c.lb = c.ub = v;
        c.ub_set = true;
      } else if (t == "MI") c.lb = -std::numeric_limits<double>::infinity();
      else if (t == "PL") c.ub = std::numeric_limits<double>::infinity();
      else if (t == "LI") {
        c.integer = true;
        c.lb = v;
      } else if (t == "UI") {
        c.integer = true;
        c.ub = v;
        c.ub_set = true;
      } else fail("unsupported bound type " + t);
    }
  }
  for (const auto& name : col_order) {
    const Col& c = cols[name];
    const bool binary = c.binary || (c.integer && c.lb >= 0 && c.ub_set && c.ub <= 1);
    double ub = c.ub;
    if (c.integer && !c.ub_set) ub = std::numeric_limits<double>::infinity();
    std::size_t v = m.add_var(name, binary ? VarKind::Binary : VarKind::Continuous, c.lb, ub);
    if (c.obj != 0.0) m.add_objective(v, c.obj);
  }
  for (const auto& r : row_order) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (const auto& [col, v] : row_terms[r]) terms.push_back({m.at(col), v});
    const double b = rhs.count(r) ? rhs[r] : 0.0;
    if (!ranges.count(r)) {
      m.add_row(r, terms, senses[r], b);
      continue;
    }
    const double R = ranges[r];
    double lo, hi;
    if (senses[r] == Sense::LE) lo = b - std::fabs(R), hi = b;
    else if (senses[r] == Sense::GE) lo = b, hi = b + std::fabs(R);
    else lo = R < 0 ? b + R : b, hi = R < 0 ? b : b + R;
    m.add_row(r + "_lo", terms, Sense::GE, lo);
    m.add_row(r + "_hi", terms, Sense::LE, hi);
  }
  return m;
}

}  // namespace dsr
