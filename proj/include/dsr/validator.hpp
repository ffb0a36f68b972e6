#pragma once

#include <string>
#include <vector>

#include "dsr/plan.hpp"
#include "dsr/problem.hpp"
#include "dsr/simulator.hpp"

namespace dsr {

struct Violation {
  std::string tag;  // constraint family, e.g. "9", "37", "E26", "p2"
  std::string message;
};

struct Verdict {
  bool pass = true;
  std::vector<Violation> violations;
  std::vector<std::string> tags() const;  // sorted, unique
};

/// Re-checks every constraint family against a plan and a timeline, deriving
/// route tables, visits and sub-modes from the raw plan. Never throws; the
/// verdict lists every violation found. A leg whose reverse leg is also
/// present is reported once under "4" and left out of the other checks.
Verdict validate(const Plan& plan, const Timeline& timeline, const Instance& inst, double tol = 1e-6);

}  // namespace dsr
