#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "support.hpp"

namespace dsr::test {

/// Edits a feasible plan/timeline pair in place; returns false when the
/// base has nothing to mutate for this family.
struct Mutator {
  std::string family;
  std::string what;
  std::function<bool(Plan&, Timeline&, const Instance&)> apply;
};

struct MutationHit {
  bool found = false;
  std::string base;
  std::string what;
  std::vector<std::string> tags;  // everything the verdict reported
};

/// Families the suite must cover.
const std::vector<std::string>& mutation_families();
const std::vector<Mutator>& mutators();

/// Feasible bases: enumerator optima of the tiny fixtures in both variants
/// plus heuristic plans, including the two-ECV mutation fixture.
std::vector<Base> mutation_bases();

/// For each family, the first (base, mutator) whose verdict carries the tag.
std::map<std::string, MutationHit> run_mutation_suite(const std::vector<Base>& bases);

}  // namespace dsr::test
