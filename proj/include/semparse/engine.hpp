// -*- mode: c++ -*-
//
// The abstract parsing algorithm: initialize axioms, then repeatedly
// take an antecedent set from the search strategy, instantiate every
// consequent, test side-conditions, and update SetAntSets and values,
// until the termination condition is satisfied.

#ifndef SEMPARSE_ENGINE_HPP
#define SEMPARSE_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "semparse/chart.hpp"
#include "semparse/logic.hpp"

namespace semparse {

// Boolean test over (candidate, its antecedent-set product mass, chart).
using SideCondition = std::function<bool(const Candidate&, double, const Chart&)>;

// Keep a candidate iff its product mass reaches theta times the best
// stored mass among forward items with the same (dimension-activity,
// total-width) signature.
SideCondition prune_beam_threshold(double theta);
// Keep a candidate iff its product mass ranks within the top W of its
// signature class.
SideCondition prune_beam_width(int width);

struct Termination {
  std::vector<Term> goal_terms;   // conjunctive; empty = quiescence only
  std::uint64_t max_inferences = 0;
  double max_seconds = 0.0;
  std::uint64_t max_terms = 0;
};

struct EngineConfig {
  Semiring semiring = Semiring::boolean();
  std::string strategy = "bottomup";  // bottomup | ucs
  Termination termination;
  std::vector<SideCondition> side_conditions;
  bool incremental = false;      // idempotent semirings only
  bool log_firings = false;
  bool check_consistency = false;  // assert the chart value identity each iteration
};

Chart parse(const Logic& logic, const GrammarEvaluator& grammar, const Multitext& input,
            const EngineConfig& config);

// Tie-break key for value-ordered search: consequent labels in
// lexicographic order with the inactive placeholder after every symbol.
std::string ucs_tie_key(const Term& t);

}  // namespace semparse

#endif
