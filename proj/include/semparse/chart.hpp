// -*- mode: c++ -*-
//
// The chart: term values, SetAntSets and run statistics.  Terms absent
// from the chart implicitly hold the semiring zero.

#ifndef SEMPARSE_CHART_HPP
#define SEMPARSE_CHART_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "semparse/semiring.hpp"
#include "semparse/term.hpp"

namespace semparse {

using AntSet = std::vector<Term>;  // ordered per inference-rule signature

struct RunStats {
  std::uint64_t candidates = 0;   // antecedent sets handed over by the strategy
  std::uint64_t inferences = 0;   // sets actually applied (not skipped, not pruned)
  std::uint64_t pruned = 0;       // sets discarded by a side-condition
  double seconds = 0.0;
  std::string termination;        // quiescent | goal | max-inferences | max-seconds | max-terms
  std::map<std::string, std::uint64_t> rule_firings;
  // applied consequents in order, with the antecedent-set product mass
  std::vector<std::pair<Term, double>> fire_log;
  bool keep_fire_log = false;
};

class Chart {
 public:
  explicit Chart(const Semiring& semiring) : semiring_(semiring) {}

  const Semiring& semiring() const { return semiring_; }

  bool has(const Term& t) const { return entries_.count(t) != 0; }
  // zero for absent terms
  Value value(const Term& t) const;
  double mass(const Term& t) const { return semiring_.mass(value(t)); }
  std::uint64_t version(const Term& t) const;
  const std::set<AntSet>* ant_sets(const Term& t) const;

  void init_axiom(const Term& t, double weight);
  bool is_axiom(const Term& t) const;

  // SetAntSet(y) u= {X}; recompute V(y).  Returns whether V(y) changed.
  bool add_ant_set(const Term& y, const AntSet& ants, bool incremental);
  // side-condition failure path: remove the set and recompute
  bool remove_ant_set(const Term& y, const AntSet& ants);

  // items in first-stored order
  const std::vector<Term>& forward_items() const { return forward_items_; }
  const std::vector<Term>& reverse_items() const { return reverse_items_; }
  const std::vector<Term>& terminal_axioms() const { return terminal_axioms_; }
  std::vector<Term> all_terms() const;
  size_t stored_terms() const { return entries_.size(); }
  size_t stored_nonterminal_items() const { return forward_items_.size() + reverse_items_.size(); }

  // best stored mass among forward items with the same
  // (dimension-activity, total covered width) signature
  double best_in_class(unsigned activity, int width) const;
  const std::vector<double>* class_masses(unsigned activity, int width) const;

  // V(y) = axiom value (+) sum over SetAntSet(y) of the product of
  // member values; holds for every stored term after each update
  bool consistent(double rel_tol = 1e-9) const;

  RunStats stats;

 private:
  struct Entry {
    Value value;
    bool axiom = false;
    Value axiom_value;
    std::set<AntSet> ant_sets;
    std::uint64_t version = 0;
  };
  Entry& materialize(const Term& t);
  Value recompute(const Term& t, const Entry& e) const;
  void note_new_item(const Term& t);
  void update_class_index(const Term& t, double old_mass, double new_mass, bool had_old);

  const Semiring& semiring_;
  std::unordered_map<Term, Entry, TermHash> entries_;
  std::vector<Term> forward_items_;
  std::vector<Term> reverse_items_;
  std::vector<Term> terminal_axioms_;
  std::map<std::pair<unsigned, int>, std::vector<double>> class_masses_;
};

}  // namespace semparse

#endif
