// -*- mode: c++ -*-
//
// Parsing logics: term and inference-rule signatures plus axiom
// generation.  A logic is a stateless rule table over a fixed
// (grammar, input) pair; candidate generation is pure.

#ifndef SEMPARSE_LOGIC_HPP
#define SEMPARSE_LOGIC_HPP

#include <memory>
#include <string>
#include <vector>

#include "semparse/chart.hpp"
#include "semparse/grammar.hpp"
#include "semparse/multitext.hpp"
#include "semparse/term.hpp"

namespace semparse {

struct ConfigurationError : std::runtime_error {
  explicit ConfigurationError(const std::string& what) : std::runtime_error(what) {}
};

// A fully instantiated inference: rule name, ordered antecedents and
// the consequent.  Grammar terms among the antecedents are materialized
// lazily; their axiom weights ride along.
struct Candidate {
  std::string rule;
  AntSet antecedents;
  Term consequent;
  std::vector<std::pair<Term, double>> lazy_axioms;

  std::string key() const;
};

class Logic {
 public:
  virtual ~Logic() = default;
  virtual std::string name() const = 0;
  // number of dimensions whose items carry d-spans
  virtual int input_dims() const = 0;

  virtual void check_input(const GrammarEvaluator& g, const Multitext& input) const;

  // axiom terms and their weights: input words valued T(w), grammar
  // terms valued G(p) when the grammar is enumerable, other axioms 1
  virtual std::vector<std::pair<Term, double>> axioms(const GrammarEvaluator& g,
                                                      const Multitext& input) const;
  // inferences with no item antecedents (Load)
  virtual std::vector<Candidate> seed(const GrammarEvaluator& g, const Multitext& input) const;
  // inferences gained by unifying `trigger` with the rule signatures,
  // pairing it against the current chart
  virtual std::vector<Candidate> triggered(const Term& trigger, const Chart& chart,
                                           const GrammarEvaluator& g) const = 0;
};

// flag: d1c | c | ct | ct-macro | cr | wa
std::unique_ptr<Logic> make_logic(const std::string& flag, const GrammarEvaluator& g,
                                  const Multitext& input);

struct CrOptions {
  // emit reverse terminal items only for the words actually in the input
  bool requested_terminals_only = true;
  bool reverse_terminals = true;
};

std::unique_ptr<Logic> make_logic_d1c();
std::unique_ptr<Logic> make_logic_c(int dims);
std::unique_ptr<Logic> make_logic_ct(int input_dims, int grammar_dims, bool load_compose_macro);
std::unique_ptr<Logic> make_logic_cr(int dims, const Multitext& input, CrOptions options = {});
std::unique_ptr<Logic> make_logic_wa(int dims);

}  // namespace semparse

#endif
