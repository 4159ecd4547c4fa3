// -*- mode: c++ -*-

#ifndef SEMPARSE_TRANSLATE_HPP
#define SEMPARSE_TRANSLATE_HPP

#include <string>
#include <vector>

#include "semparse/engine.hpp"
#include "semparse/multitree.hpp"

namespace semparse {

struct TranslateOptions {
  Semiring semiring = Semiring::viterbi_deriv();
  std::string strategy = "ucs";
  bool load_compose_macro = false;
  int nbest = 1;
  Termination limits;  // goal term is supplied by the driver
  bool log_firings = false;
};

struct TranslationCandidate {
  double probability = 0.0;
  MultitreePtr tree;
  // token sequences for every dimension; input dimensions echo the input
  std::vector<std::vector<std::string>> yields;
};

struct TranslationResult {
  bool ok = false;  // goal reached with a non-zero value
  double probability = 0.0;
  Value goal_value;
  MultitreePtr tree;
  std::vector<std::vector<std::string>> yields;
  std::vector<TranslationCandidate> alternatives;  // n-best order
  RunStats stats;
};

// Infer the most probable multitree covering the input multitext, then
// assemble the output strings from the stored output arrays.
TranslationResult translate(const GrammarEvaluator& grammar, const Multitext& input,
                            const TranslateOptions& options = {});

// Multiparse goal value: the item spanning the whole input labeled with
// the grammar's start link.
Term goal_item(const GrammarEvaluator& grammar, const Multitext& input, int input_dims);

}  // namespace semparse

#endif
