// -*- mode: c++ -*-
//
// Translation scoring by multiparsing (reference, hypothesis) pairs
// under a two-dimensional monolingual grammar.

#ifndef SEMPARSE_EVALUATE_HPP
#define SEMPARSE_EVALUATE_HPP

#include <string>
#include <vector>

#include "semparse/engine.hpp"
#include "semparse/grammar.hpp"
#include "semparse/multitext.hpp"

namespace semparse {

// Inside value of the goal item over the bitext (reference, hypothesis);
// zero when no multitree covers the pair.
double score_pair(const Gmtg& paraphrase_grammar, const std::vector<std::string>& reference,
                  const std::vector<std::string>& hypothesis, const Termination& limits = {});

struct PairScore {
  int id = 0;
  double score = 0.0;
  bool parsed = false;
};

struct CorpusScore {
  std::vector<PairScore> pairs;
  double geometric_mean = 0.0;  // over parsed pairs, floored at 1e-300
  int unparsed = 0;
};

CorpusScore score_corpus(const Gmtg& paraphrase_grammar,
                         const std::vector<std::pair<std::vector<std::string>,
                                                     std::vector<std::string>>>& pairs,
                         const Termination& limits = {});

}  // namespace semparse

#endif
