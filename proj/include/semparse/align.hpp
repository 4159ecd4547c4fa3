// -*- mode: c++ -*-
//
// Hierarchical alignment under the composite grammar evaluator, and
// word alignment with exact-once cover extraction.

#ifndef SEMPARSE_ALIGN_HPP
#define SEMPARSE_ALIGN_HPP

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "semparse/engine.hpp"
#include "semparse/multitree.hpp"

namespace semparse {

struct HierAlignOptions {
  int max_fan_out = 1;  // 0 = use the structured grammar's fan-out (min 1)
  Termination limits;
  std::string strategy = "bottomup";
};

struct HierAlignResult {
  bool ok = false;
  double probability = 0.0;
  MultitreePtr tree;
  RunStats stats;
};

// Best multitree over all input dimensions: structured dimensions are
// scored by the D-dimensional grammar, unstructured ones by the word
// translation model, with output order uniform up to the fan-out bound.
HierAlignResult hier_align(std::shared_ptr<const Gmtg> structured, const WordLexicon& lexicon,
                           const Multitext& input, const HierAlignOptions& options = {});

struct AlignCorpusResult {
  std::vector<MultitreePtr> treebank;
  std::vector<std::string> skipped;  // per-tuple failure notes
};

AlignCorpusResult align_corpus(std::shared_ptr<const Gmtg> structured, const WordLexicon& lexicon,
                               const Corpus& corpus, const HierAlignOptions& options = {});

// A trivial one-dimensional structured grammar over the dummy label,
// used when no monolingual grammar is available.
std::shared_ptr<Gmtg> flat_structured_grammar(const Corpus& corpus);

// One word-alignment link: positions are 1-based, 0 = NULL.
struct AlignLink {
  int pos1 = 0;
  int pos2 = 0;
  double score = 0.0;
  bool null_link() const { return pos1 == 0 || pos2 == 0; }
};

struct WordAlignment {
  std::vector<AlignLink> links;  // sorted by (pos1, pos2); includes NULL links
  double score = 1.0;            // product over non-null chosen link values
  bool exact = false;            // exact search used (otherwise greedy)
};

// Parse the tuple with the word-alignment logic and extract a cover:
// every word position in every dimension covered exactly once, chosen
// to maximize the product of link values.  Exact search up to
// `exact_limit` positions per dimension, greedy competitive linking
// beyond that.  Uncovered words come back as NULL links.
WordAlignment word_align(const WordLexicon& lexicon, const Multitext& tuple, int exact_limit = 8);

std::string format_links(const WordAlignment& alignment);

}  // namespace semparse

#endif
