// -*- mode: c++ -*-
//
// Multitrees: synchronous parse trees over multitexts, their
// serialization, extraction from derivations, linearization, and
// relative-frequency grammar induction from a multitreebank.

#ifndef SEMPARSE_MULTITREE_HPP
#define SEMPARSE_MULTITREE_HPP

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "semparse/grammar.hpp"
#include "semparse/semiring.hpp"

namespace semparse {

struct Multitree;
using MultitreePtr = std::unique_ptr<Multitree>;

// Shapes: leaf (token in one dimension, no labels), preterminal (label
// link over one leaf), internal (label link, PAV including the output
// arrays chosen at compose time, two children).
struct Multitree {
  std::vector<Label> labels;
  Pav pav;
  std::vector<MultitreePtr> children;
  int dim = -1;       // leaf payload
  std::string token;  // leaf payload

  bool is_leaf() const { return labels.empty(); }
  bool is_preterminal() const { return !labels.empty() && children.size() == 1 && children[0]->is_leaf(); }

  MultitreePtr clone() const;
  std::string str() const;  // "(S,S|[[1,2]|[2,1]] (_,D (2:the)) ...)"
  static MultitreePtr parse(const std::string& text);

  // postorder splice: token segments of one dimension, one list per
  // contiguous run of this node
  std::vector<std::vector<std::string>> segments(int dim) const;
};

struct LinearizeError : std::runtime_error {
  explicit LinearizeError(const std::string& what) : std::runtime_error(what) {}
};

// Assemble the yield of one dimension.  The root must come out as a
// single contiguous segment.
std::vector<std::string> linearize(const Multitree& tree, int dim);

// Rebuild the multitree recorded by a derivation-bearing semiring value.
MultitreePtr tree_from_derivation(const DerivPtr& root);
MultitreePtr tree_from_value(const Semiring& semiring, const Value& value);

// One s-expression per line.
std::vector<MultitreePtr> read_treebank(std::istream& in);
std::vector<MultitreePtr> read_treebank_file(const std::string& path);
void write_treebank(std::ostream& out, const std::vector<MultitreePtr>& trees);
void write_treebank_file(const std::string& path, const std::vector<MultitreePtr>& trees);

// Relative frequencies of the productions used in a multitreebank.
// Trees with non-GCNF arity are rejected and reported.
Gmtg estimate_from_multitreebank(const std::vector<MultitreePtr>& trees, int dims,
                                 const std::vector<Label>& start,
                                 std::vector<std::string>* rejected = nullptr);

}  // namespace semparse

#endif
