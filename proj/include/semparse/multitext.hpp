// -*- mode: c++ -*-

#ifndef SEMPARSE_MULTITEXT_HPP
#define SEMPARSE_MULTITEXT_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace semparse {

// A tuple of mutually translated token sequences, one per dimension,
// with optional per-token weights (all 1 when absent).
struct Multitext {
  std::vector<std::vector<std::string>> dims;
  std::vector<std::vector<double>> weights;

  Multitext() = default;
  explicit Multitext(std::vector<std::vector<std::string>> d) : dims(std::move(d)) {}

  int dimensionality() const { return static_cast<int>(dims.size()); }
  int length(int d) const { return static_cast<int>(dims[d].size()); }
  // weight of word `pos` (1-based) in dimension d
  double token_weight(int d, int pos) const;
  std::string line(int d) const;  // tokens joined by spaces
};

using Corpus = std::vector<Multitext>;

// Block format: tuples separated by blank lines; inside a block one
// line per dimension, "d<k>: tok tok ...", optionally "w<k>: 1 0.5 ..."
// for weighted input.  Dimension numbers must be 1..m in order.
Corpus read_corpus(std::istream& in);
Corpus read_corpus_file(const std::string& path);
void write_corpus(std::ostream& out, const Corpus& corpus);
void write_corpus_file(const std::string& path, const Corpus& corpus);

Multitext parse_multitext_block(const std::vector<std::string>& lines);

}  // namespace semparse

#endif
