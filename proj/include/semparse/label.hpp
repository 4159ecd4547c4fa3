// -*- mode: c++ -*-

#ifndef SEMPARSE_LABEL_HPP
#define SEMPARSE_LABEL_HPP

#include <compare>
#include <string>
#include <vector>

namespace semparse {

// A nonterminal label in one dimension of a link.  An empty symbol is
// the inactive placeholder.  Bilexical labels carry the lexical head
// (L[t]); an RHS label may additionally be flagged as the head-child.
struct Label {
  std::string symbol;
  std::string head;
  bool head_child = false;

  Label() = default;
  Label(std::string s) : symbol(std::move(s)) {}
  Label(std::string s, std::string h) : symbol(std::move(s)), head(std::move(h)) {}

  bool inactive() const { return symbol.empty(); }
  Label stripped() const { return Label(symbol, head); }

  std::string str() const;                      // "_", "NP", "NP[dog]", "NP*[dog]"
  static Label parse(const std::string& text);  // inverse of str()
  auto operator<=>(const Label&) const = default;
};

std::string labels_str(const std::vector<Label>& labels);  // "NP,NP" / "_,D"
std::vector<Label> parse_labels(const std::string& text);
std::vector<Label> strip_labels(const std::vector<Label>& labels);
bool all_inactive(const std::vector<Label>& labels);

// Dummy nonterminal used for unstructured dimensions.
inline const std::string kLambda = "\xce\xbb";  // UTF-8 lambda

}  // namespace semparse

#endif
