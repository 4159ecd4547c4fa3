// Shared test grammars.

#ifndef SEMPARSE_TESTS_FIXTURES_HPP
#define SEMPARSE_TESTS_FIXTURES_HPP

#include <sstream>
#include <string>

#include "semparse/grammar.hpp"
#include "semparse/multitext.hpp"

namespace semparse::fixtures {

// Two-dimensional grammar deriving "Pasudu moy" / "Wash the dishes",
// with a competing translation for the verb.
inline std::string wash_grammar_text(double wash = 0.7, double clean = 0.3) {
  std::ostringstream os;
  os << "gmtg D=2 start=S,S\n"
     << "P S,S -> [[1,2]|[2,1]] (NP,NP)(V,V) @ 1\n"
     << "P NP,NP -> [[1]|[2,1]] (N,N)(_,D) @ 1\n"
     << "P V,V -> [[1]|[2]] (MIT,_)(_,WASH) @ 1\n"
     << "P N,N -> [[1]|[2]] (PAS,_)(_,DISH) @ 1\n"
     << "T d=2 WASH -> Wash @ " << wash << "\n"
     << "T d=2 WASH -> clean @ " << clean << "\n"
     << "T d=2 D -> the @ 1\n"
     << "T d=2 DISH -> dishes @ 1\n"
     << "T d=1 PAS -> Pasudu @ 1\n"
     << "T d=1 MIT -> moy @ 1\n";
  return os.str();
}

inline Gmtg wash_grammar(double wash = 0.7, double clean = 0.3) {
  std::istringstream is(wash_grammar_text(wash, clean));
  return Gmtg::load(is);
}

inline Multitext pasudu_moy() {
  Multitext input;
  input.dims = {{"Pasudu", "moy"}};
  return input;
}

// One-dimensional counting grammar: S -> S S | a.
inline Gmtg catalan_grammar() {
  Gmtg g(1, {Label("S")});
  g.add(Production::nonterminating({Label("S")}, Pav::parse("[[1,2]]"), {Label("S")}, {Label("S")},
                                   1.0));
  g.add(Production::terminating(1, 0, Label("S"), "a", 1.0));
  return g;
}

// Bilexical one-dimensional grammar over one delexicalized symbol, all
// heads equally likely to govern all others; head-child second.
inline Gmtg bilexical_chain(const std::vector<std::string>& heads) {
  Gmtg g(1, {Label("X")});
  for (const auto& h : heads) g.add(Production::terminating(1, 0, Label("X", h), h, 1.0));
  const double w = 1.0 / (2.0 * heads.size());
  for (const auto& h : heads) {
    for (const auto& c : heads) {
      Label parent("X", h);
      Label head("X", h);
      head.head_child = true;
      Label child("X", c);
      g.add(Production::nonterminating({parent}, Pav::parse("[[1,2]]"), {child}, {head}, w));
      g.add(Production::nonterminating({parent}, Pav::parse("[[2,1]]"), {child}, {head}, w));
    }
  }
  g.set_normalized(true);
  return g;
}

// Stored terms with their antecedent sets and printed values: two runs
// realized the same inferences iff their fingerprints match.
inline std::string chart_fingerprint(const Chart& chart) {
  std::string out;
  for (const auto& term : chart.all_terms()) {
    out += term.sig();
    out += " = " + chart.semiring().str(chart.value(term));
    const auto* sets = chart.ant_sets(term);
    if (sets) {
      for (const auto& ants : *sets) {
        out += " <-";
        for (const auto& a : ants) out += " " + a.sig();
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace semparse::fixtures

#endif
