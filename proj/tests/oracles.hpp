// Test-only oracles, independent of the chart engine: brute-force
// derivation enumeration (forward and outside values), a plain CKY
// recognizer, a classical one-dimensional inside-outside trainer, and
// random grammar/input generators.

#ifndef SEMPARSE_TESTS_ORACLES_HPP
#define SEMPARSE_TESTS_ORACLES_HPP

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "semparse/grammar.hpp"
#include "semparse/multitext.hpp"
#include "semparse/multitree.hpp"

namespace semparse::oracles {

struct OracleDeriv {
  ProductionPtr production;
  std::vector<Label> labels;  // item at this node
  std::vector<DSpan> spans;
  std::vector<std::shared_ptr<const OracleDeriv>> children;
  double probability = 0.0;  // product of production weights in the subtree
};
using OracleDerivPtr = std::shared_ptr<const OracleDeriv>;

// Enumerates every derivation of [labels; spans] over the input, by
// direct top-down recursion over the stored productions.
class Enumerator {
 public:
  Enumerator(const Gmtg& grammar, const Multitext& input);

  const std::vector<OracleDerivPtr>& derivations(const std::vector<Label>& labels,
                                                 const std::vector<DSpan>& spans);
  const std::vector<OracleDerivPtr>& goal_derivations();

  long long count(const std::vector<Label>& labels, const std::vector<DSpan>& spans);
  double inside(const std::vector<Label>& labels, const std::vector<DSpan>& spans);
  double viterbi(const std::vector<Label>& labels, const std::vector<DSpan>& spans);

  // outside value of an item: sum (or count) over goal derivations and
  // occurrences of the item, of the weight product outside its subtree
  double outside_sum(const std::vector<Label>& labels, const std::vector<DSpan>& spans);
  long long outside_count(const std::vector<Label>& labels, const std::vector<DSpan>& spans);

  // posterior production counts, normalized by the goal probability
  std::map<std::string, double> expected_counts();

 private:
  void prepare_outside();
  void outside_walk(const OracleDerivPtr& node, double outside_weight);
  std::string item_key(const std::vector<Label>& labels, const std::vector<DSpan>& spans) const;

  const Gmtg& grammar_;
  const Multitext& input_;
  std::map<std::string, std::vector<OracleDerivPtr>> memo_;
  bool outside_ready_ = false;
  std::map<std::string, double> outside_sums_;
  std::map<std::string, long long> outside_counts_;
};

// Plain boolean CKY over a one-dimensional grammar in Chomsky normal form.
bool cky_accepts(const Gmtg& grammar, const std::vector<std::string>& words);

// One classical inside-outside iteration for a one-dimensional PCFG in
// CNF; counts are posterior expectations pooled across sentences and
// normalized per LHS symbol.
Gmtg classic_inside_outside_step(const Gmtg& grammar,
                                 const std::vector<std::vector<std::string>>& sentences);

// --- random instances -------------------------------------------------------

struct GrammarSpec {
  int dims = 2;
  int nonterminals = 3;    // at most
  int max_fan_out = 2;     // bound on total PAV fan-out
  int vocabulary = 3;      // terminal types per dimension
  int nonterminating = 6;  // productions to attempt
  bool normalized = true;
};

Gmtg random_pgmtg(const GrammarSpec& spec, std::mt19937* rng);

// Sample a multitree from the grammar; null when expansion exceeds the
// depth or length bounds.  The yields give a guaranteed-parseable input.
MultitreePtr sample_tree(const Gmtg& grammar, std::mt19937* rng, int max_depth = 8,
                         int max_len = 4);
Multitext yields_of(const Multitree& tree, int dims);

}  // namespace semparse::oracles

#endif
