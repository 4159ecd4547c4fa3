// -*- mode: c++ -*-
//
// GMTG storage and validation, the grammar-evaluator contract, the
// composite alignment evaluator, and the translation-lexicon grammar.

#ifndef SEMPARSE_GRAMMAR_HPP
#define SEMPARSE_GRAMMAR_HPP

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "semparse/production.hpp"
#include "semparse/term.hpp"

namespace semparse {

struct GrammarParseError : std::runtime_error {
  explicit GrammarParseError(const std::string& what) : std::runtime_error(what) {}
};

// Query interface producing weights for grammar terms.  Implementations
// are read-only after construction.
class GrammarEvaluator {
 public:
  virtual ~GrammarEvaluator() = default;

  virtual int dims() const = 0;
  virtual int fan_out() const = 0;
  virtual std::vector<Label> start() const = 0;

  // finite stored production set that can be enumerated up front
  virtual bool enumerable() const { return false; }
  virtual const std::vector<ProductionPtr>& all_productions() const;

  // terminating productions whose active dimension is d, rewriting to `token`
  virtual std::vector<WeightedProduction> terminating(int d, const std::string& token) const = 0;
  // every terminating production active in dimension d
  virtual std::vector<WeightedProduction> terminating_in_dim(int d) const = 0;
  // nonterminating productions with RHS links (y, z) whose PAV starts
  // with `input_arrays`; arrays beyond input_arrays.size() are free
  virtual std::vector<WeightedProduction> nonterminating(
      const std::vector<Label>& y, const std::vector<Label>& z,
      const std::vector<PrecedenceArray>& input_arrays) const = 0;

  // reverse-direction lookups (round-trip logics); unsupported by default
  virtual std::vector<WeightedProduction> nonterminating_by_lhs_y(const std::vector<Label>& lhs,
                                                                  const std::vector<Label>& y,
                                                                  const Pav& pav) const;
  virtual std::vector<WeightedProduction> nonterminating_by_lhs_z(const std::vector<Label>& lhs,
                                                                  const std::vector<Label>& z,
                                                                  const Pav& pav) const;

  // degenerate start-link productions (word alignment); none by default
  virtual std::vector<WeightedProduction> lexical(int d, const std::string& token) const;

  // point lookups over the enumerations above
  double lookup_terminating(int d, const Label& x, const std::string& token) const;
  double lookup_nonterminating(const std::vector<Label>& lhs, const Pav& pav,
                               const std::vector<Label>& y, const std::vector<Label>& z) const;
};

// A stored GMTG in GCNF.  Productions are normalized on entry (PAV
// normal form, which may swap the two RHS links); duplicates merge by
// weight addition.
class Gmtg : public GrammarEvaluator {
 public:
  Gmtg() = default;
  Gmtg(int dims, std::vector<Label> start);

  void add(const Production& p);
  void set_normalized(bool flag) { normalized_ = flag; }
  bool normalized() const { return normalized_; }

  int dims() const override { return dims_; }
  int fan_out() const override;
  std::vector<Label> start() const override { return start_; }
  bool enumerable() const override { return true; }
  const std::vector<ProductionPtr>& all_productions() const override { return view_; }

  std::vector<WeightedProduction> terminating(int d, const std::string& token) const override;
  std::vector<WeightedProduction> terminating_in_dim(int d) const override;
  std::vector<WeightedProduction> nonterminating(
      const std::vector<Label>& y, const std::vector<Label>& z,
      const std::vector<PrecedenceArray>& input_arrays) const override;
  std::vector<WeightedProduction> nonterminating_by_lhs_y(const std::vector<Label>& lhs,
                                                          const std::vector<Label>& y,
                                                          const Pav& pav) const override;
  std::vector<WeightedProduction> nonterminating_by_lhs_z(const std::vector<Label>& lhs,
                                                          const std::vector<Label>& z,
                                                          const Pav& pav) const override;

  // per-LHS-link weight sums; max |sum - 1| over links
  double normalization_error() const;
  // renormalize weights per LHS link, optionally after adding eps to each
  void normalize_weights(double add_eps = 0.0);
  // replace a production's weight (by key); throws if absent
  void set_weight(const std::string& key, double w);

  std::vector<std::string> nonterminal_symbols() const;
  std::vector<std::string> terminals_in_dim(int d) const;

  static Gmtg load(std::istream& in);
  static Gmtg load_file(const std::string& path);
  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;

 private:
  void validate(const Production& p) const;
  int dims_ = 0;
  std::vector<Label> start_;
  bool normalized_ = false;
  std::vector<std::shared_ptr<Production>> productions_;  // mutable weights
  std::vector<ProductionPtr> view_;                       // same objects, const
  std::unordered_map<std::string, size_t> by_key_;
  std::map<std::pair<int, std::string>, std::vector<size_t>> term_by_dim_token_;
  std::map<int, std::vector<size_t>> term_by_dim_;
  std::unordered_map<std::string, std::vector<size_t>> nt_by_rhs_;      // y|z labels
  std::unordered_map<std::string, std::vector<size_t>> nt_by_lhs_y_;    // lhs|y labels
  std::unordered_map<std::string, std::vector<size_t>> nt_by_lhs_z_;    // lhs|z labels
};

// Conditional word translation table Pr(target or NULL | source or
// NULL).  The empty string stands for NULL on either side.
class WordLexicon {
 public:
  void set(const std::string& source, const std::string& target, double p);
  void add(const std::string& source, const std::string& target, double p);
  double prob(const std::string& source, const std::string& target) const;
  const std::map<std::string, std::map<std::string, double>>& table() const { return table_; }
  bool empty() const { return table_.empty(); }

  void normalize();
  double normalization_error() const;

  static WordLexicon load(std::istream& in);
  static WordLexicon load_file(const std::string& path);
  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;

 private:
  std::map<std::string, std::map<std::string, double>> table_;
};

// Number of distinct two-link precedence arrays in which each link
// contributes between 1 and f contiguous segments and the array itself
// has fan-out at most f.  Exhaustive enumeration, memoized.
long long mu(int f);
std::vector<PrecedenceArray> enumerate_two_link_arrays(int f);
// Single-link arrays of fan-out at most f ([2], [2;2], ...): exactly f.
long long mu_single(int f);

// Composite evaluator for hierarchical alignment: a D-dimensional
// structured grammar plus a word translation model stand in for an
// I-dimensional grammar.  Unstructured dimensions use the dummy label.
class AlignmentEvaluator : public GrammarEvaluator {
 public:
  AlignmentEvaluator(std::shared_ptr<const Gmtg> structured, WordLexicon lexicon, int total_dims,
                     int max_fan_out);

  int dims() const override { return total_dims_; }
  int fan_out() const override { return max_fan_out_; }
  std::vector<Label> start() const override;

  std::vector<WeightedProduction> terminating(int d, const std::string& token) const override;
  std::vector<WeightedProduction> terminating_in_dim(int d) const override;
  std::vector<WeightedProduction> nonterminating(
      const std::vector<Label>& y, const std::vector<Label>& z,
      const std::vector<PrecedenceArray>& input_arrays) const override;

  int structured_dims() const { return structured_dims_; }

 private:
  std::shared_ptr<const Gmtg> structured_;
  WordLexicon lexicon_;
  int total_dims_;
  int structured_dims_;
  int max_fan_out_;
};

// Degenerate grammar over a translation lexicon: every production
// rewrites the start link into one terminal per active dimension.
class LexiconGrammar : public GrammarEvaluator {
 public:
  LexiconGrammar(const WordLexicon& lexicon, int dims);

  int dims() const override { return dims_; }
  int fan_out() const override { return 1; }
  std::vector<Label> start() const override;
  bool enumerable() const override { return true; }
  const std::vector<ProductionPtr>& all_productions() const override { return productions_; }

  std::vector<WeightedProduction> terminating(int, const std::string&) const override { return {}; }
  std::vector<WeightedProduction> terminating_in_dim(int) const override { return {}; }
  std::vector<WeightedProduction> nonterminating(const std::vector<Label>&,
                                                 const std::vector<Label>&,
                                                 const std::vector<PrecedenceArray>&) const override {
    return {};
  }
  std::vector<WeightedProduction> lexical(int d, const std::string& token) const override;

 private:
  int dims_;
  std::vector<ProductionPtr> productions_;
  std::map<std::pair<int, std::string>, std::vector<size_t>> by_dim_token_;
};

}  // namespace semparse

#endif
