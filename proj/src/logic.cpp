#include "semparse/logic.hpp"

#include <algorithm>

namespace semparse {

namespace {

std::vector<DSpan> empty_spans(int n) { return std::vector<DSpan>(n); }

// spans for a one-word item: () everywhere except (i-1, i) in dimension d
std::vector<DSpan> scan_spans(int dims, int d, int pos) {
  std::vector<DSpan> spans(dims);
  spans[d] = DSpan::single(pos - 1, pos);
  return spans;
}

bool try_relativize_vec(const std::vector<DSpan>& a, const std::vector<DSpan>& b,
                        std::vector<PrecedenceArray>* out) {
  out->assign(a.size(), PrecedenceArray());
  for (size_t d = 0; d < a.size(); ++d)
    if (!try_relativize(a[d], b[d], &(*out)[d])) return false;
  return true;
}

bool try_subtract_vec(const std::vector<DSpan>& nu, const std::vector<DSpan>& tau,
                      std::vector<DSpan>* out) {
  out->assign(nu.size(), DSpan());
  for (size_t d = 0; d < nu.size(); ++d)
    if (!try_subtract(nu[d], tau[d], &(*out)[d])) return false;
  return true;
}

std::vector<DSpan> concat_vec(const std::vector<DSpan>& a, const std::vector<DSpan>& b) {
  std::vector<DSpan> out(a.size());
  for (size_t d = 0; d < a.size(); ++d) out[d] = concat(a[d], b[d]);
  return out;
}

bool all_empty(const std::vector<DSpan>& spans) {
  for (const auto& s : spans)
    if (!s.is_empty()) return false;
  return true;
}

Candidate make_scan(const Term& word, const WeightedProduction& wp, int item_dims) {
  Term prod_term = Term::grammar(wp.prod);
  Term cons = Term::item(strip_labels(wp.prod->lhs),
                         scan_spans(item_dims, word.dim(), word.pos()));
  return {"Scan", {word, prod_term}, cons, {{prod_term, wp.weight}}};
}

void compose_pair(const Term& first, const Term& second, const GrammarEvaluator& g,
                  int input_dims, std::vector<Candidate>* out) {
  std::vector<PrecedenceArray> arrays;
  if (!try_relativize_vec(first.spans(), second.spans(), &arrays)) return;
  for (const auto& wp : g.nonterminating(first.labels(), second.labels(), arrays)) {
    Term prod_term = Term::grammar(wp.prod);
    Term cons = Term::item(strip_labels(wp.prod->lhs), concat_vec(first.spans(), second.spans()));
    out->push_back({"Compose", {first, second, prod_term}, cons, {{prod_term, wp.weight}}});
  }
  (void)input_dims;
}

// --- Logic D1C: CFG in CNF over a single dimension -------------------------

class LogicD1C : public Logic {
 public:
  std::string name() const override { return "d1c"; }
  int input_dims() const override { return 1; }

  void check_input(const GrammarEvaluator& g, const Multitext& input) const override {
    if (g.dims() != 1)
      throw ConfigurationError("logic d1c needs a one-dimensional grammar");
    if (input.dimensionality() != 1)
      throw ConfigurationError("logic d1c needs one-dimensional input");
  }

  std::vector<Candidate> triggered(const Term& trigger, const Chart& chart,
                                   const GrammarEvaluator& g) const override {
    std::vector<Candidate> out;
    if (trigger.kind() == TermKind::Terminal && !trigger.reverse()) {
      for (const auto& wp : g.terminating(trigger.dim(), trigger.token()))
        out.push_back(make_scan(trigger, wp, 1));
      return out;
    }
    if (!trigger.is_forward_item()) return out;
    for (const auto& other : chart.forward_items()) {
      compose_pair(trigger, other, g, 1, &out);
      if (other != trigger) compose_pair(other, trigger, g, 1, &out);
    }
    return out;
  }
};

// --- Logic C: multiparsing under a GMTG in GCNF -----------------------------

class LogicC : public Logic {
 public:
  explicit LogicC(int dims) : dims_(dims) {}
  std::string name() const override { return "c"; }
  int input_dims() const override { return dims_; }

  void check_input(const GrammarEvaluator& g, const Multitext& input) const override {
    if (g.dims() != dims_ || input.dimensionality() != dims_)
      throw ConfigurationError("logic c needs input and grammar of the same dimensionality");
  }

  std::vector<Candidate> triggered(const Term& trigger, const Chart& chart,
                                   const GrammarEvaluator& g) const override {
    std::vector<Candidate> out;
    if (trigger.kind() == TermKind::Terminal && !trigger.reverse()) {
      for (const auto& wp : g.terminating(trigger.dim(), trigger.token()))
        out.push_back(make_scan(trigger, wp, dims_));
      return out;
    }
    if (!trigger.is_forward_item()) return out;
    for (const auto& other : chart.forward_items()) {
      compose_pair(trigger, other, g, dims_, &out);
      if (other != trigger) compose_pair(other, trigger, g, dims_, &out);
    }
    return out;
  }

 protected:
  int dims_;
};

// --- Logic CT: translation; output dimensions carry no d-spans --------------

class LogicCT : public Logic {
 public:
  LogicCT(int input_dims, int grammar_dims, bool macro)
      : in_(input_dims), dims_(grammar_dims), macro_(macro) {}
  std::string name() const override { return macro_ ? "ct-macro" : "ct"; }
  int input_dims() const override { return in_; }

  void check_input(const GrammarEvaluator& g, const Multitext& input) const override {
    if (input.dimensionality() != in_)
      throw ConfigurationError("translator input dimensionality mismatch");
    if (g.dims() != dims_ || in_ > dims_)
      throw ConfigurationError("translator needs input dims <= grammar dims");
  }

  std::vector<Candidate> seed(const GrammarEvaluator& g, const Multitext&) const override {
    std::vector<Candidate> out;
    if (macro_) return out;
    // Load: terminating productions in the output dimensions enter the
    // chart with no d-span information
    for (int d = in_; d < dims_; ++d) {
      for (const auto& wp : g.terminating_in_dim(d)) {
        Term prod_term = Term::grammar(wp.prod);
        Term cons = Term::item(strip_labels(wp.prod->lhs), empty_spans(in_));
        out.push_back({"Load", {prod_term}, cons, {{prod_term, wp.weight}}});
      }
    }
    return out;
  }

  std::vector<Candidate> triggered(const Term& trigger, const Chart& chart,
                                   const GrammarEvaluator& g) const override {
    std::vector<Candidate> out;
    if (trigger.kind() == TermKind::Terminal && !trigger.reverse()) {
      if (trigger.dim() < in_)
        for (const auto& wp : g.terminating(trigger.dim(), trigger.token()))
          out.push_back(make_scan(trigger, wp, in_));
      return out;
    }
    if (!trigger.is_forward_item()) return out;
    for (const auto& other : chart.forward_items()) {
      compose_pair(trigger, other, g, in_, &out);
      if (other != trigger) compose_pair(other, trigger, g, in_, &out);
    }
    if (macro_) load_compose(trigger, g, &out);
    return out;
  }

 private:
  // Load and Compose fused: fires once per (input item, target terminal
  // production) pair that some nonterminating production links
  void load_compose(const Term& item, const GrammarEvaluator& g, std::vector<Candidate>* out) const {
    std::vector<PrecedenceArray> as_first, as_second;
    std::vector<DSpan> empty = empty_spans(in_);
    try_relativize_vec(item.spans(), empty, &as_first);
    try_relativize_vec(empty, item.spans(), &as_second);
    for (int d = in_; d < dims_; ++d) {
      for (const auto& tp : g.terminating_in_dim(d)) {
        std::vector<Label> loaded = strip_labels(tp.prod->lhs);
        Term loaded_term = Term::grammar(tp.prod);
        for (const auto& wp : g.nonterminating(item.labels(), loaded, as_first)) {
          Term prod_term = Term::grammar(wp.prod);
          Term cons = Term::item(strip_labels(wp.prod->lhs), item.spans());
          out->push_back({"LoadCompose",
                          {loaded_term, item, prod_term},
                          cons,
                          {{loaded_term, tp.weight}, {prod_term, wp.weight}}});
        }
        for (const auto& wp : g.nonterminating(loaded, item.labels(), as_second)) {
          Term prod_term = Term::grammar(wp.prod);
          Term cons = Term::item(strip_labels(wp.prod->lhs), item.spans());
          out->push_back({"LoadCompose",
                          {loaded_term, item, prod_term},
                          cons,
                          {{loaded_term, tp.weight}, {prod_term, wp.weight}}});
        }
      }
    }
  }

  int in_;
  int dims_;
  bool macro_;
};

// --- Logic CR: forward plus reverse values ----------------------------------

class LogicCR : public LogicC {
 public:
  LogicCR(int dims, const Multitext& input, CrOptions options)
      : LogicC(dims), input_(input), options_(options) {}
  std::string name() const override { return "cr"; }

  std::vector<std::pair<Term, double>> axioms(const GrammarEvaluator& g,
                                              const Multitext& input) const override {
    auto out = LogicC::axioms(g, input);
    // the pivot: reverse value of the start-labeled item spanning the
    // whole input; always the multiplicative identity
    std::vector<DSpan> full(dims_);
    for (int d = 0; d < dims_; ++d) full[d] = DSpan::single(0, input.length(d));
    out.emplace_back(Term::item(strip_labels(g.start()), full, true), 1.0);
    return out;
  }

  std::vector<Candidate> triggered(const Term& trigger, const Chart& chart,
                                   const GrammarEvaluator& g) const override {
    std::vector<Candidate> out = LogicC::triggered(trigger, chart, g);
    if (trigger.is_forward_item()) {
      for (const auto& rev : chart.reverse_items()) reverse_compose(trigger, rev, g, &out);
    } else if (trigger.is_item() && trigger.reverse()) {
      for (const auto& fwd : chart.forward_items()) reverse_compose(fwd, trigger, g, &out);
      reverse_scan(trigger, g, &out);
    }
    return out;
  }

 private:
  void reverse_compose(const Term& fwd, const Term& rev, const GrammarEvaluator& g,
                       std::vector<Candidate>* out) const {
    std::vector<DSpan> rest;
    if (!try_subtract_vec(rev.spans(), fwd.spans(), &rest)) return;
    if (all_empty(rest)) return;
    std::vector<PrecedenceArray> arrays;
    // the forward antecedent as the first RHS link: consequent is the second
    if (try_relativize_vec(fwd.spans(), rest, &arrays)) {
      for (const auto& wp : g.nonterminating_by_lhs_y(rev.labels(), fwd.labels(),
                                                      Pav(arrays))) {
        Term prod_term = Term::grammar(wp.prod);
        Term cons = Term::item(strip_labels(wp.prod->z), rest, true);
        out->push_back({"Reverse Compose Right",
                        {fwd, rev, prod_term},
                        cons,
                        {{prod_term, wp.weight}}});
      }
    }
    // the forward antecedent as the second RHS link: consequent is the first
    if (try_relativize_vec(rest, fwd.spans(), &arrays)) {
      for (const auto& wp : g.nonterminating_by_lhs_z(rev.labels(), fwd.labels(),
                                                      Pav(arrays))) {
        Term prod_term = Term::grammar(wp.prod);
        Term cons = Term::item(strip_labels(wp.prod->y), rest, true);
        out->push_back({"Reverse Compose Left",
                        {fwd, rev, prod_term},
                        cons,
                        {{prod_term, wp.weight}}});
      }
    }
  }

  void reverse_scan(const Term& rev, const GrammarEvaluator& g,
                    std::vector<Candidate>* out) const {
    if (!options_.reverse_terminals) return;
    // preterminal shape: exactly one active dimension with a width-1 span
    int active = -1;
    for (int d = 0; d < dims_; ++d) {
      if (rev.labels()[d].inactive()) continue;
      if (active >= 0) return;
      active = d;
    }
    if (active < 0) return;
    const DSpan& s = rev.spans()[active];
    if (s.fan_out() != 1 || s.width() != 1) return;
    int pos = s.intervals()[0].end;
    for (const auto& wp : g.terminating_in_dim(active)) {
      if (wp.prod->lhs[active].stripped() != rev.labels()[active]) continue;
      if (options_.requested_terminals_only &&
          (pos > input_.length(active) || wp.prod->terminal != input_.dims[active][pos - 1]))
        continue;
      Term prod_term = Term::grammar(wp.prod);
      Term cons = Term::terminal(active, pos, wp.prod->terminal, true);
      out->push_back({"Reverse Scan", {rev, prod_term}, cons, {{prod_term, wp.weight}}});
    }
  }

  Multitext input_;
  CrOptions options_;
};

// --- Logic WA: word alignment under a degenerate lexicon grammar ------------

class LogicWA : public Logic {
 public:
  explicit LogicWA(int dims) : dims_(dims) {}
  std::string name() const override { return "wa"; }
  int input_dims() const override { return dims_; }

  void check_input(const GrammarEvaluator& g, const Multitext& input) const override {
    if (g.dims() != dims_ || input.dimensionality() != dims_)
      throw ConfigurationError("word alignment needs input and grammar of equal dimensionality");
  }

  std::vector<Candidate> triggered(const Term& trigger, const Chart& chart,
                                   const GrammarEvaluator& g) const override {
    std::vector<Candidate> out;
    if (trigger.kind() != TermKind::Terminal || trigger.reverse()) return out;
    for (const auto& wp : g.lexical(trigger.dim(), trigger.token())) {
      // one terminal item per active dimension; the trigger fills its own
      std::vector<std::vector<Term>> per_dim(dims_);
      bool feasible = true;
      for (int d = 0; d < dims_ && feasible; ++d) {
        if (wp.prod->terminals[d].empty()) continue;
        if (d == trigger.dim()) {
          per_dim[d] = {trigger};
          continue;
        }
        for (const auto& word : chart.terminal_axioms())
          if (word.dim() == d && word.token() == wp.prod->terminals[d])
            per_dim[d].push_back(word);
        feasible = !per_dim[d].empty();
      }
      if (!feasible) continue;
      std::vector<Term> chosen;
      cross_product(wp, per_dim, 0, &chosen, &out);
    }
    return out;
  }

 private:
  void cross_product(const WeightedProduction& wp, const std::vector<std::vector<Term>>& per_dim,
                     int d, std::vector<Term>* chosen, std::vector<Candidate>* out) const {
    if (d == dims_) {
      Term prod_term = Term::grammar(wp.prod);
      std::vector<DSpan> spans(dims_);
      for (const auto& word : *chosen) spans[word.dim()] = DSpan::single(word.pos() - 1, word.pos());
      AntSet ants = *chosen;
      ants.push_back(prod_term);
      Term cons = Term::item(strip_labels(wp.prod->lhs), spans);
      out->push_back({"Match", std::move(ants), cons, {{prod_term, wp.weight}}});
      return;
    }
    if (per_dim[d].empty()) {
      cross_product(wp, per_dim, d + 1, chosen, out);
      return;
    }
    for (const auto& word : per_dim[d]) {
      chosen->push_back(word);
      cross_product(wp, per_dim, d + 1, chosen, out);
      chosen->pop_back();
    }
  }

  int dims_;
};

}  // namespace

std::string Candidate::key() const {
  std::string out = rule;
  out += '|';
  for (const auto& a : antecedents) out += a.sig();
  out += "=>";
  out += consequent.sig();
  return out;
}

void Logic::check_input(const GrammarEvaluator&, const Multitext&) const {}

std::vector<std::pair<Term, double>> Logic::axioms(const GrammarEvaluator& g,
                                                   const Multitext& input) const {
  std::vector<std::pair<Term, double>> out;
  const int I = std::min(input_dims(), input.dimensionality());
  for (int d = 0; d < I; ++d)
    for (int i = 1; i <= input.length(d); ++i)
      out.emplace_back(Term::terminal(d, i, input.dims[d][i - 1]), input.token_weight(d, i));
  if (g.enumerable())
    for (const auto& p : g.all_productions()) out.emplace_back(Term::grammar(p), p->weight);
  return out;
}

std::vector<Candidate> Logic::seed(const GrammarEvaluator&, const Multitext&) const { return {}; }

std::unique_ptr<Logic> make_logic_d1c() { return std::make_unique<LogicD1C>(); }
std::unique_ptr<Logic> make_logic_c(int dims) { return std::make_unique<LogicC>(dims); }
std::unique_ptr<Logic> make_logic_ct(int input_dims, int grammar_dims, bool macro) {
  return std::make_unique<LogicCT>(input_dims, grammar_dims, macro);
}
std::unique_ptr<Logic> make_logic_cr(int dims, const Multitext& input, CrOptions options) {
  return std::make_unique<LogicCR>(dims, input, options);
}
std::unique_ptr<Logic> make_logic_wa(int dims) { return std::make_unique<LogicWA>(dims); }

std::unique_ptr<Logic> make_logic(const std::string& flag, const GrammarEvaluator& g,
                                  const Multitext& input) {
  if (flag == "d1c") return make_logic_d1c();
  if (flag == "c") return make_logic_c(g.dims());
  if (flag == "ct") return make_logic_ct(input.dimensionality(), g.dims(), false);
  if (flag == "ct-macro") return make_logic_ct(input.dimensionality(), g.dims(), true);
  if (flag == "cr") return make_logic_cr(g.dims(), input, {});
  if (flag == "wa") return make_logic_wa(g.dims());
  throw ConfigurationError("unknown logic: " + flag);
}

}  // namespace semparse
