#include "semparse/estimation.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "semparse/translate.hpp"

namespace semparse {

namespace {

std::vector<DSpan> one_word_spans(int dims, int d, int pos) {
  std::vector<DSpan> spans(dims);
  spans[d] = DSpan::single(pos - 1, pos);
  return spans;
}

}  // namespace

Gmtg inside_outside_step(const Gmtg& grammar, const Corpus& corpus, const Semiring& semiring,
                         double smoothing_eps, StepReport* report, const Termination& limits) {
  const int D = grammar.dims();
  std::map<std::string, double> counts;  // production key -> pooled posterior count
  double log_likelihood = 0.0;
  int excluded = 0;

  for (const auto& tuple : corpus) {
    auto logic = make_logic_cr(D, tuple);
    EngineConfig config;
    config.semiring = semiring;
    config.strategy = "bottomup";
    config.termination = limits;
    Chart chart = parse(*logic, grammar, tuple, config);

    Term goal = goal_item(grammar, tuple, D);
    double total = chart.mass(goal);
    if (!(total > 0.0)) {
      ++excluded;
      continue;
    }
    log_likelihood += std::log(total);

    // terminating updates: preterminal items pair with their reverse
    // items, one production per (label, scanned word)
    for (int d = 0; d < D; ++d) {
      for (int i = 1; i <= tuple.length(d); ++i) {
        for (const auto& wp : grammar.terminating(d, tuple.dims[d][i - 1])) {
          Term item = Term::item(strip_labels(wp.prod->lhs), one_word_spans(D, d, i));
          Term rev = item.reversed(true);
          if (!chart.has(item) || !chart.has(rev)) continue;
          counts[wp.prod->key] += chart.mass(item) * chart.mass(rev) / total;
        }
      }
    }

    // nonterminating updates: every realized antecedent split of every
    // item, weighted by the parent's reverse value
    for (const auto& item : chart.forward_items()) {
      Term rev = item.reversed(true);
      if (!chart.has(rev)) continue;
      double outside = chart.mass(rev);
      if (!(outside > 0.0)) continue;
      const auto* sets = chart.ant_sets(item);
      if (!sets) continue;
      for (const auto& ants : *sets) {
        if (ants.size() != 3 || ants[0].kind() != TermKind::Nonterminal ||
            ants[1].kind() != TermKind::Nonterminal || ants[2].kind() != TermKind::Grammar)
          continue;
        const Production& p = ants[2].production();
        counts[p.key] +=
            outside * chart.mass(ants[0]) * chart.mass(ants[1]) * p.weight / total;
      }
    }
  }

  if (report) {
    report->log_likelihood = log_likelihood;
    report->excluded_tuples = excluded;
  }

  // M-step: normalize pooled counts per LHS link; links with no
  // evidence keep their old weights
  std::map<std::string, double> lhs_totals;
  for (const auto& p : grammar.all_productions()) {
    double c = counts.count(p->key) ? counts[p->key] : 0.0;
    lhs_totals[labels_str(strip_labels(p->lhs))] += c + smoothing_eps;
  }
  Gmtg next(D, grammar.start());
  for (const auto& p : grammar.all_productions()) {
    Production q = *p;
    double denom = lhs_totals[labels_str(strip_labels(p->lhs))];
    if (denom > 0.0) {
      double c = (counts.count(p->key) ? counts[p->key] : 0.0) + smoothing_eps;
      q.weight = c / denom;
    }
    if (std::isnan(q.weight))
      throw std::runtime_error("estimation diverged: NaN weight for " + p->key);
    next.add(q);
  }
  next.set_normalized(true);
  return next;
}

EstimationRun train(const Gmtg& start, const Corpus& corpus, const EstimationOptions& options) {
  if (options.iterations < 1) throw ConfigurationError("training needs at least one iteration");
  Semiring semiring = Semiring::inside();
  if (options.mode.rfind("nbest:", 0) == 0)
    semiring = Semiring::viterbi_nbest(std::stoi(options.mode.substr(6)));
  else if (options.mode != "inside")
    throw ConfigurationError("unknown estimation mode: " + options.mode);

  EstimationRun run{start, {}, {}, 0};
  for (int q = 0; q < options.iterations; ++q) {
    StepReport report;
    Gmtg next = inside_outside_step(run.grammar, corpus, semiring, options.smoothing_eps, &report,
                                    options.limits);
    run.log_likelihood.push_back(report.log_likelihood);
    run.excluded_tuples = report.excluded_tuples;
    if (options.keep_snapshots) run.snapshots.push_back(run.grammar);
    run.grammar = std::move(next);
    if (q > 0) {
      double prev = run.log_likelihood[q - 1], cur = run.log_likelihood[q];
      if (std::abs(cur - prev) < options.rel_ll_tolerance * std::max(1.0, std::abs(prev))) break;
    }
  }
  return run;
}

WordLexicon lexicon_em(const Corpus& bitext, int iterations) {
  if (bitext.empty()) throw std::runtime_error("lexicon training needs a non-empty corpus");
  for (const auto& tuple : bitext)
    if (tuple.dimensionality() != 2)
      throw std::runtime_error("lexicon training needs two-dimensional tuples");

  // co-occurrence initialization, with NULL on both sides
  WordLexicon lex;
  for (const auto& tuple : bitext) {
    for (const auto& tgt : tuple.dims[1]) lex.add("", tgt, 1.0);
    for (const auto& src : tuple.dims[0]) {
      lex.add(src, "", 0.5);
      for (const auto& tgt : tuple.dims[1]) lex.add(src, tgt, 1.0);
    }
  }
  lex.normalize();

  // each source occurrence (and one NULL per tuple) explains one target
  // word or NULL
  for (int iter = 0; iter < iterations; ++iter) {
    WordLexicon counts;
    for (const auto& tuple : bitext) {
      std::vector<std::string> sources = tuple.dims[0];
      sources.emplace_back("");  // the empty source generates insertions
      for (const auto& src : sources) {
        double z = src.empty() ? 0.0 : lex.prob(src, "");
        for (const auto& tgt : tuple.dims[1]) z += lex.prob(src, tgt);
        if (!(z > 0.0)) continue;
        if (!src.empty()) counts.add(src, "", lex.prob(src, "") / z);
        for (const auto& tgt : tuple.dims[1]) counts.add(src, tgt, lex.prob(src, tgt) / z);
      }
    }
    counts.normalize();
    lex = std::move(counts);
  }
  return lex;
}

}  // namespace semparse
