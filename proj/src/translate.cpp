#include "semparse/translate.hpp"

#include <algorithm>

namespace semparse {

Term goal_item(const GrammarEvaluator& grammar, const Multitext& input, int input_dims) {
  std::vector<DSpan> full(input_dims);
  for (int d = 0; d < input_dims; ++d) full[d] = DSpan::single(0, input.length(d));
  return Term::item(strip_labels(grammar.start()), full);
}

namespace {

std::vector<std::vector<std::string>> assemble_yields(const Multitree& tree, int dims) {
  std::vector<std::vector<std::string>> out(dims);
  for (int d = 0; d < dims; ++d) out[d] = linearize(tree, d);
  return out;
}

std::string yield_key(const std::vector<std::vector<std::string>>& yields) {
  std::string out;
  for (const auto& dim : yields) {
    for (const auto& tok : dim) {
      out += tok;
      out += ' ';
    }
    out += '\n';
  }
  return out;
}

}  // namespace

TranslationResult translate(const GrammarEvaluator& grammar, const Multitext& input,
                            const TranslateOptions& options) {
  const int I = input.dimensionality();
  const int D = grammar.dims();
  auto logic = make_logic_ct(I, D, options.load_compose_macro);

  Semiring semiring = options.semiring;
  if (options.nbest > 1) semiring = Semiring::viterbi_nbest(options.nbest);

  EngineConfig config;
  config.semiring = semiring;
  config.strategy = options.strategy;
  config.termination = options.limits;
  config.log_firings = options.log_firings;
  Term goal = goal_item(grammar, input, I);
  config.termination.goal_terms = {goal};

  Chart chart = parse(*logic, grammar, input, config);

  TranslationResult result;
  result.stats = chart.stats;
  result.goal_value = chart.value(goal);
  result.ok = !semiring.is_zero(result.goal_value);
  if (!result.ok || !semiring.derivational()) {
    result.probability = semiring.mass(result.goal_value);
    return result;
  }

  if (semiring.id() == SemiringId::ViterbiNBest) {
    for (const auto& d : result.goal_value.as_nbest()) {
      TranslationCandidate cand;
      cand.probability = d.prob;
      cand.tree = tree_from_derivation(d.nodes.at(0));
      cand.yields = assemble_yields(*cand.tree, D);
      result.alternatives.push_back(std::move(cand));
    }
    // among candidates tied in probability, prefer the least linearization
    std::stable_sort(result.alternatives.begin(), result.alternatives.end(),
                     [](const TranslationCandidate& a, const TranslationCandidate& b) {
                       if (a.probability != b.probability) return a.probability > b.probability;
                       return yield_key(a.yields) < yield_key(b.yields);
                     });
    const auto& best = result.alternatives.front();
    result.probability = best.probability;
    result.tree = best.tree->clone();
    result.yields = best.yields;
    return result;
  }

  result.probability = semiring.mass(result.goal_value);
  result.tree = tree_from_value(semiring, result.goal_value);
  result.yields = assemble_yields(*result.tree, D);
  return result;
}

}  // namespace semparse
