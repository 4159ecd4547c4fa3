#include "semparse/evaluate.hpp"

#include <cmath>

#include "semparse/translate.hpp"

namespace semparse {

double score_pair(const Gmtg& paraphrase_grammar, const std::vector<std::string>& reference,
                  const std::vector<std::string>& hypothesis, const Termination& limits) {
  if (paraphrase_grammar.dims() != 2)
    throw ConfigurationError("pair scoring needs a two-dimensional grammar");
  if (hypothesis.empty() || reference.empty()) return 0.0;
  Multitext pair;
  pair.dims = {reference, hypothesis};
  auto logic = make_logic_c(2);
  EngineConfig config;
  config.semiring = Semiring::inside();
  config.termination = limits;
  Chart chart = parse(*logic, paraphrase_grammar, pair, config);
  return chart.mass(goal_item(paraphrase_grammar, pair, 2));
}

CorpusScore score_corpus(const Gmtg& paraphrase_grammar,
                         const std::vector<std::pair<std::vector<std::string>,
                                                     std::vector<std::string>>>& pairs,
                         const Termination& limits) {
  CorpusScore out;
  double log_sum = 0.0;
  int parsed = 0;
  for (size_t i = 0; i < pairs.size(); ++i) {
    PairScore ps;
    ps.id = static_cast<int>(i + 1);
    ps.score = score_pair(paraphrase_grammar, pairs[i].first, pairs[i].second, limits);
    ps.parsed = ps.score > 0.0;
    if (ps.parsed) {
      log_sum += std::log(std::max(ps.score, 1e-300));
      ++parsed;
    } else {
      ++out.unparsed;
    }
    out.pairs.push_back(ps);
  }
  if (parsed > 0) out.geometric_mean = std::exp(log_sum / parsed);
  return out;
}

}  // namespace semparse
