#include "semparse/align.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace semparse {

namespace {

// score assigned to a word left uncovered when the lexicon offers no
// explicit NULL link for it
constexpr double kNullFallback = 1e-9;

bool goal_shaped(const Term& t, const AlignmentEvaluator& eval, const Multitext& input) {
  if (!t.is_forward_item()) return false;
  const int I = input.dimensionality();
  for (int d = 0; d < I; ++d) {
    const DSpan full = DSpan::single(0, input.length(d));
    if (t.spans()[d] != full) return false;
  }
  const auto start = eval.start();
  for (int d = 0; d < I; ++d)
    if (t.labels()[d].symbol != start[d].symbol) return false;
  return true;
}

}  // namespace

HierAlignResult hier_align(std::shared_ptr<const Gmtg> structured, const WordLexicon& lexicon,
                           const Multitext& input, const HierAlignOptions& options) {
  const int I = input.dimensionality();
  int f = options.max_fan_out > 0 ? options.max_fan_out : std::max(structured->fan_out(), 1);
  AlignmentEvaluator evaluator(structured, lexicon, I, f);

  auto logic = make_logic_c(I);
  EngineConfig config;
  config.semiring = Semiring::viterbi_deriv();
  config.strategy = options.strategy;
  config.termination = options.limits;
  Chart chart = parse(*logic, evaluator, input, config);

  HierAlignResult result;
  result.stats = chart.stats;
  // the goal is any full-span item over the start symbols; heads vary
  Term best;
  double best_mass = 0.0;
  for (const auto& t : chart.forward_items()) {
    if (!goal_shaped(t, evaluator, input)) continue;
    double m = chart.mass(t);
    if (m > best_mass || (m == best_mass && best.valid() && t.sig() < best.sig())) {
      best = t;
      best_mass = m;
    }
  }
  if (!best.valid() || best_mass <= 0.0) return result;
  result.ok = true;
  result.probability = best_mass;
  result.tree = tree_from_value(config.semiring, chart.value(best));
  return result;
}

AlignCorpusResult align_corpus(std::shared_ptr<const Gmtg> structured, const WordLexicon& lexicon,
                               const Corpus& corpus, const HierAlignOptions& options) {
  AlignCorpusResult out;
  for (size_t i = 0; i < corpus.size(); ++i) {
    try {
      HierAlignResult r = hier_align(structured, lexicon, corpus[i], options);
      if (r.ok)
        out.treebank.push_back(std::move(r.tree));
      else
        out.skipped.push_back("tuple " + std::to_string(i + 1) + ": unalignable");
    } catch (const std::exception& e) {
      out.skipped.push_back("tuple " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

std::shared_ptr<Gmtg> flat_structured_grammar(const Corpus& corpus) {
  auto g = std::make_shared<Gmtg>(1, std::vector<Label>{Label(kLambda)});
  std::set<std::string> vocabulary;
  for (const auto& tuple : corpus)
    if (!tuple.dims.empty())
      for (const auto& tok : tuple.dims[0]) vocabulary.insert(tok);
  for (const auto& tok : vocabulary)
    g->add(Production::terminating(1, 0, Label(kLambda, tok), tok, 1.0));
  // any head may govern any other, in either order
  for (const auto& h : vocabulary) {
    for (const auto& c : vocabulary) {
      Label parent(kLambda, h);
      Label head(kLambda, h);
      head.head_child = true;
      Label child(kLambda, c);
      g->add(Production::nonterminating({parent}, Pav::parse("[[1,2]]"), {child}, {head}, 1.0));
      g->add(Production::nonterminating({parent}, Pav::parse("[[2,1]]"), {child}, {head}, 1.0));
    }
  }
  return g;
}

// --- word alignment ----------------------------------------------------------

namespace {

struct CoverItem {
  int pos1 = 0;  // 0 = inactive in that dimension
  int pos2 = 0;
  double mass = 0.0;
  std::string sig;
};

struct CoverSearch {
  const std::vector<CoverItem>& items;
  const std::vector<std::vector<int>>& covering1;  // per position, item indexes
  const std::vector<std::vector<int>>& covering2;
  int n1, n2;
  std::vector<bool> used1, used2;
  std::vector<int> chosen, best_chosen;
  double best_log = -1e300;

  double null_log = std::log(kNullFallback);

  void run() { recurse(1, 0.0); }

  // positions walked in order: dimension 1 first, then dimension 2
  void recurse(int p, double log_score) {
    if (p > n1 + n2) {
      if (log_score > best_log) {
        best_log = log_score;
        best_chosen = chosen;
      }
      return;
    }
    const bool dim1 = p <= n1;
    const int pos = dim1 ? p : p - n1;
    if ((dim1 && used1[pos]) || (!dim1 && used2[pos])) {
      recurse(p + 1, log_score);
      return;
    }
    const auto& candidates = dim1 ? covering1[pos] : covering2[pos];
    for (int idx : candidates) {
      const CoverItem& item = items[idx];
      if (item.mass <= 0.0) continue;
      if (item.pos1 && used1[item.pos1]) continue;
      if (item.pos2 && used2[item.pos2]) continue;
      if (item.pos1) used1[item.pos1] = true;
      if (item.pos2) used2[item.pos2] = true;
      chosen.push_back(idx);
      recurse(p + 1, log_score + std::log(item.mass));
      chosen.pop_back();
      if (item.pos1) used1[item.pos1] = false;
      if (item.pos2) used2[item.pos2] = false;
    }
    // leave the word NULL-linked; it still counts as covered
    (dim1 ? used1 : used2)[pos] = true;
    recurse(p + 1, log_score + null_log);
    (dim1 ? used1 : used2)[pos] = false;
  }
};

}  // namespace

WordAlignment word_align(const WordLexicon& lexicon, const Multitext& tuple, int exact_limit) {
  if (tuple.dimensionality() != 2)
    throw ConfigurationError("word alignment expects a two-dimensional tuple");
  LexiconGrammar grammar(lexicon, 2);
  auto logic = make_logic_wa(2);
  EngineConfig config;
  config.semiring = Semiring::viterbi();
  Chart chart = parse(*logic, grammar, tuple, config);

  const int n1 = tuple.length(0), n2 = tuple.length(1);
  std::vector<CoverItem> items;
  for (const auto& t : chart.forward_items()) {
    CoverItem item;
    if (!t.spans()[0].is_empty()) item.pos1 = t.spans()[0].intervals()[0].end;
    if (!t.spans()[1].is_empty()) item.pos2 = t.spans()[1].intervals()[0].end;
    item.mass = chart.mass(t);
    item.sig = t.sig();
    if (item.mass > 0.0) items.push_back(std::move(item));
  }
  std::sort(items.begin(), items.end(), [](const CoverItem& a, const CoverItem& b) {
    if (a.mass != b.mass) return a.mass > b.mass;
    return a.sig < b.sig;
  });

  std::vector<bool> used1(n1 + 1, false), used2(n2 + 1, false);
  std::vector<int> chosen;
  WordAlignment out;
  if (std::max(n1, n2) <= exact_limit) {
    std::vector<std::vector<int>> covering1(n1 + 1), covering2(n2 + 1);
    for (size_t i = 0; i < items.size(); ++i) {
      if (items[i].pos1) covering1[items[i].pos1].push_back(static_cast<int>(i));
      if (items[i].pos2 && !items[i].pos1) covering2[items[i].pos2].push_back(static_cast<int>(i));
    }
    CoverSearch search{items, covering1, covering2, n1, n2,
                       std::vector<bool>(n1 + 1, false), std::vector<bool>(n2 + 1, false),
                       {}, {}, -1e300, std::log(kNullFallback)};
    search.run();
    chosen = search.best_chosen;
    for (int idx : chosen) {
      if (items[idx].pos1) used1[items[idx].pos1] = true;
      if (items[idx].pos2) used2[items[idx].pos2] = true;
    }
    out.exact = true;
  } else {
    // greedy competitive linking: best link first, never reusing a word
    for (size_t i = 0; i < items.size(); ++i) {
      const auto& item = items[i];
      if (item.pos1 && used1[item.pos1]) continue;
      if (item.pos2 && used2[item.pos2]) continue;
      if (item.pos1) used1[item.pos1] = true;
      if (item.pos2) used2[item.pos2] = true;
      chosen.push_back(static_cast<int>(i));
    }
  }

  for (int idx : chosen) {
    out.links.push_back({items[idx].pos1, items[idx].pos2, items[idx].mass});
    out.score *= items[idx].mass;
  }
  for (int i = 1; i <= n1; ++i)
    if (!used1[i]) out.links.push_back({i, 0, 0.0});
  for (int j = 1; j <= n2; ++j)
    if (!used2[j]) out.links.push_back({0, j, 0.0});
  std::sort(out.links.begin(), out.links.end(), [](const AlignLink& a, const AlignLink& b) {
    if (a.pos1 != b.pos1) return a.pos1 && (!b.pos1 || a.pos1 < b.pos1);
    return a.pos2 < b.pos2;
  });

  // cover validity: every position exactly once
  std::set<int> seen1, seen2;
  for (const auto& link : out.links) {
    if (link.pos1 && !seen1.insert(link.pos1).second)
      throw std::logic_error("cover uses a dimension-1 word twice");
    if (link.pos2 && !seen2.insert(link.pos2).second)
      throw std::logic_error("cover uses a dimension-2 word twice");
  }
  if (static_cast<int>(seen1.size()) != n1 || static_cast<int>(seen2.size()) != n2)
    throw std::logic_error("cover misses a word position");
  return out;
}

std::string format_links(const WordAlignment& alignment) {
  std::string out;
  for (const auto& link : alignment.links) {
    if (!out.empty()) out += ' ';
    if (link.pos1 && link.pos2)
      out += "1:" + std::to_string(link.pos1) + " 2:" + std::to_string(link.pos2);
    else if (link.pos1)
      out += "1:" + std::to_string(link.pos1) + " -";
    else
      out += "2:" + std::to_string(link.pos2) + " -";
  }
  return out;
}

}  // namespace semparse
