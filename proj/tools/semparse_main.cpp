// Command-line driver: one subcommand per pipeline stage plus the
// whole-recipe runner.

#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "semparse/align.hpp"
#include "semparse/estimation.hpp"
#include "semparse/evaluate.hpp"
#include "semparse/multitree.hpp"
#include "semparse/pipeline.hpp"
#include "semparse/translate.hpp"

using namespace semparse;

namespace {

struct GlobalOptions {
  std::string semiring = "inside";
  std::string logic = "c";
  std::string strategy = "bottomup";
  double beam = 0.0;
  std::uint64_t max_inferences = 0;
  double max_seconds = 0.0;
  long long seed = 0;
};

void add_global_flags(CLI::App* app, GlobalOptions* g) {
  app->add_option("--semiring", g->semiring,
                  "boolean|counting|inside|viterbi|viterbi-deriv|viterbi-nbest:<n>|forest");
  app->add_option("--logic", g->logic, "d1c|c|ct|ct-macro|cr|wa");
  app->add_option("--strategy", g->strategy, "bottomup|ucs");
  app->add_option("--beam", g->beam, "threshold pruning factor (0 = off)");
  app->add_option("--max-inferences", g->max_inferences, "inference budget (0 = unlimited)");
  app->add_option("--max-seconds", g->max_seconds, "per-parse time budget (0 = unlimited)");
  app->add_option("--seed", g->seed, "random seed recorded in reports");
}

EngineConfig engine_config(const GlobalOptions& g) {
  EngineConfig config;
  config.semiring = Semiring::from_flag(g.semiring);
  config.strategy = g.strategy;
  config.termination.max_inferences = g.max_inferences;
  config.termination.max_seconds = g.max_seconds;
  if (g.beam > 0.0) config.side_conditions.push_back(prune_beam_threshold(g.beam));
  return config;
}

void write_run_report(const std::string& path, const RunStats& stats, double goal_mass) {
  std::ofstream out(path);
  out << "termination=" << stats.termination << '\n';
  out << "candidates=" << stats.candidates << '\n';
  out << "inferences=" << stats.inferences << '\n';
  out << "pruned=" << stats.pruned << '\n';
  out << "goal=" << goal_mass << '\n';
  for (const auto& [rule, n] : stats.rule_firings) out << "rule " << rule << '=' << n << '\n';
}

int cmd_lexicon(const std::string& in, const std::string& out, int iters) {
  WordLexicon lex = lexicon_em(read_corpus_file(in), iters);
  lex.save_file(out);
  return 0;
}

int cmd_align(const std::string& structured, const std::string& lexicon, const std::string& in,
              const std::string& out, int fan_out, const std::string& fallback) {
  Corpus corpus = read_corpus_file(in);
  std::shared_ptr<Gmtg> g;
  if (!structured.empty())
    g = std::make_shared<Gmtg>(Gmtg::load_file(structured));
  else if (fallback == "lexicon-only")
    g = flat_structured_grammar(corpus);
  else
    throw ConfigurationError("align needs --structured or --t3-fallback lexicon-only");
  HierAlignOptions options;
  options.max_fan_out = fan_out;
  AlignCorpusResult result = align_corpus(g, WordLexicon::load_file(lexicon), corpus, options);
  write_treebank_file(out, result.treebank);
  for (const auto& note : result.skipped) std::cerr << "skipped " << note << '\n';
  std::cerr << "aligned " << result.treebank.size() << "/" << corpus.size() << " tuples\n";
  return 0;
}

int cmd_walign(const std::string& lexicon, const std::string& in, const std::string& out) {
  WordLexicon lex = WordLexicon::load_file(lexicon);
  Corpus corpus = read_corpus_file(in);
  std::ofstream os(out);
  for (const auto& tuple : corpus) os << format_links(word_align(lex, tuple)) << '\n';
  return 0;
}

int cmd_induce(const std::string& in, const std::string& out, const std::string& start_text) {
  auto treebank = read_treebank_file(in);
  if (treebank.empty()) throw std::runtime_error("empty treebank: " + in);
  int dims = static_cast<int>(treebank.front()->labels.size());
  std::vector<Label> start;
  if (!start_text.empty()) {
    start = parse_labels(start_text);
  } else {
    start = treebank.front()->labels;
    for (auto& l : start) l = Label(l.symbol);
  }
  std::vector<std::string> rejected;
  Gmtg g = estimate_from_multitreebank(treebank, dims, start, &rejected);
  for (const auto& note : rejected) std::cerr << "rejected " << note << '\n';
  g.save_file(out);
  return 0;
}

int cmd_train(const std::string& grammar, const std::string& corpus, int iters,
              const std::string& mode, bool no_smoothing, const std::string& out,
              const std::string& likelihood) {
  EstimationOptions options;
  options.iterations = iters;
  options.mode = mode;
  if (no_smoothing) options.smoothing_eps = 0.0;
  EstimationRun run = train(Gmtg::load_file(grammar), read_corpus_file(corpus), options);
  run.grammar.save_file(out);
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!likelihood.empty()) {
    file.open(likelihood);
    os = &file;
  }
  *os << "iteration\tlog_likelihood\n";
  for (size_t i = 0; i < run.log_likelihood.size(); ++i)
    *os << (i + 1) << '\t' << run.log_likelihood[i] << '\n';
  return 0;
}

int cmd_translate(const GlobalOptions& g, const std::string& grammar_path, const std::string& in,
                  const std::string& out, int nbest, const std::string& trees_path,
                  bool macro) {
  Gmtg grammar = Gmtg::load_file(grammar_path);
  Corpus inputs = read_corpus_file(in);
  TranslateOptions options;
  options.nbest = nbest;
  options.strategy = g.strategy;
  options.load_compose_macro = macro;
  options.limits.max_inferences = g.max_inferences;
  options.limits.max_seconds = g.max_seconds;
  Corpus outputs;
  std::vector<MultitreePtr> trees;
  for (const auto& input : inputs) {
    TranslationResult r = translate(grammar, input, options);
    Multitext block;
    if (r.ok) {
      block.dims = r.yields;
      trees.push_back(r.tree->clone());
      std::cerr << "translated p=" << r.probability << '\n';
    } else {
      block.dims = input.dims;
      block.dims.resize(grammar.dims());
      std::cerr << "untranslatable input\n";
    }
    outputs.push_back(std::move(block));
  }
  write_corpus_file(out, outputs);
  if (!trees_path.empty()) write_treebank_file(trees_path, trees);
  return 0;
}

int cmd_multiparse(const GlobalOptions& g, const std::string& grammar_path, const std::string& in,
                   const std::string& report_path) {
  Gmtg grammar = Gmtg::load_file(grammar_path);
  Corpus inputs = read_corpus_file(in);
  EngineConfig config = engine_config(g);
  for (const auto& input : inputs) {
    auto logic = make_logic(g.logic, grammar, input);
    Chart chart = parse(*logic, grammar, input, config);
    Term goal = goal_item(grammar, input, logic->input_dims());
    double mass = chart.mass(goal);
    std::cout << config.semiring.str(chart.value(goal)) << '\n';
    if (!report_path.empty()) write_run_report(report_path, chart.stats, mass);
  }
  return 0;
}

int cmd_evaluate(const std::string& grammar_path, const std::string& ref, const std::string& hyp,
                 const std::string& report) {
  Gmtg grammar = Gmtg::load_file(grammar_path);
  Corpus refs = read_corpus_file(ref);
  Corpus hyps = read_corpus_file(hyp);
  if (refs.size() != hyps.size())
    throw std::runtime_error("reference and hypothesis counts differ");
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> pairs;
  for (size_t i = 0; i < refs.size(); ++i)
    pairs.emplace_back(refs[i].dims.at(0), hyps[i].dims.at(0));
  CorpusScore scores = score_corpus(grammar, pairs);
  std::ofstream out(report);
  out << "pair\tscore\tstatus\n";
  for (const auto& ps : scores.pairs)
    out << ps.id << '\t' << ps.score << '\t' << (ps.parsed ? "parsed" : "unparsed") << '\n';
  std::cout << "geometric_mean=" << scores.geometric_mean << " unparsed=" << scores.unparsed
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized semiring parsing toolkit"};
  app.require_subcommand(1);
  GlobalOptions global;
  add_global_flags(&app, &global);

  auto* lex = app.add_subcommand("lexicon", "train a word translation lexicon");
  std::string lex_in, lex_out;
  int lex_iters = 5;
  lex->add_option("--in", lex_in)->required();
  lex->add_option("--out", lex_out)->required();
  lex->add_option("--iters", lex_iters);

  auto* al = app.add_subcommand("align", "hierarchically align a corpus into a multitreebank");
  std::string al_structured, al_lexicon, al_in, al_out, al_fallback;
  int al_fanout = 1;
  al->add_option("--structured", al_structured);
  al->add_option("--lexicon", al_lexicon)->required();
  al->add_option("--in", al_in)->required();
  al->add_option("--out", al_out)->required();
  al->add_option("--fan-out", al_fanout);
  al->add_option("--t3-fallback", al_fallback);

  auto* wa = app.add_subcommand("walign", "word-align a bitext");
  std::string wa_lexicon, wa_in, wa_out;
  wa->add_option("--lexicon", wa_lexicon)->required();
  wa->add_option("--in", wa_in)->required();
  wa->add_option("--out", wa_out)->required();

  auto* ind = app.add_subcommand("induce", "estimate a grammar from a multitreebank");
  std::string ind_in, ind_out, ind_start;
  ind->add_option("--in", ind_in)->required();
  ind->add_option("--out", ind_out)->required();
  ind->add_option("--start", ind_start);

  auto* tr = app.add_subcommand("train", "re-estimate grammar weights");
  std::string tr_grammar, tr_corpus, tr_mode = "inside", tr_out, tr_ll;
  int tr_iters = 10;
  bool tr_nosmooth = false;
  tr->add_option("--grammar", tr_grammar)->required();
  tr->add_option("--corpus", tr_corpus)->required();
  tr->add_option("--iters", tr_iters);
  tr->add_option("--mode", tr_mode);
  tr->add_option("--out", tr_out)->required();
  tr->add_option("--likelihood", tr_ll);
  tr->add_flag("--no-smoothing", tr_nosmooth);

  auto* tx = app.add_subcommand("translate", "translate a multitext");
  std::string tx_grammar, tx_in, tx_out, tx_trees;
  int tx_nbest = 1;
  bool tx_macro = false;
  tx->add_option("--grammar", tx_grammar)->required();
  tx->add_option("--in", tx_in)->required();
  tx->add_option("--out", tx_out)->required();
  tx->add_option("--nbest", tx_nbest);
  tx->add_option("--trees", tx_trees);
  tx->add_flag("--macro", tx_macro, "fuse Load into Compose");

  auto* mp = app.add_subcommand("multiparse", "parse tuples and print goal values");
  std::string mp_grammar, mp_in, mp_report;
  mp->add_option("--grammar", mp_grammar)->required();
  mp->add_option("--in", mp_in)->required();
  mp->add_option("--report", mp_report);

  auto* ev = app.add_subcommand("evaluate", "score hypotheses against references");
  std::string ev_grammar, ev_ref, ev_hyp, ev_report;
  ev->add_option("--grammar", ev_grammar)->required();
  ev->add_option("--ref", ev_ref)->required();
  ev->add_option("--hyp", ev_hyp)->required();
  ev->add_option("--report", ev_report)->required();

  auto* pl = app.add_subcommand("pipeline", "run the whole recipe from a config file");
  std::string pl_config;
  std::vector<std::string> pl_overrides;
  pl->add_option("--config", pl_config)->required();
  pl->add_option("set", pl_overrides, "key=value overrides (command line wins)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*lex) return cmd_lexicon(lex_in, lex_out, lex_iters);
    if (*al) return cmd_align(al_structured, al_lexicon, al_in, al_out, al_fanout, al_fallback);
    if (*wa) return cmd_walign(wa_lexicon, wa_in, wa_out);
    if (*ind) return cmd_induce(ind_in, ind_out, ind_start);
    if (*tr)
      return cmd_train(tr_grammar, tr_corpus, tr_iters, tr_mode, tr_nosmooth, tr_out, tr_ll);
    if (*tx)
      return cmd_translate(global, tx_grammar, tx_in, tx_out, tx_nbest, tx_trees, tx_macro);
    if (*mp) return cmd_multiparse(global, mp_grammar, mp_in, mp_report);
    if (*ev) return cmd_evaluate(ev_grammar, ev_ref, ev_hyp, ev_report);
    if (*pl) {
      PipelineConfig config = PipelineConfig::from_file(pl_config);
      config.seed = global.seed;
      for (const auto& kv : pl_overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::runtime_error("override needs key=value: " + kv);
        config.apply(kv.substr(0, eq), kv.substr(eq + 1));
      }
      PipelineReport report = run_pipeline(config);
      for (const auto& stage : report.stages_run) std::cerr << "ran " << stage << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
