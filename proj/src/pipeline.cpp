#include "semparse/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "semparse/align.hpp"
#include "semparse/estimation.hpp"
#include "semparse/evaluate.hpp"
#include "semparse/multitree.hpp"
#include "semparse/translate.hpp"

namespace semparse {

namespace {

std::string fmt_score(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

[[noreturn]] void stage_fail(const std::string& stage, const std::string& what) {
  throw std::runtime_error("stage " + stage + " failed: " + what);
}

WordLexicon identity_lexicon(const Corpus& corpus) {
  WordLexicon lex;
  for (const auto& tuple : corpus)
    for (const auto& dim : tuple.dims)
      for (const auto& tok : dim) lex.set(tok, tok, 1.0);
  return lex;
}

// T1 -> T5 over one parallel corpus; returns the path of the trained grammar
std::string train_side(const PipelineConfig& config, const std::string& prefix,
                       const std::string& corpus_path, const std::string& structured_path,
                       bool identity_shortcut, PipelineReport* report) {
  namespace fs = std::filesystem;
  const std::string dir = config.out_dir;
  auto artifact = [&](const std::string& name) { return dir + "/" + prefix + name; };

  Corpus corpus;
  try {
    corpus = read_corpus_file(corpus_path);
  } catch (const std::exception& e) {
    stage_fail(prefix + "T1", e.what());
  }

  // T1: word translation model
  std::string lexicon_path = artifact("lexicon.txt");
  try {
    WordLexicon lexicon = identity_shortcut ? identity_lexicon(corpus)
                                            : lexicon_em(corpus, config.lexicon_iterations);
    lexicon.save_file(lexicon_path);
  } catch (const std::exception& e) {
    stage_fail(prefix + "T1", e.what());
  }
  report->stages_run.push_back(prefix + "T1");
  report->artifacts[prefix + "lexicon"] = lexicon_path;

  // T3: hierarchical alignment into a multitreebank
  std::string treebank_path = artifact("treebank.txt");
  int treebank_size = 0;
  try {
    WordLexicon lexicon = WordLexicon::load_file(lexicon_path);
    std::shared_ptr<Gmtg> structured;
    if (!structured_path.empty())
      structured = std::make_shared<Gmtg>(Gmtg::load_file(structured_path));
    else if (config.t3_fallback == "lexicon-only")
      structured = flat_structured_grammar(corpus);
    else
      stage_fail(prefix + "T3", "no structured grammar and no fallback requested");
    HierAlignOptions options;
    options.max_fan_out = config.max_fan_out;
    AlignCorpusResult aligned = align_corpus(structured, lexicon, corpus, options);
    write_treebank_file(treebank_path, aligned.treebank);
    treebank_size = static_cast<int>(aligned.treebank.size());
    for (const auto& note : aligned.skipped) report->notes.push_back(prefix + "T3: " + note);
    if (aligned.treebank.empty()) stage_fail(prefix + "T3", "no tuple could be aligned");
  } catch (const std::exception& e) {
    stage_fail(prefix + "T3", e.what());
  }
  report->stages_run.push_back(prefix + "T3");
  report->artifacts[prefix + "treebank"] = treebank_path;
  report->notes.push_back(prefix + "T3: aligned " + std::to_string(treebank_size) + " tuples");

  // T4: initial grammar by relative frequency
  std::string grammar0_path = artifact("grammar0.txt");
  int dims = 0;
  try {
    auto treebank = read_treebank_file(treebank_path);
    dims = static_cast<int>(treebank.front()->labels.size());
    std::vector<Label> start = treebank.front()->labels;
    for (auto& l : start) l = Label(l.symbol);
    std::vector<std::string> rejected;
    Gmtg g0 = estimate_from_multitreebank(treebank, dims, start, &rejected);
    for (const auto& note : rejected) report->notes.push_back(prefix + "T4: " + note);
    g0.save_file(grammar0_path);
  } catch (const std::exception& e) {
    stage_fail(prefix + "T4", e.what());
  }
  report->stages_run.push_back(prefix + "T4");
  report->artifacts[prefix + "grammar0"] = grammar0_path;

  // T5: re-estimate
  std::string grammar_path = artifact("grammar.txt");
  std::string likelihood_path = artifact("likelihood.tsv");
  try {
    Gmtg g0 = Gmtg::load_file(grammar0_path);
    EstimationOptions options;
    options.iterations = config.train_iterations;
    options.mode = config.train_mode;
    EstimationRun run = train(g0, corpus, options);
    run.grammar.save_file(grammar_path);
    std::ofstream ll(likelihood_path);
    ll << "iteration\tlog_likelihood\n";
    for (size_t i = 0; i < run.log_likelihood.size(); ++i)
      ll << (i + 1) << '\t' << fmt_score(run.log_likelihood[i]) << '\n';
  } catch (const std::exception& e) {
    stage_fail(prefix + "T5", e.what());
  }
  report->stages_run.push_back(prefix + "T5");
  report->artifacts[prefix + "grammar"] = grammar_path;
  report->artifacts[prefix + "likelihood"] = likelihood_path;
  return grammar_path;
}

}  // namespace

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  PipelineConfig config;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("bad config line: " + line);
    config.apply(line.substr(0, eq), line.substr(eq + 1));
  }
  return config;
}

void PipelineConfig::apply(const std::string& key, const std::string& value) {
  if (key == "out_dir") out_dir = value;
  else if (key == "train_corpus") train_corpus = value;
  else if (key == "mono_grammar") mono_grammar = value;
  else if (key == "t3_fallback") t3_fallback = value;
  else if (key == "test_input") test_input = value;
  else if (key == "references") references = value;
  else if (key == "paraphrase_corpus") paraphrase_corpus = value;
  else if (key == "paraphrase_grammar") paraphrase_grammar = value;
  else if (key == "lexicon_iters") lexicon_iterations = std::stoi(value);
  else if (key == "iters") train_iterations = std::stoi(value);
  else if (key == "mode") train_mode = value;
  else if (key == "max_fan_out") max_fan_out = std::stoi(value);
  else if (key == "seed") seed = std::stoll(value);
  else if (key == "paraphrase_identity_lexicon") paraphrase_identity_lexicon = value != "0";
  else throw std::runtime_error("unknown config key: " + key);
}

PipelineReport run_pipeline(const PipelineConfig& config) {
  namespace fs = std::filesystem;
  if (config.out_dir.empty()) throw std::runtime_error("pipeline needs out_dir");
  if (config.train_corpus.empty()) throw std::runtime_error("pipeline needs train_corpus");
  fs::create_directories(config.out_dir);

  PipelineReport report;
  std::string grammar_path =
      train_side(config, "", config.train_corpus, config.mono_grammar, false, &report);

  std::string paraphrase_path = config.paraphrase_grammar;
  if (paraphrase_path.empty() && !config.paraphrase_corpus.empty())
    paraphrase_path = train_side(config, "para_", config.paraphrase_corpus, "",
                                 config.paraphrase_identity_lexicon, &report);

  // A1-A2: translate the test input and linearize
  std::string translations_path = config.out_dir + "/translations.txt";
  std::string trees_path = config.out_dir + "/trees.txt";
  Corpus translations;
  if (!config.test_input.empty()) {
    try {
      Gmtg grammar = Gmtg::load_file(grammar_path);
      Corpus inputs = read_corpus_file(config.test_input);
      std::vector<MultitreePtr> trees;
      for (const auto& input : inputs) {
        TranslationResult r = translate(grammar, input);
        Multitext out;
        if (r.ok) {
          out.dims = r.yields;
          trees.push_back(r.tree->clone());
        } else {
          out.dims = input.dims;  // untranslatable input echoes through
          out.dims.resize(grammar.dims());
        }
        translations.push_back(std::move(out));
      }
      write_corpus_file(translations_path, translations);
      write_treebank_file(trees_path, trees);
    } catch (const std::exception& e) {
      stage_fail("A1", e.what());
    }
    report.stages_run.push_back("A1");
    report.stages_run.push_back("A2");
    report.artifacts["translations"] = translations_path;
    report.artifacts["trees"] = trees_path;
  }

  // E1: score each translated component against its reference
  if (!config.references.empty() && !paraphrase_path.empty() && !translations.empty()) {
    std::string scores_path = config.out_dir + "/scores.tsv";
    try {
      Gmtg paraphrase = Gmtg::load_file(paraphrase_path);
      Corpus refs = read_corpus_file(config.references);
      Corpus outputs = read_corpus_file(translations_path);
      if (refs.size() != outputs.size())
        throw std::runtime_error("reference and translation counts differ");
      std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> pairs;
      for (size_t i = 0; i < refs.size(); ++i)
        pairs.emplace_back(refs[i].dims.at(0), outputs[i].dims.back());
      CorpusScore scores = score_corpus(paraphrase, pairs);
      std::ofstream out(scores_path);
      out << "pair\tscore\tstatus\n";
      for (const auto& ps : scores.pairs)
        out << ps.id << '\t' << fmt_score(ps.score) << '\t' << (ps.parsed ? "parsed" : "unparsed")
            << '\n';
      out << "# geometric_mean\t" << fmt_score(scores.geometric_mean) << "\tunparsed="
          << scores.unparsed << '\n';
    } catch (const std::exception& e) {
      stage_fail("E1", e.what());
    }
    report.stages_run.push_back("E1");
    report.artifacts["scores"] = scores_path;
  }

  // machine-readable run summary; deterministic fields only
  std::string report_path = config.out_dir + "/report.txt";
  std::ofstream out(report_path);
  out << "seed=" << config.seed << '\n';
  for (const auto& stage : report.stages_run) out << "stage=" << stage << '\n';
  for (const auto& [name, path] : report.artifacts)
    out << "artifact " << name << '=' << fs::path(path).filename().string() << '\n';
  for (const auto& note : report.notes) out << "note " << note << '\n';
  report.artifacts["report"] = report_path;
  return report;
}

}  // namespace semparse
