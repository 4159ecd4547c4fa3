// -*- mode: c++ -*-
//
// End-to-end driver: lexicon induction, hierarchical alignment,
// grammar induction, re-estimation, translation and scoring, with
// every stage's artifact written to disk and reloaded by the next.

#ifndef SEMPARSE_PIPELINE_HPP
#define SEMPARSE_PIPELINE_HPP

#include <map>
#include <string>
#include <vector>

namespace semparse {

struct PipelineConfig {
  std::string out_dir;
  std::string train_corpus;        // bitext for the translation-model stages
  std::string mono_grammar;        // structured grammar guiding alignment
  std::string t3_fallback;         // "lexicon-only" to align without one
  std::string test_input;          // multitext to translate
  std::string references;         // reference corpus for scoring
  std::string paraphrase_corpus;   // monolingual bitext: trains the scoring grammar
  std::string paraphrase_grammar;  // or a ready-made scoring grammar
  int lexicon_iterations = 5;
  int train_iterations = 5;
  std::string train_mode = "inside";
  int max_fan_out = 1;
  long long seed = 0;
  bool paraphrase_identity_lexicon = true;  // identity shortcut for the scoring side

  static PipelineConfig from_file(const std::string& path);
  void apply(const std::string& key, const std::string& value);
};

struct PipelineReport {
  std::vector<std::string> stages_run;
  std::map<std::string, std::string> artifacts;
  // human-readable stage notes (counts, likelihoods)
  std::vector<std::string> notes;
};

// Runs every stage the configuration enables.  Throws on the first
// stage failure, naming the stage.
PipelineReport run_pipeline(const PipelineConfig& config);

}  // namespace semparse

#endif
