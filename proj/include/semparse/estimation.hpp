// -*- mode: c++ -*-
//
// PGMTG parameter re-estimation with the round-trip logic, plus the
// bootstrap word-lexicon trainer.

#ifndef SEMPARSE_ESTIMATION_HPP
#define SEMPARSE_ESTIMATION_HPP

#include <string>
#include <vector>

#include "semparse/engine.hpp"
#include "semparse/grammar.hpp"
#include "semparse/multitext.hpp"

namespace semparse {

struct EstimationOptions {
  int iterations = 10;
  std::string mode = "inside";  // inside | nbest:<n>
  double smoothing_eps = 1e-6;  // 0 disables add-eps smoothing
  double rel_ll_tolerance = 1e-6;
  bool keep_snapshots = false;
  Termination limits;  // per-tuple resource limits
};

struct EstimationRun {
  Gmtg grammar;
  std::vector<double> log_likelihood;  // one entry per completed iteration
  std::vector<Gmtg> snapshots;
  int excluded_tuples = 0;  // zero-probability tuples in the last step
};

struct StepReport {
  double log_likelihood = 0.0;
  int excluded_tuples = 0;
};

// One expectation-maximization step: per tuple, run the round-trip
// logic to quiescence, pool posterior production counts across tuples,
// then renormalize per LHS link.
Gmtg inside_outside_step(const Gmtg& grammar, const Corpus& corpus, const Semiring& semiring,
                         double smoothing_eps, StepReport* report = nullptr,
                         const Termination& limits = {});

EstimationRun train(const Gmtg& start, const Corpus& corpus, const EstimationOptions& options);

// Bootstrap conditional word translation table from a bitext, with NULL
// on both sides.  Co-occurrence initialized.
WordLexicon lexicon_em(const Corpus& bitext, int iterations);

}  // namespace semparse

#endif
