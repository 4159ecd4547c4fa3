#include "semparse/engine.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <map>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace semparse {

std::string ucs_tie_key(const Term& t) {
  if (t.kind() != TermKind::Nonterminal) return t.sig();
  std::string out;
  for (const auto& l : t.labels()) {
    if (!out.empty()) out += ',';
    out += l.inactive() ? "\x7f" : l.symbol;
  }
  return out;
}

SideCondition prune_beam_threshold(double theta) {
  return [theta](const Candidate& c, double mass, const Chart& chart) {
    if (!c.consequent.is_forward_item()) return true;
    double best = chart.best_in_class(c.consequent.activity_mask(), c.consequent.total_width());
    return best <= 0.0 || mass >= theta * best;
  };
}

SideCondition prune_beam_width(int width) {
  return [width](const Candidate& c, double mass, const Chart& chart) {
    if (!c.consequent.is_forward_item()) return true;
    const auto* masses =
        chart.class_masses(c.consequent.activity_mask(), c.consequent.total_width());
    if (!masses) return true;
    int above = 0;
    for (double m : *masses) above += (m > mass);
    return above < width;
  };
}

namespace {

struct Pending {
  Candidate candidate;
  // bottom-up: (phase, width key); value-ordered: product mass
  int phase = 0;
  int width = 0;
  double mass = 0.0;
  std::string tie;
  std::uint64_t seq = 0;
};

struct BottomUpOrder {
  bool operator()(const Pending& a, const Pending& b) const {
    if (a.phase != b.phase) return a.phase > b.phase;  // min-heap on phase
    if (a.width != b.width) return a.width > b.width;
    return a.seq > b.seq;
  }
};

struct UcsOrder {
  bool operator()(const Pending& a, const Pending& b) const {
    if (a.mass != b.mass) return a.mass < b.mass;  // max-heap on mass
    if (a.tie != b.tie) return a.tie > b.tie;
    return a.seq > b.seq;
  }
};

class Run {
 public:
  Run(const Logic& logic, const GrammarEvaluator& grammar, const Multitext& input,
      const EngineConfig& config)
      : logic_(logic),
        grammar_(grammar),
        input_(input),
        config_(config),
        semiring_(config.semiring),
        chart_(semiring_),
        ucs_(config.strategy == "ucs") {
    if (config_.strategy != "bottomup" && config_.strategy != "ucs")
      throw ConfigurationError("unknown search strategy: " + config_.strategy);
    if (ucs_ && !semiring_.ordered())
      throw ConfigurationError("uniform-cost search needs an ordered semiring, not " +
                               semiring_.flag());
    if (config_.incremental && !semiring_.idempotent())
      throw ConfigurationError("incremental value updates need an idempotent semiring");
  }

  Chart run() {
    logic_.check_input(grammar_, input_);
    chart_.stats.keep_fire_log = config_.log_firings;
    const auto started = std::chrono::steady_clock::now();

    for (const auto& [term, weight] : logic_.axioms(grammar_, input_)) {
      chart_.init_axiom(term, weight);
      subunit_ = subunit_ && weight <= 1.0 + 1e-12;
    }
    for (const auto& cand : logic_.seed(grammar_, input_)) push(cand);
    // axiom items and terminals trigger the first wave of inferences
    for (const auto& t : chart_.terminal_axioms()) trigger(t);
    for (const auto& t : chart_.forward_items()) trigger(t);
    for (const auto& t : chart_.reverse_items()) trigger(t);

    std::string reason;
    while (true) {
      chart_.stats.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      if (config_.termination.max_inferences &&
          chart_.stats.inferences >= config_.termination.max_inferences) {
        reason = "max-inferences";
        break;
      }
      if (config_.termination.max_seconds > 0 &&
          chart_.stats.seconds >= config_.termination.max_seconds) {
        reason = "max-seconds";
        break;
      }
      if (config_.termination.max_terms && chart_.stored_terms() >= config_.termination.max_terms) {
        reason = "max-terms";
        break;
      }
      const Pending* top = peek();
      if (!top) {
        reason = "quiescent";
        break;
      }
      if (goal_reached(top)) {
        reason = "goal";
        break;
      }
      Pending p = pop();
      apply(p.candidate);
      if (config_.check_consistency) assert(chart_.consistent());
    }
    chart_.stats.termination = reason;
    chart_.stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return std::move(chart_);
  }

 private:
  // no further inference can change any goal value: all goals hold
  // non-zero values and, under a value-ordered strategy with an
  // idempotent semiring and sub-unit weights, every pending product is
  // strictly below the weakest goal
  bool goal_reached(const Pending* top) {
    const auto& goals = config_.termination.goal_terms;
    if (goals.empty() || !ucs_ || !semiring_.idempotent() || !subunit_) return false;
    double weakest = 0.0;
    bool first = true;
    for (const auto& g : goals) {
      Value v = chart_.value(g);
      if (semiring_.is_zero(v)) return false;
      double m = semiring_.mass(v);
      weakest = first ? m : std::min(weakest, m);
      first = false;
    }
    return top->mass < weakest;
  }

  double product_mass(const Candidate& c) const {
    double m = 1.0;
    for (const auto& x : c.antecedents) {
      if (chart_.has(x)) {
        m *= chart_.mass(x);
      } else {
        bool lazy = false;
        for (const auto& [t, w] : c.lazy_axioms)
          if (t == x) {
            m *= w;
            lazy = true;
            break;
          }
        if (!lazy) m = 0.0;
      }
    }
    return m;
  }

  std::vector<std::uint64_t> versions(const AntSet& ants) const {
    std::vector<std::uint64_t> out;
    out.reserve(ants.size());
    for (const auto& x : ants) out.push_back(chart_.version(x));
    return out;
  }

  void push(const Candidate& cand) {
    Pending p;
    p.seq = ++seq_;
    if (ucs_) {
      p.mass = product_mass(cand);
      p.tie = ucs_tie_key(cand.consequent);
    } else {
      p.phase = cand.consequent.reverse() ? 1 : 0;
      int w = cand.consequent.total_width();
      p.width = cand.consequent.reverse() ? -w : w;
    }
    p.candidate = cand;
    if (ucs_)
      ucs_heap_.push(std::move(p));
    else
      bu_heap_.push(std::move(p));
  }

  // drop entries that were already applied at the members' current
  // versions; refresh stale value-ordered priorities
  const Pending* peek() {
    while (true) {
      const Pending* top = nullptr;
      if (ucs_ && !ucs_heap_.empty()) top = &ucs_heap_.top();
      if (!ucs_ && !bu_heap_.empty()) top = &bu_heap_.top();
      if (!top) return nullptr;
      auto seen = applied_.find(top->candidate.key());
      if (seen != applied_.end() && seen->second == versions(top->candidate.antecedents)) {
        drop_top();
        continue;
      }
      if (ucs_) {
        double now = product_mass(top->candidate);
        if (now != top->mass) {
          Pending refreshed = *top;
          refreshed.mass = now;
          drop_top();
          ucs_heap_.push(std::move(refreshed));
          continue;
        }
      }
      return top;
    }
  }

  void drop_top() {
    if (ucs_)
      ucs_heap_.pop();
    else
      bu_heap_.pop();
  }

  Pending pop() {
    Pending p = ucs_ ? ucs_heap_.top() : bu_heap_.top();
    drop_top();
    return p;
  }

  void apply(const Candidate& cand) {
    ++chart_.stats.candidates;
    applied_[cand.key()] = versions(cand.antecedents);
    for (const auto& [t, w] : cand.lazy_axioms) {
      if (!chart_.has(t)) {
        chart_.init_axiom(t, w);
        subunit_ = subunit_ && w <= 1.0 + 1e-12;
      }
    }

    double mass = 0.0;
    bool need_mass = !config_.side_conditions.empty() || config_.log_firings;
    if (need_mass) mass = product_mass(cand);

    bool pass = true;
    for (const auto& side : config_.side_conditions)
      pass = pass && side(cand, mass, chart_);

    bool changed;
    if (!pass) {
      ++chart_.stats.pruned;
      changed = chart_.remove_ant_set(cand.consequent, cand.antecedents);
    } else {
      changed = chart_.add_ant_set(cand.consequent, cand.antecedents, config_.incremental);
      ++chart_.stats.inferences;
      ++chart_.stats.rule_firings[cand.rule];
      if (config_.log_firings) chart_.stats.fire_log.emplace_back(cand.consequent, mass);
    }
    remember_uses(cand);
    if (changed) trigger(cand.consequent);
  }

  void remember_uses(const Candidate& cand) {
    if (!uses_keys_.insert(cand.key()).second) return;
    for (const auto& x : cand.antecedents)
      if (x.kind() != TermKind::Grammar) uses_[x].push_back(cand);
  }

  void trigger(const Term& t) {
    for (const auto& cand : logic_.triggered(t, chart_, grammar_)) push(cand);
    auto it = uses_.find(t);
    if (it != uses_.end())
      for (const auto& cand : it->second) push(cand);
  }

  const Logic& logic_;
  const GrammarEvaluator& grammar_;
  const Multitext& input_;
  const EngineConfig& config_;
  Semiring semiring_;
  Chart chart_;
  bool ucs_;
  bool subunit_ = true;
  std::uint64_t seq_ = 0;
  std::priority_queue<Pending, std::vector<Pending>, BottomUpOrder> bu_heap_;
  std::priority_queue<Pending, std::vector<Pending>, UcsOrder> ucs_heap_;
  std::unordered_map<std::string, std::vector<std::uint64_t>> applied_;
  std::unordered_set<std::string> uses_keys_;
  std::unordered_map<Term, std::vector<Candidate>, TermHash> uses_;
};

}  // namespace

Chart parse(const Logic& logic, const GrammarEvaluator& grammar, const Multitext& input,
            const EngineConfig& config) {
  Run run(logic, grammar, input, config);
  return run.run();
}

}  // namespace semparse
