#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace semparse::oracles {

namespace {

// all ways to cut (begin, end) into `parts` non-empty sub-intervals;
// each result lists the right boundary of every part
void enumerate_cuts(int begin, int end, int parts, std::vector<int>* cuts,
                    std::vector<std::vector<int>>* out) {
  if (parts == 1) {
    if (end - begin >= 1) {
      cuts->push_back(end);
      out->push_back(*cuts);
      cuts->pop_back();
    }
    return;
  }
  for (int c = begin + 1; c <= end - parts + 1; ++c) {
    cuts->push_back(c);
    enumerate_cuts(c, end, parts - 1, cuts, out);
    cuts->pop_back();
  }
}

struct DimSplit {
  DSpan tau, sigma;
};

// splits of one dimension's parent d-span into (tau, sigma) whose
// relativization reproduces `array`; runs pair up with parent intervals
void splits_for_dim(const DSpan& parent, const PrecedenceArray& array,
                    std::vector<DimSplit>* out) {
  if (array.is_empty()) {
    if (parent.is_empty()) out->push_back({DSpan(), DSpan()});
    return;
  }
  if (array.fan_out() != parent.fan_out()) return;
  const auto& runs = array.runs();
  std::vector<std::vector<std::vector<int>>> run_cuts(runs.size());
  for (size_t r = 0; r < runs.size(); ++r) {
    std::vector<int> scratch;
    enumerate_cuts(parent.intervals()[r].begin, parent.intervals()[r].end,
                   static_cast<int>(runs[r].size()), &scratch, &run_cuts[r]);
    if (run_cuts[r].empty()) return;
  }
  std::vector<size_t> pick(runs.size(), 0);
  while (true) {
    std::vector<Interval> tau, sigma;
    for (size_t r = 0; r < runs.size(); ++r) {
      int cursor = parent.intervals()[r].begin;
      const auto& cuts = run_cuts[r][pick[r]];
      for (size_t k = 0; k < runs[r].size(); ++k) {
        Interval iv{cursor, cuts[k]};
        cursor = cuts[k];
        (runs[r][k] == 1 ? tau : sigma).push_back(iv);
      }
    }
    out->push_back({DSpan(tau), DSpan(sigma)});
    size_t r = 0;
    while (r < runs.size() && ++pick[r] == run_cuts[r].size()) pick[r++] = 0;
    if (r == runs.size()) break;
  }
}

}  // namespace

Enumerator::Enumerator(const Gmtg& grammar, const Multitext& input)
    : grammar_(grammar), input_(input) {}

std::string Enumerator::item_key(const std::vector<Label>& labels,
                                 const std::vector<DSpan>& spans) const {
  std::string key = labels_str(labels) + ";";
  for (const auto& s : spans) key += s.str();
  return key;
}

const std::vector<OracleDerivPtr>& Enumerator::derivations(const std::vector<Label>& labels,
                                                           const std::vector<DSpan>& spans) {
  std::string key = item_key(labels, spans);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  memo_[key] = {};
  std::vector<OracleDerivPtr> out;

  // terminating derivations: one active dimension, one word
  int active = -1;
  bool single = true;
  for (size_t d = 0; d < labels.size(); ++d) {
    if (labels[d].inactive()) continue;
    single = single && active < 0;
    active = static_cast<int>(d);
  }
  if (single && active >= 0 && spans[active].fan_out() == 1 && spans[active].width() == 1) {
    int pos = spans[active].intervals()[0].end;
    if (pos >= 1 && pos <= input_.length(active)) {
      for (const auto& wp : grammar_.terminating(active, input_.dims[active][pos - 1])) {
        if (wp.prod->lhs[active].stripped() != labels[active]) continue;
        auto node = std::make_shared<OracleDeriv>();
        node->production = wp.prod;
        node->labels = labels;
        node->spans = spans;
        node->probability = wp.weight * input_.token_weight(active, pos);
        out.push_back(std::move(node));
      }
    }
  }

  // nonterminating derivations over every split the PAV admits
  for (const auto& prod : grammar_.all_productions()) {
    if (prod->kind != ProductionKind::Nonterminating) continue;
    if (strip_labels(prod->lhs) != labels) continue;
    std::vector<std::vector<DimSplit>> per_dim(labels.size());
    bool feasible = true;
    for (size_t d = 0; d < labels.size() && feasible; ++d) {
      splits_for_dim(spans[d], prod->pav.arrays[d], &per_dim[d]);
      feasible = !per_dim[d].empty();
    }
    if (!feasible) continue;
    std::vector<size_t> pick(labels.size(), 0);
    while (true) {
      std::vector<DSpan> tau(labels.size()), sigma(labels.size());
      for (size_t d = 0; d < labels.size(); ++d) {
        tau[d] = per_dim[d][pick[d]].tau;
        sigma[d] = per_dim[d][pick[d]].sigma;
      }
      for (const auto& left : derivations(strip_labels(prod->y), tau)) {
        for (const auto& right : derivations(strip_labels(prod->z), sigma)) {
          auto node = std::make_shared<OracleDeriv>();
          node->production = prod;
          node->labels = labels;
          node->spans = spans;
          node->children = {left, right};
          node->probability = prod->weight * left->probability * right->probability;
          out.push_back(std::move(node));
        }
      }
      size_t d = 0;
      while (d < labels.size() && ++pick[d] == per_dim[d].size()) pick[d++] = 0;
      if (d == labels.size()) break;
    }
  }

  memo_[key] = std::move(out);
  return memo_.at(key);
}

const std::vector<OracleDerivPtr>& Enumerator::goal_derivations() {
  std::vector<DSpan> full(grammar_.dims());
  for (int d = 0; d < grammar_.dims(); ++d) full[d] = DSpan::single(0, input_.length(d));
  return derivations(strip_labels(grammar_.start()), full);
}

long long Enumerator::count(const std::vector<Label>& labels, const std::vector<DSpan>& spans) {
  return static_cast<long long>(derivations(labels, spans).size());
}

double Enumerator::inside(const std::vector<Label>& labels, const std::vector<DSpan>& spans) {
  double sum = 0.0;
  for (const auto& d : derivations(labels, spans)) sum += d->probability;
  return sum;
}

double Enumerator::viterbi(const std::vector<Label>& labels, const std::vector<DSpan>& spans) {
  double best = 0.0;
  for (const auto& d : derivations(labels, spans)) best = std::max(best, d->probability);
  return best;
}

void Enumerator::outside_walk(const OracleDerivPtr& node, double outside_weight) {
  std::string key = item_key(node->labels, node->spans);
  outside_sums_[key] += outside_weight;
  outside_counts_[key] += 1;
  if (node->children.empty()) return;
  const double w = node->production->weight;
  outside_walk(node->children[0], outside_weight * w * node->children[1]->probability);
  outside_walk(node->children[1], outside_weight * w * node->children[0]->probability);
}

void Enumerator::prepare_outside() {
  outside_ready_ = true;
  for (const auto& g : goal_derivations()) outside_walk(g, 1.0);
}

double Enumerator::outside_sum(const std::vector<Label>& labels,
                               const std::vector<DSpan>& spans) {
  if (!outside_ready_) prepare_outside();
  auto it = outside_sums_.find(item_key(labels, spans));
  return it == outside_sums_.end() ? 0.0 : it->second;
}

long long Enumerator::outside_count(const std::vector<Label>& labels,
                                    const std::vector<DSpan>& spans) {
  if (!outside_ready_) prepare_outside();
  auto it = outside_counts_.find(item_key(labels, spans));
  return it == outside_counts_.end() ? 0 : it->second;
}

std::map<std::string, double> Enumerator::expected_counts() {
  std::map<std::string, double> out;
  auto& goals = goal_derivations();
  double total = 0.0;
  for (const auto& g : goals) total += g->probability;
  if (!(total > 0.0)) return out;
  std::function<void(const OracleDerivPtr&, double)> walk = [&](const OracleDerivPtr& node,
                                                                double weight) {
    out[node->production->key] += weight;
    for (const auto& c : node->children) walk(c, weight);
  };
  for (const auto& g : goals) walk(g, g->probability / total);
  return out;
}

// --- CKY recognizer -----------------------------------------------------------

bool cky_accepts(const Gmtg& grammar, const std::vector<std::string>& words) {
  const int n = static_cast<int>(words.size());
  if (grammar.dims() != 1) throw std::runtime_error("cky oracle needs a one-dimensional grammar");
  std::set<std::pair<std::pair<int, int>, std::string>> chart;
  for (int i = 1; i <= n; ++i)
    for (const auto& wp : grammar.terminating(0, words[i - 1]))
      if (wp.weight > 0.0) chart.insert({{i - 1, i}, wp.prod->lhs[0].symbol});
  for (int width = 2; width <= n; ++width) {
    for (int i = 0; i + width <= n; ++i) {
      int k = i + width;
      for (int j = i + 1; j < k; ++j) {
        for (const auto& prod : grammar.all_productions()) {
          if (prod->kind != ProductionKind::Nonterminating) continue;
          if (prod->weight <= 0.0) continue;
          if (!chart.count({{i, j}, prod->y[0].symbol})) continue;
          if (!chart.count({{j, k}, prod->z[0].symbol})) continue;
          chart.insert({{i, k}, prod->lhs[0].symbol});
        }
      }
    }
  }
  return chart.count({{0, n}, grammar.start()[0].symbol}) != 0;
}

// --- classical 1-D inside-outside ---------------------------------------------

Gmtg classic_inside_outside_step(const Gmtg& grammar,
                                 const std::vector<std::vector<std::string>>& sentences) {
  std::map<std::string, double> counts;
  for (const auto& words : sentences) {
    const int n = static_cast<int>(words.size());
    std::map<std::pair<std::pair<int, int>, std::string>, double> beta, alpha;
    for (int i = 1; i <= n; ++i)
      for (const auto& wp : grammar.terminating(0, words[i - 1]))
        beta[{{i - 1, i}, wp.prod->lhs[0].symbol}] += wp.weight;
    for (int width = 2; width <= n; ++width) {
      for (int i = 0; i + width <= n; ++i) {
        int k = i + width;
        for (int j = i + 1; j < k; ++j) {
          for (const auto& prod : grammar.all_productions()) {
            if (prod->kind != ProductionKind::Nonterminating) continue;
            auto ly = beta.find({{i, j}, prod->y[0].symbol});
            auto lz = beta.find({{j, k}, prod->z[0].symbol});
            if (ly == beta.end() || lz == beta.end()) continue;
            beta[{{i, k}, prod->lhs[0].symbol}] += prod->weight * ly->second * lz->second;
          }
        }
      }
    }
    auto total_it = beta.find({{0, n}, grammar.start()[0].symbol});
    if (total_it == beta.end() || !(total_it->second > 0.0)) continue;
    double total = total_it->second;

    alpha[{{0, n}, grammar.start()[0].symbol}] = 1.0;
    for (int width = n; width >= 2; --width) {
      for (int i = 0; i + width <= n; ++i) {
        int k = i + width;
        for (const auto& prod : grammar.all_productions()) {
          if (prod->kind != ProductionKind::Nonterminating) continue;
          auto pa = alpha.find({{i, k}, prod->lhs[0].symbol});
          if (pa == alpha.end()) continue;
          for (int j = i + 1; j < k; ++j) {
            auto ly = beta.find({{i, j}, prod->y[0].symbol});
            auto lz = beta.find({{j, k}, prod->z[0].symbol});
            if (ly == beta.end() || lz == beta.end()) continue;
            alpha[{{i, j}, prod->y[0].symbol}] += pa->second * prod->weight * lz->second;
            alpha[{{j, k}, prod->z[0].symbol}] += pa->second * prod->weight * ly->second;
          }
        }
      }
    }

    for (int i = 1; i <= n; ++i) {
      for (const auto& wp : grammar.terminating(0, words[i - 1])) {
        auto pa = alpha.find({{i - 1, i}, wp.prod->lhs[0].symbol});
        if (pa == alpha.end()) continue;
        counts[wp.prod->key] += pa->second * wp.weight / total;
      }
    }
    for (const auto& prod : grammar.all_productions()) {
      if (prod->kind != ProductionKind::Nonterminating) continue;
      for (int i = 0; i < n; ++i) {
        for (int k = i + 2; k <= n; ++k) {
          auto pa = alpha.find({{i, k}, prod->lhs[0].symbol});
          if (pa == alpha.end()) continue;
          for (int j = i + 1; j < k; ++j) {
            auto ly = beta.find({{i, j}, prod->y[0].symbol});
            auto lz = beta.find({{j, k}, prod->z[0].symbol});
            if (ly == beta.end() || lz == beta.end()) continue;
            counts[prod->key] += pa->second * prod->weight * ly->second * lz->second / total;
          }
        }
      }
    }
  }

  std::map<std::string, double> lhs_totals;
  for (const auto& p : grammar.all_productions()) {
    const std::string& sym = p->lhs[p->kind == ProductionKind::Terminating ? p->dim : 0].symbol;
    lhs_totals[sym] += counts.count(p->key) ? counts[p->key] : 0.0;
  }
  Gmtg next(1, grammar.start());
  for (const auto& p : grammar.all_productions()) {
    Production q = *p;
    const std::string& sym = p->lhs[p->kind == ProductionKind::Terminating ? p->dim : 0].symbol;
    if (lhs_totals[sym] > 0.0)
      q.weight = (counts.count(p->key) ? counts[p->key] : 0.0) / lhs_totals[sym];
    next.add(q);
  }
  next.set_normalized(true);
  return next;
}

// --- random instances ----------------------------------------------------------

namespace {

std::string dim_token(int d, int k) {
  return std::string(1, static_cast<char>('a' + d)) + std::to_string(k + 1);
}

std::vector<PrecedenceArray> single_link_arrays(int index, int max_fan_out) {
  std::vector<PrecedenceArray> out;
  for (int f = 1; f <= max_fan_out; ++f) {
    std::vector<std::vector<int>> runs(f, std::vector<int>{index});
    out.push_back(PrecedenceArray(runs));
  }
  return out;
}

}  // namespace

Gmtg random_pgmtg(const GrammarSpec& spec, std::mt19937* rng) {
  std::uniform_int_distribution<int> coin(0, 1);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(*rng); };

  std::vector<std::string> symbols;
  for (int i = 0; i < spec.nonterminals; ++i) symbols.push_back(std::string(1, 'A' + i));
  std::vector<Label> start(spec.dims, Label(symbols[0]));
  auto two_link = enumerate_two_link_arrays(std::max(spec.max_fan_out, 1));

  while (true) {
    Gmtg g(spec.dims, start);
    for (int d = 0; d < spec.dims; ++d)
      for (const auto& s : symbols)
        for (int k = 0; k < 1 + coin(*rng); ++k)
          g.add(Production::terminating(spec.dims, d, Label(s), dim_token(d, pick(spec.vocabulary)),
                                        0.2 + 0.8 * pick(100) / 100.0));

    for (int p = 0; p < spec.nonterminating; ++p) {
      const bool first = p == 0;
      std::vector<bool> active(spec.dims, false);
      for (int d = 0; d < spec.dims; ++d) active[d] = first || coin(*rng);
      active[pick(spec.dims)] = true;
      int active_dims = 0;
      for (int d = 0; d < spec.dims; ++d) active_dims += active[d];
      int slack = std::max(spec.max_fan_out, active_dims) - active_dims;

      std::vector<Label> lhs(spec.dims), y(spec.dims), z(spec.dims);
      std::vector<PrecedenceArray> arrays(spec.dims);
      for (int d = 0; d < spec.dims; ++d) {
        if (!active[d]) continue;
        lhs[d] = first ? start[d] : Label(symbols[pick(static_cast<int>(symbols.size()))]);
        const int mode = first ? 2 : pick(3);  // 0 = first link only, 1 = second only, 2 = both
        std::vector<PrecedenceArray> pool;
        if (mode == 0) {
          y[d] = Label(symbols[pick(static_cast<int>(symbols.size()))]);
          pool = single_link_arrays(1, 1 + slack);
        } else if (mode == 1) {
          z[d] = Label(symbols[pick(static_cast<int>(symbols.size()))]);
          pool = single_link_arrays(2, 1 + slack);
        } else {
          y[d] = Label(symbols[pick(static_cast<int>(symbols.size()))]);
          z[d] = Label(symbols[pick(static_cast<int>(symbols.size()))]);
          for (const auto& a : two_link)
            if (a.fan_out() <= 1 + slack) pool.push_back(a);
        }
        arrays[d] = pool[pick(static_cast<int>(pool.size()))];
        slack -= arrays[d].fan_out() - 1;
      }
      bool y_any = false, z_any = false;
      for (int d = 0; d < spec.dims; ++d) {
        y_any = y_any || !y[d].inactive();
        z_any = z_any || !z[d].inactive();
      }
      if (!y_any || !z_any) continue;
      g.add(Production::nonterminating(lhs, Pav(arrays), y, z, 0.2 + 0.8 * pick(100) / 100.0));
    }

    // keep only productions whose RHS links can bottom out
    std::set<std::string> productive;
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& p : g.all_productions()) {
        if (productive.count(labels_str(strip_labels(p->lhs)))) continue;
        bool now = p->kind == ProductionKind::Terminating ||
                   (productive.count(labels_str(strip_labels(p->y))) &&
                    productive.count(labels_str(strip_labels(p->z))));
        if (now) {
          productive.insert(labels_str(strip_labels(p->lhs)));
          grew = true;
        }
      }
    }
    if (!productive.count(labels_str(strip_labels(start)))) continue;
    Gmtg pruned(spec.dims, start);
    bool any_nt = false;
    for (const auto& p : g.all_productions()) {
      if (p->kind == ProductionKind::Nonterminating) {
        if (!productive.count(labels_str(strip_labels(p->y))) ||
            !productive.count(labels_str(strip_labels(p->z))))
          continue;
        any_nt = true;
      }
      pruned.add(*p);
    }
    if (!any_nt) continue;
    if (spec.normalized) pruned.normalize_weights();
    return pruned;
  }
}

MultitreePtr sample_tree(const Gmtg& grammar, std::mt19937* rng, int max_depth, int max_len) {
  std::function<MultitreePtr(const std::vector<Label>&, int)> expand =
      [&](const std::vector<Label>& link, int depth) -> MultitreePtr {
    if (depth > max_depth) return nullptr;
    std::vector<WeightedProduction> options;
    for (const auto& p : grammar.all_productions())
      if (strip_labels(p->lhs) == link) options.push_back({p, p->weight});
    if (options.empty()) return nullptr;
    double total = 0.0;
    for (const auto& o : options) total += o.weight;
    std::uniform_real_distribution<double> u(0.0, total);
    double roll = u(*rng);
    const WeightedProduction* chosen = &options.back();
    for (const auto& o : options) {
      roll -= o.weight;
      if (roll <= 0.0) {
        chosen = &o;
        break;
      }
    }
    auto node = std::make_unique<Multitree>();
    node->labels = strip_labels(chosen->prod->lhs);
    if (chosen->prod->kind == ProductionKind::Terminating) {
      auto leaf = std::make_unique<Multitree>();
      leaf->dim = chosen->prod->dim;
      leaf->token = chosen->prod->terminal;
      node->children.push_back(std::move(leaf));
      return node;
    }
    node->pav = chosen->prod->pav;
    auto left = expand(strip_labels(chosen->prod->y), depth + 1);
    auto right = expand(strip_labels(chosen->prod->z), depth + 1);
    if (!left || !right) return nullptr;
    node->children.push_back(std::move(left));
    node->children.push_back(std::move(right));
    return node;
  };
  auto tree = expand(strip_labels(grammar.start()), 0);
  if (!tree) return nullptr;
  for (int d = 0; d < grammar.dims(); ++d) {
    try {
      if (static_cast<int>(linearize(*tree, d).size()) > max_len) return nullptr;
    } catch (const LinearizeError&) {
      return nullptr;
    }
  }
  return tree;
}

Multitext yields_of(const Multitree& tree, int dims) {
  Multitext out;
  for (int d = 0; d < dims; ++d) out.dims.push_back(linearize(tree, d));
  return out;
}

}  // namespace semparse::oracles
