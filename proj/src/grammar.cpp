#include "semparse/grammar.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace semparse {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// index keys keep heads but drop head-child flags: items never carry flags
std::string rhs_key(const std::vector<Label>& y, const std::vector<Label>& z) {
  return labels_str(strip_labels(y)) + "|" + labels_str(strip_labels(z));
}

}  // namespace

const std::vector<ProductionPtr>& GrammarEvaluator::all_productions() const {
  throw std::logic_error("grammar evaluator cannot enumerate its productions");
}

std::vector<WeightedProduction> GrammarEvaluator::nonterminating_by_lhs_y(
    const std::vector<Label>&, const std::vector<Label>&, const Pav&) const {
  throw std::logic_error("grammar evaluator does not support reverse-direction lookups");
}

std::vector<WeightedProduction> GrammarEvaluator::nonterminating_by_lhs_z(
    const std::vector<Label>&, const std::vector<Label>&, const Pav&) const {
  throw std::logic_error("grammar evaluator does not support reverse-direction lookups");
}

std::vector<WeightedProduction> GrammarEvaluator::lexical(int, const std::string&) const {
  return {};
}

double GrammarEvaluator::lookup_terminating(int d, const Label& x, const std::string& token) const {
  for (const auto& wp : terminating(d, token))
    if (wp.prod->lhs[d].stripped() == x.stripped()) return wp.weight;
  return 0.0;
}

double GrammarEvaluator::lookup_nonterminating(const std::vector<Label>& lhs, const Pav& pav,
                                               const std::vector<Label>& y,
                                               const std::vector<Label>& z) const {
  for (const auto& wp : nonterminating(y, z, pav.arrays)) {
    if (wp.prod->pav != pav) continue;
    if (strip_labels(wp.prod->lhs) != strip_labels(lhs)) continue;
    return wp.weight;
  }
  return 0.0;
}

// --- Gmtg ---------------------------------------------------------------

Gmtg::Gmtg(int dims, std::vector<Label> start) : dims_(dims), start_(std::move(start)) {
  if (dims_ < 1) throw GrammarParseError("grammar dimensionality must be positive");
  if (static_cast<int>(start_.size()) != dims_)
    throw GrammarParseError("start link dimensionality differs from grammar");
}

void Gmtg::validate(const Production& p) const {
  if (p.dims() != dims_)
    throw GrammarParseError("production dimensionality differs from grammar: " + p.key);
  if (p.weight < 0) throw GrammarParseError("negative weight: " + p.key);
  if (p.kind == ProductionKind::Terminating) {
    if (p.terminal.empty()) throw GrammarParseError("terminating production without terminal");
    return;
  }
  if (p.kind != ProductionKind::Nonterminating)
    throw GrammarParseError("lexical productions do not belong in a stored GMTG");
  bool y_active = false, z_active = false;
  for (int d = 0; d < dims_; ++d) {
    const bool lhs_on = !p.lhs[d].inactive();
    const bool y_on = !p.y[d].inactive();
    const bool z_on = !p.z[d].inactive();
    if (lhs_on != (y_on || z_on))
      throw GrammarParseError("LHS/RHS activity mismatch in dimension " + std::to_string(d + 1) +
                              ": " + p.key);
    if (p.pav.arrays[d].is_empty() != !lhs_on)
      throw GrammarParseError("precedence array activity mismatch in dimension " +
                              std::to_string(d + 1) + ": " + p.key);
    if (p.lhs[d].head_child)
      throw GrammarParseError("head-child flag on an LHS label: " + p.key);
    int want1 = 0, want2 = 0;
    for (int index : p.pav.arrays[d].flat()) {
      if (index == 1)
        ++want1;
      else if (index == 2)
        ++want2;
      else
        throw GrammarParseError("precedence array index " + std::to_string(index) +
                                " out of range for two RHS links: " + p.key);
    }
    if ((want1 > 0) != y_on || (want2 > 0) != z_on)
      throw GrammarParseError("precedence array references an inactive link in dimension " +
                              std::to_string(d + 1) + ": " + p.key);
    y_active = y_active || y_on;
    z_active = z_active || z_on;
  }
  if (!y_active || !z_active)
    throw GrammarParseError("nonterminating production needs two nonterminal links: " + p.key);
}

void Gmtg::add(const Production& raw) {
  Production p = raw;
  if (p.kind == ProductionKind::Nonterminating) {
    // bring the PAV into normal form; the two RHS links may swap
    LinkMatrix links(dims_, std::vector<std::string>(2));
    for (int d = 0; d < dims_; ++d) {
      links[d][0] = p.y[d].inactive() ? "" : p.y[d].str();
      links[d][1] = p.z[d].inactive() ? "" : p.z[d].str();
    }
    NormalizedPav norm = normalize_pav(p.pav, links);
    if (norm.old_to_new[0] == 2) std::swap(p.y, p.z);
    p.pav = norm.pav;
    p.rebuild_key();
  }
  validate(p);

  auto it = by_key_.find(p.key);
  if (it != by_key_.end()) {
    // duplicate productions merge by weight addition
    productions_[it->second]->weight += p.weight;
    return;
  }
  auto ptr = std::make_shared<Production>(std::move(p));
  size_t idx = productions_.size();
  productions_.push_back(ptr);
  view_.push_back(ptr);
  by_key_[ptr->key] = idx;
  if (ptr->kind == ProductionKind::Terminating) {
    term_by_dim_token_[{ptr->dim, ptr->terminal}].push_back(idx);
    term_by_dim_[ptr->dim].push_back(idx);
  } else {
    nt_by_rhs_[rhs_key(ptr->y, ptr->z)].push_back(idx);
    nt_by_lhs_y_[labels_str(strip_labels(ptr->lhs)) + "|" +
                 labels_str(strip_labels(ptr->y))]
        .push_back(idx);
    nt_by_lhs_z_[labels_str(strip_labels(ptr->lhs)) + "|" +
                 labels_str(strip_labels(ptr->z))]
        .push_back(idx);
  }
}

int Gmtg::fan_out() const {
  int f = 0;
  for (const auto& p : productions_)
    if (p->kind == ProductionKind::Nonterminating) f = std::max(f, p->fan_out());
  return f;
}

std::vector<WeightedProduction> Gmtg::terminating(int d, const std::string& token) const {
  std::vector<WeightedProduction> out;
  auto it = term_by_dim_token_.find({d, token});
  if (it == term_by_dim_token_.end()) return out;
  for (size_t idx : it->second) out.push_back({view_[idx], productions_[idx]->weight});
  return out;
}

std::vector<WeightedProduction> Gmtg::terminating_in_dim(int d) const {
  std::vector<WeightedProduction> out;
  auto it = term_by_dim_.find(d);
  if (it == term_by_dim_.end()) return out;
  for (size_t idx : it->second) out.push_back({view_[idx], productions_[idx]->weight});
  return out;
}

std::vector<WeightedProduction> Gmtg::nonterminating(
    const std::vector<Label>& y, const std::vector<Label>& z,
    const std::vector<PrecedenceArray>& input_arrays) const {
  std::vector<WeightedProduction> out;
  auto it = nt_by_rhs_.find(rhs_key(y, z));
  if (it == nt_by_rhs_.end()) return out;
  for (size_t idx : it->second) {
    const auto& p = *productions_[idx];
    bool match = input_arrays.size() <= p.pav.arrays.size();
    for (size_t d = 0; match && d < input_arrays.size(); ++d)
      match = p.pav.arrays[d] == input_arrays[d];
    if (match) out.push_back({view_[idx], p.weight});
  }
  return out;
}

std::vector<WeightedProduction> Gmtg::nonterminating_by_lhs_y(const std::vector<Label>& lhs,
                                                              const std::vector<Label>& y,
                                                              const Pav& pav) const {
  std::vector<WeightedProduction> out;
  auto it = nt_by_lhs_y_.find(labels_str(strip_labels(lhs)) + "|" +
                              labels_str(strip_labels(y)));
  if (it == nt_by_lhs_y_.end()) return out;
  for (size_t idx : it->second)
    if (productions_[idx]->pav == pav) out.push_back({view_[idx], productions_[idx]->weight});
  return out;
}

std::vector<WeightedProduction> Gmtg::nonterminating_by_lhs_z(const std::vector<Label>& lhs,
                                                              const std::vector<Label>& z,
                                                              const Pav& pav) const {
  std::vector<WeightedProduction> out;
  auto it = nt_by_lhs_z_.find(labels_str(strip_labels(lhs)) + "|" +
                              labels_str(strip_labels(z)));
  if (it == nt_by_lhs_z_.end()) return out;
  for (size_t idx : it->second)
    if (productions_[idx]->pav == pav) out.push_back({view_[idx], productions_[idx]->weight});
  return out;
}

double Gmtg::normalization_error() const {
  std::map<std::string, double> sums;
  for (const auto& p : productions_) sums[labels_str(strip_labels(p->lhs))] += p->weight;
  double err = 0.0;
  for (const auto& [lhs, sum] : sums) err = std::max(err, std::abs(sum - 1.0));
  return err;
}

void Gmtg::normalize_weights(double add_eps) {
  std::map<std::string, double> sums;
  for (auto& p : productions_) {
    p->weight += add_eps;
    sums[labels_str(strip_labels(p->lhs))] += p->weight;
  }
  for (auto& p : productions_) {
    double sum = sums[labels_str(strip_labels(p->lhs))];
    if (sum > 0) p->weight /= sum;
  }
  normalized_ = true;
}

void Gmtg::set_weight(const std::string& key, double w) {
  auto it = by_key_.find(key);
  if (it == by_key_.end()) throw GrammarParseError("no production with key: " + key);
  productions_[it->second]->weight = w;
}

std::vector<std::string> Gmtg::nonterminal_symbols() const {
  std::vector<std::string> out;
  auto note = [&](const Label& l) {
    if (!l.inactive() && std::find(out.begin(), out.end(), l.symbol) == out.end())
      out.push_back(l.symbol);
  };
  for (const auto& p : productions_) {
    for (const auto& l : p->lhs) note(l);
    if (p->kind == ProductionKind::Nonterminating) {
      for (const auto& l : p->y) note(l);
      for (const auto& l : p->z) note(l);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> Gmtg::terminals_in_dim(int d) const {
  std::vector<std::string> out;
  for (const auto& p : productions_)
    if (p->kind == ProductionKind::Terminating && p->dim == d &&
        std::find(out.begin(), out.end(), p->terminal) == out.end())
      out.push_back(p->terminal);
  std::sort(out.begin(), out.end());
  return out;
}

Gmtg Gmtg::load(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw GrammarParseError("line " + std::to_string(lineno) + ": " + what);
  };

  Gmtg g;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string tag;
    is >> tag;
    if (!seen_header) {
      if (tag != "gmtg") fail("grammar file must start with a gmtg header");
      int dims = 0;
      std::vector<Label> start;
      bool normalized = false;
      std::string field;
      while (is >> field) {
        if (field.rfind("D=", 0) == 0)
          dims = std::stoi(field.substr(2));
        else if (field.rfind("start=", 0) == 0)
          start = parse_labels(field.substr(6));
        else if (field == "normalized")
          normalized = true;
        else
          fail("unknown header field: " + field);
      }
      if (dims < 1 || start.empty()) fail("header needs D=<dims> and start=<labels>");
      g = Gmtg(dims, std::move(start));
      g.set_normalized(normalized);
      seen_header = true;
      continue;
    }
    try {
      if (tag == "T") {
        std::string dfield, lhs, arrow, token, at;
        double w = 0.0;
        is >> dfield >> lhs >> arrow >> token >> at >> w;
        if (dfield.rfind("d=", 0) != 0 || arrow != "->" || at != "@")
          fail("bad terminating production syntax");
        int d = std::stoi(dfield.substr(2)) - 1;
        if (d < 0 || d >= g.dims_) fail("dimension out of range");
        g.add(Production::terminating(g.dims_, d, Label::parse(lhs), token, w));
      } else if (tag == "P") {
        std::string lhs, arrow, pavtext, linkstext, at;
        double w = 0.0;
        is >> lhs >> arrow >> pavtext >> linkstext >> at >> w;
        if (arrow != "->" || at != "@") fail("bad nonterminating production syntax");
        auto mid = linkstext.find(")(");
        if (linkstext.size() < 4 || linkstext.front() != '(' || linkstext.back() != ')' ||
            mid == std::string::npos)
          fail("bad RHS link syntax: " + linkstext);
        Pav pav = Pav::parse(pavtext);
        if (pav.dims() != g.dims_) fail("PAV dimensionality differs from grammar");
        g.add(Production::nonterminating(parse_labels(lhs), pav,
                                         parse_labels(linkstext.substr(1, mid - 1)),
                                         parse_labels(linkstext.substr(mid + 2, linkstext.size() -
                                                                                    mid - 3)),
                                         w));
      } else {
        fail("unknown production tag: " + tag);
      }
    } catch (const UndefinedOperation& e) {
      fail(e.what());
    } catch (const MalformedProduction& e) {
      fail(e.what());
    } catch (const GrammarParseError& e) {
      fail(e.what());
    }
  }
  if (!seen_header) throw GrammarParseError("empty grammar file");
  return g;
}

Gmtg Gmtg::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GrammarParseError("cannot open grammar file: " + path);
  return load(in);
}

void Gmtg::save(std::ostream& out) const {
  out << "gmtg D=" << dims_ << " start=" << labels_str(start_);
  if (normalized_) out << " normalized";
  out << '\n';
  for (const auto& p : productions_) {
    if (p->kind == ProductionKind::Terminating) {
      out << "T d=" << (p->dim + 1) << ' ' << p->lhs[p->dim].str() << " -> " << p->terminal;
    } else {
      out << "P " << labels_str(p->lhs) << " -> " << p->pav.str() << " (" << labels_str(p->y)
          << ")(" << labels_str(p->z) << ")";
    }
    out << " @ " << fmt_double(p->weight) << '\n';
  }
}

void Gmtg::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw GrammarParseError("cannot write grammar file: " + path);
  save(out);
}

// --- WordLexicon ----------------------------------------------------------

namespace {
const std::string kNullToken = "<null>";
std::string to_file_token(const std::string& t) { return t.empty() ? kNullToken : t; }
std::string from_file_token(const std::string& t) { return t == kNullToken ? "" : t; }
}  // namespace

void WordLexicon::set(const std::string& source, const std::string& target, double p) {
  table_[source][target] = p;
}

void WordLexicon::add(const std::string& source, const std::string& target, double p) {
  table_[source][target] += p;
}

double WordLexicon::prob(const std::string& source, const std::string& target) const {
  auto row = table_.find(source);
  if (row == table_.end()) return 0.0;
  auto cell = row->second.find(target);
  return cell == row->second.end() ? 0.0 : cell->second;
}

void WordLexicon::normalize() {
  for (auto& [src, row] : table_) {
    double sum = 0.0;
    for (const auto& [tgt, p] : row) sum += p;
    if (sum > 0)
      for (auto& [tgt, p] : row) p /= sum;
  }
}

double WordLexicon::normalization_error() const {
  double err = 0.0;
  for (const auto& [src, row] : table_) {
    double sum = 0.0;
    for (const auto& [tgt, p] : row) sum += p;
    err = std::max(err, std::abs(sum - 1.0));
  }
  return err;
}

WordLexicon WordLexicon::load(std::istream& in) {
  WordLexicon lex;
  std::string line;
  int lineno = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      if (line != "lexicon")
        throw std::runtime_error("lexicon file must start with a 'lexicon' header");
      seen_header = true;
      continue;
    }
    std::istringstream is(line);
    std::string src, tgt;
    double p = 0.0;
    if (!(is >> src >> tgt >> p))
      throw std::runtime_error("line " + std::to_string(lineno) + ": bad lexicon entry: " + line);
    lex.set(from_file_token(src), from_file_token(tgt), p);
  }
  if (!seen_header) throw std::runtime_error("empty lexicon file");
  return lex;
}

WordLexicon WordLexicon::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon file: " + path);
  return load(in);
}

void WordLexicon::save(std::ostream& out) const {
  out << "lexicon\n";
  for (const auto& [src, row] : table_)
    for (const auto& [tgt, p] : row)
      out << to_file_token(src) << ' ' << to_file_token(tgt) << ' ' << fmt_double(p) << '\n';
}

void WordLexicon::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write lexicon file: " + path);
  save(out);
}

// --- precedence array enumeration -----------------------------------------

std::vector<PrecedenceArray> enumerate_two_link_arrays(int f) {
  // sequences over {1,2}, each index appearing 1..f times, gaps allowed
  // anywhere except that adjacent equal indexes force one; fan-out <= f
  std::vector<PrecedenceArray> out;
  const int max_len = 2 * f;
  std::vector<int> seq;
  std::vector<bool> gaps;  // gap before position i (i >= 1)

  std::function<void()> place_gaps = [&]() {
    int runs = 1;
    for (bool gp : gaps) runs += gp;
    if (runs > f) return;
    for (size_t i = 1; i < seq.size(); ++i)
      if (seq[i] == seq[i - 1] && !gaps[i - 1]) return;
    std::vector<std::vector<int>> runs_out(1);
    for (size_t i = 0; i < seq.size(); ++i) {
      if (i > 0 && gaps[i - 1]) runs_out.emplace_back();
      runs_out.back().push_back(seq[i]);
    }
    out.push_back(PrecedenceArray(std::move(runs_out)));
  };

  std::function<void(size_t)> gap_rec = [&](size_t i) {
    if (i + 1 >= seq.size()) {
      place_gaps();
      return;
    }
    gaps[i] = false;
    gap_rec(i + 1);
    gaps[i] = true;
    gap_rec(i + 1);
  };

  std::function<void(int, int)> seq_rec = [&](int ones, int twos) {
    if (ones >= 1 && twos >= 1) {
      if (seq.size() == 1) {
        place_gaps();
      } else {
        gaps.assign(seq.size() - 1, false);
        gap_rec(0);
      }
    }
    if (static_cast<int>(seq.size()) == max_len) return;
    if (ones < f) {
      seq.push_back(1);
      seq_rec(ones + 1, twos);
      seq.pop_back();
    }
    if (twos < f) {
      seq.push_back(2);
      seq_rec(ones, twos + 1);
      seq.pop_back();
    }
  };
  seq_rec(0, 0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

long long mu(int f) {
  if (f < 1) throw std::runtime_error("mu needs fan-out >= 1");
  static std::map<int, long long> memo;
  auto it = memo.find(f);
  if (it != memo.end()) return it->second;
  long long n = static_cast<long long>(enumerate_two_link_arrays(f).size());
  memo[f] = n;
  return n;
}

long long mu_single(int f) { return f; }

// --- AlignmentEvaluator -----------------------------------------------------

AlignmentEvaluator::AlignmentEvaluator(std::shared_ptr<const Gmtg> structured, WordLexicon lexicon,
                                       int total_dims, int max_fan_out)
    : structured_(std::move(structured)),
      lexicon_(std::move(lexicon)),
      total_dims_(total_dims),
      structured_dims_(structured_ ? structured_->dims() : 0),
      max_fan_out_(max_fan_out) {
  if (!structured_) throw std::runtime_error("alignment evaluator needs a structured grammar");
  if (total_dims_ < structured_dims_ || structured_dims_ < 1)
    throw std::runtime_error("alignment evaluator needs total dims >= structured dims >= 1");
  if (max_fan_out_ < 1) throw std::runtime_error("alignment evaluator needs fan-out >= 1");
}

std::vector<Label> AlignmentEvaluator::start() const {
  std::vector<Label> out = structured_->start();
  out.resize(total_dims_, Label(kLambda));
  return out;
}

std::vector<WeightedProduction> AlignmentEvaluator::terminating(int d,
                                                                const std::string& token) const {
  std::vector<WeightedProduction> out;
  if (d < structured_dims_) {
    for (const auto& wp : structured_->terminating(d, token)) {
      auto lifted = Production::terminating(total_dims_, d, wp.prod->lhs[d], token, wp.weight);
      out.push_back({std::make_shared<const Production>(std::move(lifted)), wp.weight});
    }
  } else {
    // unstructured components use only the dummy nonterminal label
    auto p = Production::terminating(total_dims_, d, Label(kLambda, token), token, 1.0);
    out.push_back({std::make_shared<const Production>(std::move(p)), 1.0});
  }
  return out;
}

std::vector<WeightedProduction> AlignmentEvaluator::terminating_in_dim(int d) const {
  std::vector<WeightedProduction> out;
  if (d < structured_dims_) {
    for (const auto& wp : structured_->terminating_in_dim(d)) {
      auto lifted =
          Production::terminating(total_dims_, d, wp.prod->lhs[d], wp.prod->terminal, wp.weight);
      out.push_back({std::make_shared<const Production>(std::move(lifted)), wp.weight});
    }
  }
  // open vocabulary on unstructured dimensions; nothing to enumerate
  return out;
}

namespace {

// arrays over one or two links, bounded segment counts
bool array_in_domain(const PrecedenceArray& a, bool link1_active, bool link2_active, int f) {
  if (a.is_empty()) return !link1_active && !link2_active;
  if (a.fan_out() > f) return false;
  int c1 = a.count_of(1), c2 = a.count_of(2);
  if (link1_active != (c1 > 0) || link2_active != (c2 > 0)) return false;
  return c1 <= f && c2 <= f;
}

}  // namespace

std::vector<WeightedProduction> AlignmentEvaluator::nonterminating(
    const std::vector<Label>& y, const std::vector<Label>& z,
    const std::vector<PrecedenceArray>& input_arrays) const {
  std::vector<WeightedProduction> out;
  const int I = total_dims_, Ds = structured_dims_, f = max_fan_out_;
  if (static_cast<int>(y.size()) != I || static_cast<int>(z.size()) != I ||
      static_cast<int>(input_arrays.size()) != I)
    return out;

  // unstructured dimensions admit only the dummy label
  for (int d = Ds; d < I; ++d) {
    if (!y[d].inactive() && y[d].symbol != kLambda) return out;
    if (!z[d].inactive() && z[d].symbol != kLambda) return out;
  }

  bool y_struct = false, z_struct = false;
  for (int d = 0; d < Ds; ++d) {
    y_struct = y_struct || !y[d].inactive();
    z_struct = z_struct || !z[d].inactive();
  }

  struct Choice {
    int head;                    // 1 = y, 2 = z
    std::vector<Label> lhs;      // structured part of the LHS
    double struct_weight;
    ProductionPtr source;        // structured production, when one is consumed
  };
  std::vector<Choice> choices;

  if (y_struct && z_struct) {
    // both links grounded in the structured grammar
    std::vector<Label> ys(y.begin(), y.begin() + Ds), zs(z.begin(), z.begin() + Ds);
    std::vector<PrecedenceArray> arrs(input_arrays.begin(), input_arrays.begin() + Ds);
    for (const auto& wp : structured_->nonterminating(ys, zs, arrs)) {
      int head = 2;
      for (const auto& l : wp.prod->y)
        if (l.head_child) head = 1;
      choices.push_back({head, wp.prod->lhs, wp.weight, wp.prod});
    }
  } else if (y_struct != z_struct) {
    // one link has no structured counterpart: it attaches to the other,
    // whose structured labels pass through unchanged
    const auto& active = y_struct ? y : z;
    for (int d = 0; d < Ds; ++d)
      if (!array_in_domain(input_arrays[d], y_struct && !y[d].inactive(),
                           z_struct && !z[d].inactive(), f))
        return out;
    std::vector<Label> lhs(active.begin(), active.begin() + Ds);
    choices.push_back({y_struct ? 1 : 2, std::move(lhs), 1.0, nullptr});
  } else {
    // pure dummy-label node; the second link is the head by convention
    for (int d = 0; d < Ds; ++d)
      if (!input_arrays[d].is_empty()) return out;
    choices.push_back({2, std::vector<Label>(Ds, Label()), 1.0, nullptr});
  }

  for (const auto& choice : choices) {
    const auto& head_link = choice.head == 1 ? y : z;
    const auto& nonhead = choice.head == 1 ? z : y;

    // conditioning head of the non-head link: its first structured head,
    // or NULL when it has none
    std::string nonhead_src;
    for (int d = 0; d < Ds; ++d)
      if (!nonhead[d].inactive() && nonhead_src.empty()) nonhead_src = nonhead[d].head;

    double weight = choice.struct_weight;
    std::vector<Label> lhs = choice.lhs;
    lhs.resize(I);
    bool ok = weight > 0.0;
    for (int d = Ds; ok && d < I; ++d) {
      const bool h_on = !head_link[d].inactive();
      const bool o_on = !nonhead[d].inactive();
      const bool a1 = !y[d].inactive(), a2 = !z[d].inactive();
      if (!array_in_domain(input_arrays[d], a1, a2, f)) {
        ok = false;
        break;
      }
      if (!h_on && !o_on) {
        lhs[d] = Label();
        continue;
      }
      // parent head comes from the head-child when it is active here
      lhs[d] = Label(kLambda, h_on ? head_link[d].head : nonhead[d].head);
      if (o_on) {
        // the non-head's word in this dimension is generated by the
        // translation model from its structured head (NULL if none)
        weight *= lexicon_.prob(nonhead_src, nonhead[d].head);
      } else {
        // the non-head vanishes in this dimension
        weight *= lexicon_.prob(nonhead_src, "");
      }
      // output order drawn uniformly from the admissible arrays
      weight /= static_cast<double>((a1 && a2) ? mu(f) : mu_single(f));
      ok = weight > 0.0;
    }
    if (!ok) continue;

    std::vector<Label> py = strip_labels(y), pz = strip_labels(z);
    for (int d = 0; d < I; ++d) {
      if (choice.head == 1 && !py[d].inactive()) py[d].head_child = true;
      if (choice.head == 2 && !pz[d].inactive()) pz[d].head_child = true;
    }
    auto p = Production::nonterminating(lhs, Pav(input_arrays), std::move(py), std::move(pz),
                                        weight);
    out.push_back({std::make_shared<const Production>(std::move(p)), weight});
  }
  return out;
}


// --- LexiconGrammar ---------------------------------------------------------

LexiconGrammar::LexiconGrammar(const WordLexicon& lexicon, int dims) : dims_(dims) {
  if (dims_ != 2)
    throw std::runtime_error("lexicon grammar supports two dimensions, got " +
                             std::to_string(dims_));
  for (const auto& [src, row] : lexicon.table()) {
    for (const auto& [tgt, p] : row) {
      if (p <= 0.0) continue;
      std::vector<Label> lhs(2);
      std::vector<std::string> terminals(2);
      if (!src.empty()) {
        lhs[0] = Label("S");
        terminals[0] = src;
      }
      if (!tgt.empty()) {
        lhs[1] = Label("S");
        terminals[1] = tgt;
      }
      if (src.empty() && tgt.empty()) continue;
      auto prod = Production::lexical(std::move(lhs), std::move(terminals), p);
      size_t idx = productions_.size();
      productions_.push_back(std::make_shared<const Production>(std::move(prod)));
      for (int d = 0; d < 2; ++d)
        if (!productions_[idx]->terminals[d].empty())
          by_dim_token_[{d, productions_[idx]->terminals[d]}].push_back(idx);
    }
  }
}

std::vector<Label> LexiconGrammar::start() const { return {Label("S"), Label("S")}; }

std::vector<WeightedProduction> LexiconGrammar::lexical(int d, const std::string& token) const {
  std::vector<WeightedProduction> out;
  auto it = by_dim_token_.find({d, token});
  if (it == by_dim_token_.end()) return out;
  for (size_t idx : it->second) out.push_back({productions_[idx], productions_[idx]->weight});
  return out;
}

}  // namespace semparse
