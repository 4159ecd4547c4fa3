#include "semparse/multitree.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace semparse {

MultitreePtr Multitree::clone() const {
  auto out = std::make_unique<Multitree>();
  out->labels = labels;
  out->pav = pav;
  out->dim = dim;
  out->token = token;
  for (const auto& c : children) out->children.push_back(c->clone());
  return out;
}

std::string Multitree::str() const {
  if (is_leaf()) return "(" + std::to_string(dim + 1) + ":" + token + ")";
  std::string out = "(" + labels_str(labels);
  if (!children.empty() && !is_preterminal()) out += "|" + pav.str();
  for (const auto& c : children) out += " " + c->str();
  out += ")";
  return out;
}

namespace {

struct SexprParser {
  const std::string& text;
  size_t pos = 0;

  void skip_space() {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error("multitree syntax error at offset " + std::to_string(pos) + ": " +
                             what);
  }

  std::string until_delim() {
    size_t start = pos;
    while (pos < text.size() && text[pos] != ' ' && text[pos] != '(' && text[pos] != ')') ++pos;
    return text.substr(start, pos - start);
  }

  MultitreePtr node() {
    skip_space();
    if (pos >= text.size() || text[pos] != '(') fail("expected (");
    ++pos;
    auto out = std::make_unique<Multitree>();
    std::string head = until_delim();
    if (head.empty()) fail("empty node head");
    auto bar = head.find('|');
    std::string labels_part = bar == std::string::npos ? head : head.substr(0, bar);
    auto colon = labels_part.find(':');
    if (colon != std::string::npos && labels_part.find(',') == std::string::npos &&
        bar == std::string::npos && labels_part.substr(0, colon).find_first_not_of("0123456789") ==
                                        std::string::npos) {
      // leaf: (d:token)
      out->dim = std::stoi(labels_part.substr(0, colon)) - 1;
      out->token = labels_part.substr(colon + 1);
      skip_space();
      if (pos >= text.size() || text[pos] != ')') fail("expected ) after leaf");
      ++pos;
      return out;
    }
    out->labels = parse_labels(labels_part);
    if (bar != std::string::npos) out->pav = Pav::parse(head.substr(bar + 1));
    while (true) {
      skip_space();
      if (pos >= text.size()) fail("unterminated node");
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      out->children.push_back(node());
    }
    return out;
  }
};

}  // namespace

MultitreePtr Multitree::parse(const std::string& text) {
  SexprParser p{text};
  auto out = p.node();
  p.skip_space();
  if (p.pos != text.size()) p.fail("trailing characters");
  return out;
}

std::vector<std::vector<std::string>> Multitree::segments(int d) const {
  if (is_leaf()) {
    if (dim == d) return {{token}};
    return {};
  }
  if (children.size() == 1) return children[0]->segments(d);
  // internal: splice the children's segments by this node's array
  std::vector<std::vector<std::vector<std::string>>> child_segments;
  for (const auto& c : children) child_segments.push_back(c->segments(d));
  std::vector<size_t> cursor(children.size(), 0);
  std::vector<std::vector<std::string>> out;
  if (d >= pav.dims()) throw LinearizeError("dimension out of range for node " + str());
  for (const auto& run : pav.arrays[d].runs()) {
    std::vector<std::string> segment;
    for (int index : run) {
      size_t c = static_cast<size_t>(index - 1);
      if (c >= children.size()) throw LinearizeError("array index out of range in " + str());
      if (cursor[c] >= child_segments[c].size())
        throw LinearizeError("child " + std::to_string(index) +
                             " has too few segments in dimension " + std::to_string(d + 1));
      const auto& piece = child_segments[c][cursor[c]++];
      segment.insert(segment.end(), piece.begin(), piece.end());
    }
    out.push_back(std::move(segment));
  }
  for (size_t c = 0; c < children.size(); ++c)
    if (cursor[c] != child_segments[c].size())
      throw LinearizeError("child " + std::to_string(c + 1) +
                           " has unconsumed segments in dimension " + std::to_string(d + 1));
  return out;
}

std::vector<std::string> linearize(const Multitree& tree, int dim) {
  auto segs = tree.segments(dim);
  if (segs.empty()) return {};
  if (segs.size() != 1)
    throw LinearizeError("output is not contiguous in dimension " + std::to_string(dim + 1));
  return segs[0];
}

namespace {

MultitreePtr leaf_node(int dim, const std::string& token) {
  auto out = std::make_unique<Multitree>();
  out->dim = dim;
  out->token = token;
  return out;
}

MultitreePtr preterminal_node(const Production& p) {
  auto out = std::make_unique<Multitree>();
  out->labels = strip_labels(p.lhs);
  out->children.push_back(leaf_node(p.dim, p.terminal));
  return out;
}

}  // namespace

MultitreePtr tree_from_derivation(const DerivPtr& root) {
  if (!root) return nullptr;
  if (root->term.kind() == TermKind::Grammar && root->children.empty()) {
    const Production& p = root->term.production();
    if (p.kind == ProductionKind::Terminating) return preterminal_node(p);
    throw std::runtime_error("cannot build a tree from a bare production: " + p.key);
  }
  if (root->term.kind() != TermKind::Nonterminal)
    throw std::runtime_error("derivation root is not an item: " + root->term.sig());

  // locate the production and the item children among the antecedents
  ProductionPtr nt, loaded, lex;
  std::vector<const DerivPtr*> items;
  for (const auto& child : root->children) {
    if (child->term.kind() == TermKind::Grammar) {
      const auto& p = child->term.production_ptr();
      if (p->kind == ProductionKind::Nonterminating)
        nt = p;
      else if (p->kind == ProductionKind::Terminating)
        loaded = p;  // Scan/Load, or the loaded word of a fused inference
      else
        lex = p;
    } else if (child->term.kind() == TermKind::Nonterminal) {
      items.push_back(&child);
    }
  }

  auto out = std::make_unique<Multitree>();
  out->labels = root->term.labels();

  if (lex) {
    // word-alignment link: a flat node with one leaf per active dimension
    for (size_t d = 0; d < lex->terminals.size(); ++d)
      if (!lex->terminals[d].empty())
        out->children.push_back(leaf_node(static_cast<int>(d), lex->terminals[d]));
    return out;
  }
  if (!nt) {
    // Scan or Load consequent: a preterminal over a single leaf
    if (!loaded) throw std::runtime_error("item without a production: " + root->term.sig());
    out->children.push_back(leaf_node(loaded->dim, loaded->terminal));
    return out;
  }

  out->pav = nt->pav;
  MultitreePtr first, second;
  if (items.size() == 2) {
    first = tree_from_derivation(*items[0]);
    second = tree_from_derivation(*items[1]);
  } else if (items.size() == 1 && loaded) {
    // LoadCompose: the loaded preterminal takes the link that matches
    // the terminating production's LHS
    MultitreePtr item_tree = tree_from_derivation(*items[0]);
    MultitreePtr loaded_tree = preterminal_node(*loaded);
    if (strip_labels(nt->z) == strip_labels(loaded->lhs)) {
      first = std::move(item_tree);
      second = std::move(loaded_tree);
    } else {
      first = std::move(loaded_tree);
      second = std::move(item_tree);
    }
  } else {
    throw std::runtime_error("unexpected derivation shape at " + root->term.sig());
  }
  out->children.push_back(std::move(first));
  out->children.push_back(std::move(second));
  return out;
}

MultitreePtr tree_from_value(const Semiring& semiring, const Value& value) {
  if (semiring.is_zero(value)) return nullptr;
  const Derivation* best = nullptr;
  if (semiring.id() == SemiringId::ViterbiDeriv)
    best = &*value.as_deriv();
  else if (semiring.id() == SemiringId::ViterbiNBest)
    best = &value.as_nbest().front();
  else
    throw std::runtime_error("semiring " + semiring.flag() + " carries no derivations");
  if (best->nodes.size() != 1)
    throw std::runtime_error("derivation value is an unrooted fragment");
  return tree_from_derivation(best->nodes[0]);
}

std::vector<MultitreePtr> read_treebank(std::istream& in) {
  std::vector<MultitreePtr> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.push_back(Multitree::parse(line));
  }
  return out;
}

std::vector<MultitreePtr> read_treebank_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open treebank file: " + path);
  return read_treebank(in);
}

void write_treebank(std::ostream& out, const std::vector<MultitreePtr>& trees) {
  for (const auto& t : trees) out << t->str() << '\n';
}

void write_treebank_file(const std::string& path, const std::vector<MultitreePtr>& trees) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write treebank file: " + path);
  write_treebank(out, trees);
}

namespace {

void collect_productions(const Multitree& node, int dims, std::vector<Production>* out) {
  if (node.is_leaf()) throw std::runtime_error("bare leaf node");
  if (static_cast<int>(node.labels.size()) != dims)
    throw std::runtime_error("node dimensionality mismatch: " + node.str());
  if (node.is_preterminal()) {
    const auto& leaf = *node.children[0];
    for (int d = 0; d < dims; ++d)
      if (!node.labels[d].inactive() && d != leaf.dim)
        throw std::runtime_error("preterminal active outside its terminal dimension: " +
                                 node.str());
    out->push_back(Production::terminating(dims, leaf.dim, node.labels[leaf.dim], leaf.token, 1));
    return;
  }
  if (node.children.size() != 2)
    throw std::runtime_error("node arity violates GCNF: " + node.str());
  out->push_back(Production::nonterminating(node.labels, node.pav, node.children[0]->labels,
                                            node.children[1]->labels, 1));
  collect_productions(*node.children[0], dims, out);
  collect_productions(*node.children[1], dims, out);
}

}  // namespace

Gmtg estimate_from_multitreebank(const std::vector<MultitreePtr>& trees, int dims,
                                 const std::vector<Label>& start,
                                 std::vector<std::string>* rejected) {
  std::map<std::string, Production> by_key;
  std::map<std::string, double> counts;
  for (size_t i = 0; i < trees.size(); ++i) {
    std::vector<Production> used;
    try {
      collect_productions(*trees[i], dims, &used);
    } catch (const std::exception& e) {
      if (rejected) rejected->push_back("tree " + std::to_string(i + 1) + ": " + e.what());
      continue;
    }
    for (auto& p : used) {
      by_key.emplace(p.key, p);
      counts[p.key] += 1.0;
    }
  }
  Gmtg g(dims, start);
  for (const auto& [key, p] : by_key) {
    Production copy = p;
    copy.weight = counts.at(key);
    g.add(copy);
  }
  g.normalize_weights();
  return g;
}

}  // namespace semparse
