#include "semparse/term.hpp"

#include <functional>

namespace semparse {

namespace {

std::size_t hash_of(const std::string& s) { return std::hash<std::string>()(s); }

}  // namespace

Term Term::terminal(int dim, int pos, const std::string& token, bool reverse) {
  auto d = std::make_shared<Data>();
  d->kind = TermKind::Terminal;
  d->reverse = reverse;
  d->dim = dim;
  d->pos = pos;
  d->token = token;
  d->sig = "<" + std::to_string(dim + 1) + "," + std::to_string(pos) + "," + token + ">";
  if (reverse) d->sig += 'R';
  d->hash = hash_of(d->sig);
  return Term(std::move(d));
}

Term Term::item(std::vector<Label> labels, std::vector<DSpan> spans, bool reverse) {
  auto d = std::make_shared<Data>();
  d->kind = TermKind::Nonterminal;
  d->reverse = reverse;
  d->labels = std::move(labels);
  d->spans = std::move(spans);
  std::string sig = "[" + labels_str(d->labels) + ";";
  for (size_t i = 0; i < d->spans.size(); ++i) {
    if (i) sig += ',';
    sig += d->spans[i].str();
  }
  sig += ']';
  if (reverse) sig += 'R';
  d->sig = std::move(sig);
  d->hash = hash_of(d->sig);
  return Term(std::move(d));
}

Term Term::grammar(ProductionPtr production) {
  auto d = std::make_shared<Data>();
  d->kind = TermKind::Grammar;
  d->sig = "{" + production->key + "}";
  d->production = std::move(production);
  d->hash = hash_of(d->sig);
  return Term(std::move(d));
}

Term Term::reversed(bool flag) const {
  if (!valid() || d_->reverse == flag) return *this;
  if (d_->kind == TermKind::Terminal) return terminal(d_->dim, d_->pos, d_->token, flag);
  return item(d_->labels, d_->spans, flag);
}

int Term::total_width() const {
  if (d_->kind == TermKind::Terminal) return 1;
  int w = 0;
  for (const auto& s : d_->spans) w += s.width();
  return w;
}

unsigned Term::activity_mask() const {
  unsigned mask = 0;
  if (d_->kind == TermKind::Terminal) return 1u << d_->dim;
  for (size_t d = 0; d < d_->labels.size(); ++d)
    if (!d_->labels[d].inactive()) mask |= 1u << d;
  return mask;
}

}  // namespace semparse
