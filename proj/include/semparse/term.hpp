// -*- mode: c++ -*-
//
// Chart terms.  A term is identified by its signature string: two terms
// with equal signatures are the same chart key.

#ifndef SEMPARSE_TERM_HPP
#define SEMPARSE_TERM_HPP

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "semparse/dspan.hpp"
#include "semparse/label.hpp"
#include "semparse/production.hpp"

namespace semparse {

enum class TermKind : unsigned char { Terminal, Nonterminal, Grammar };

class Term {
 public:
  Term() = default;

  // <d,i,t>: word i (1-based) of dimension d (0-based internally).
  static Term terminal(int dim, int pos, const std::string& token, bool reverse = false);
  // [X_1..X_D ; s_1..s_I]: spans may cover fewer dimensions than labels
  // (translation items carry no spans for output dimensions).
  static Term item(std::vector<Label> labels, std::vector<DSpan> spans, bool reverse = false);
  static Term grammar(ProductionPtr production);

  bool valid() const { return d_ != nullptr; }
  TermKind kind() const { return d_->kind; }
  bool reverse() const { return d_->reverse; }
  Term reversed(bool flag) const;  // same payload, reverse flag set to `flag`

  int dim() const { return d_->dim; }
  int pos() const { return d_->pos; }
  const std::string& token() const { return d_->token; }
  const std::vector<Label>& labels() const { return d_->labels; }
  const std::vector<DSpan>& spans() const { return d_->spans; }
  const Production& production() const { return *d_->production; }
  const ProductionPtr& production_ptr() const { return d_->production; }

  bool is_item() const { return valid() && d_->kind == TermKind::Nonterminal; }
  bool is_forward_item() const { return is_item() && !d_->reverse; }
  int total_width() const;       // summed interval width over all spans
  unsigned activity_mask() const;  // bit d set when dimension d is active

  const std::string& sig() const { return d_->sig; }
  std::size_t hash() const { return d_->hash; }

  bool operator==(const Term& o) const {
    return d_ == o.d_ || (d_ && o.d_ && d_->sig == o.d_->sig);
  }
  bool operator!=(const Term& o) const { return !(*this == o); }
  bool operator<(const Term& o) const { return sig() < o.sig(); }

 private:
  struct Data {
    TermKind kind = TermKind::Terminal;
    bool reverse = false;
    int dim = -1;
    int pos = -1;
    std::string token;
    std::vector<Label> labels;
    std::vector<DSpan> spans;
    ProductionPtr production;
    std::string sig;
    std::size_t hash = 0;
  };
  explicit Term(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

}  // namespace semparse

#endif
