// -*- mode: c++ -*-

#ifndef SEMPARSE_PRODUCTION_HPP
#define SEMPARSE_PRODUCTION_HPP

#include <memory>
#include <string>
#include <vector>

#include "semparse/dspan.hpp"
#include "semparse/label.hpp"

namespace semparse {

// Terminating: one active dimension, LHS nonterminal rewrites to one
// terminal there.  Nonterminating: LHS link rewrites to exactly two RHS
// links arranged by a PAV.  Lexical: degenerate form used for word
// alignment; the start link rewrites to one terminal per active
// dimension in a single step.
enum class ProductionKind : unsigned char { Terminating, Nonterminating, Lexical };

struct Production {
  ProductionKind kind = ProductionKind::Terminating;
  std::vector<Label> lhs;  // D labels

  // Terminating
  int dim = -1;  // 0-based active dimension
  std::string terminal;

  // Nonterminating
  Pav pav;
  std::vector<Label> y, z;  // first and second RHS link

  // Lexical
  std::vector<std::string> terminals;  // per dimension; "" = inactive

  double weight = 0.0;
  std::string key;  // canonical serialization without the weight

  int dims() const { return static_cast<int>(lhs.size()); }
  int fan_out() const { return kind == ProductionKind::Nonterminating ? pav.fan_out() : 1; }

  static Production terminating(int dims, int dim, Label x, std::string terminal, double weight);
  static Production nonterminating(std::vector<Label> lhs, Pav pav, std::vector<Label> y,
                                   std::vector<Label> z, double weight);
  static Production lexical(std::vector<Label> lhs, std::vector<std::string> terminals,
                            double weight);

  void rebuild_key();
};

using ProductionPtr = std::shared_ptr<const Production>;

struct WeightedProduction {
  ProductionPtr prod;
  double weight = 0.0;
};

}  // namespace semparse

#endif
