#include "semparse/production.hpp"

#include <stdexcept>

namespace semparse {

Production Production::terminating(int dims, int dim, Label x, std::string terminal,
                                   double weight) {
  if (dim < 0 || dim >= dims) throw std::runtime_error("terminating production dim out of range");
  if (x.inactive()) throw std::runtime_error("terminating production with inactive LHS");
  Production p;
  p.kind = ProductionKind::Terminating;
  p.lhs.assign(dims, Label());
  p.lhs[dim] = std::move(x);
  p.dim = dim;
  p.terminal = std::move(terminal);
  p.weight = weight;
  p.rebuild_key();
  return p;
}

Production Production::nonterminating(std::vector<Label> lhs, Pav pav, std::vector<Label> y,
                                      std::vector<Label> z, double weight) {
  Production p;
  p.kind = ProductionKind::Nonterminating;
  p.lhs = std::move(lhs);
  p.pav = std::move(pav);
  p.y = std::move(y);
  p.z = std::move(z);
  p.weight = weight;
  const size_t d = p.lhs.size();
  if (p.pav.arrays.size() != d || p.y.size() != d || p.z.size() != d)
    throw std::runtime_error("nonterminating production with mismatched dimensionality");
  p.rebuild_key();
  return p;
}

Production Production::lexical(std::vector<Label> lhs, std::vector<std::string> terminals,
                               double weight) {
  Production p;
  p.kind = ProductionKind::Lexical;
  p.lhs = std::move(lhs);
  p.terminals = std::move(terminals);
  p.weight = weight;
  if (p.terminals.size() != p.lhs.size())
    throw std::runtime_error("lexical production with mismatched dimensionality");
  for (size_t d = 0; d < p.lhs.size(); ++d)
    if (p.lhs[d].inactive() != p.terminals[d].empty())
      throw std::runtime_error("lexical production activity mismatch");
  p.rebuild_key();
  return p;
}

void Production::rebuild_key() {
  switch (kind) {
    case ProductionKind::Terminating:
      key = "T d=" + std::to_string(dim + 1) + " " + lhs[dim].str() + " -> " + terminal;
      break;
    case ProductionKind::Nonterminating:
      key = "P " + labels_str(lhs) + " -> " + pav.str() + " (" + labels_str(y) + ")(" +
            labels_str(z) + ")";
      break;
    case ProductionKind::Lexical: {
      key = "L " + labels_str(lhs) + " ->";
      for (size_t d = 0; d < terminals.size(); ++d)
        key += " " + (terminals[d].empty() ? std::string("_") : terminals[d]);
      break;
    }
  }
}

}  // namespace semparse
