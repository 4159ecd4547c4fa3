#include "semparse/multitext.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace semparse {

double Multitext::token_weight(int d, int pos) const {
  if (d >= static_cast<int>(weights.size()) || weights[d].empty()) return 1.0;
  return weights[d][pos - 1];
}

std::string Multitext::line(int d) const {
  std::string out;
  for (size_t i = 0; i < dims[d].size(); ++i) {
    if (i) out += ' ';
    out += dims[d][i];
  }
  return out;
}

namespace {

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

Multitext parse_multitext_block(const std::vector<std::string>& lines) {
  Multitext mt;
  for (const auto& line : lines) {
    auto colon = line.find(':');
    if (colon == std::string::npos || colon < 2 || (line[0] != 'd' && line[0] != 'w'))
      throw std::runtime_error("bad multitext line: " + line);
    int k = std::stoi(line.substr(1, colon - 1));
    auto tokens = split_tokens(line.substr(colon + 1));
    if (line[0] == 'd') {
      if (k != static_cast<int>(mt.dims.size()) + 1)
        throw std::runtime_error("multitext dimensions must be numbered 1..m in order: " + line);
      mt.dims.push_back(std::move(tokens));
    } else {
      if (k < 1 || k > static_cast<int>(mt.dims.size()))
        throw std::runtime_error("weight line before its dimension: " + line);
      mt.weights.resize(mt.dims.size());
      std::vector<double> w;
      for (const auto& t : tokens) w.push_back(std::stod(t));
      if (w.size() != mt.dims[k - 1].size())
        throw std::runtime_error("weight count differs from token count: " + line);
      mt.weights[k - 1] = std::move(w);
    }
  }
  if (mt.dims.empty()) throw std::runtime_error("empty multitext block");
  return mt;
}

Corpus read_corpus(std::istream& in) {
  Corpus corpus;
  std::vector<std::string> block;
  std::string line;
  auto flush = [&]() {
    if (!block.empty()) {
      corpus.push_back(parse_multitext_block(block));
      block.clear();
    }
  };
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty() || line[0] == '#')
      flush();
    else
      block.push_back(line);
  }
  flush();
  return corpus;
}

Corpus read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  return read_corpus(in);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (i) out << '\n';
    const auto& mt = corpus[i];
    for (int d = 0; d < mt.dimensionality(); ++d) {
      out << 'd' << (d + 1) << ':';
      for (const auto& tok : mt.dims[d]) out << ' ' << tok;
      out << '\n';
      if (d < static_cast<int>(mt.weights.size()) && !mt.weights[d].empty()) {
        out << 'w' << (d + 1) << ':';
        for (double w : mt.weights[d]) out << ' ' << w;
        out << '\n';
      }
    }
  }
}

void write_corpus_file(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path);
  write_corpus(out, corpus);
}

}  // namespace semparse
