#include "semparse/label.hpp"

#include <sstream>
#include <stdexcept>

namespace semparse {

std::string Label::str() const {
  if (inactive()) return "_";
  std::string out = symbol;
  if (head_child) out += '*';
  if (!head.empty()) out += '[' + head + ']';
  return out;
}

Label Label::parse(const std::string& text) {
  if (text.empty()) throw std::runtime_error("empty label");
  if (text == "_") return Label();
  Label out;
  std::string body = text;
  auto open = body.find('[');
  if (open != std::string::npos) {
    if (body.back() != ']') throw std::runtime_error("bad label syntax: " + text);
    out.head = body.substr(open + 1, body.size() - open - 2);
    body = body.substr(0, open);
  }
  if (!body.empty() && body.back() == '*') {
    out.head_child = true;
    body.pop_back();
  }
  if (body.empty()) throw std::runtime_error("bad label syntax: " + text);
  out.symbol = body;
  return out;
}

std::string labels_str(const std::vector<Label>& labels) {
  std::string out;
  for (size_t d = 0; d < labels.size(); ++d) {
    if (d) out += ',';
    out += labels[d].str();
  }
  return out;
}

std::vector<Label> parse_labels(const std::string& text) {
  std::vector<Label> out;
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, ',')) out.push_back(Label::parse(part));
  if (out.empty()) throw std::runtime_error("empty label vector: " + text);
  return out;
}

std::vector<Label> strip_labels(const std::vector<Label>& labels) {
  std::vector<Label> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(l.stripped());
  return out;
}

bool all_inactive(const std::vector<Label>& labels) {
  for (const auto& l : labels)
    if (!l.inactive()) return false;
  return true;
}

}  // namespace semparse
