#include "semparse/dspan.hpp"

#include <algorithm>
#include <sstream>

namespace semparse {

namespace {

void fail(const std::string& what) { throw UndefinedOperation(what); }

bool intervals_overlap(const Interval& a, const Interval& b) {
  return a.begin < b.end && b.begin < a.end;
}

}  // namespace

DSpan::DSpan(std::vector<Interval> intervals) : iv_(std::move(intervals)) {
  for (size_t i = 0; i < iv_.size(); ++i) {
    if (iv_[i].begin > iv_[i].end)
      fail("d-span interval with begin > end: " + str());
    if (i + 1 < iv_.size() && iv_[i].end > iv_[i + 1].begin)
      fail("d-span intervals out of order: " + str());
  }
}

bool DSpan::proper() const {
  for (size_t i = 0; i < iv_.size(); ++i) {
    if (iv_[i].begin >= iv_[i].end) return false;
    if (i + 1 < iv_.size() && iv_[i].end >= iv_[i + 1].begin) return false;
  }
  return true;
}

int DSpan::width() const {
  int w = 0;
  for (const auto& v : iv_) w += v.end - v.begin;
  return w;
}

int DSpan::leftmost() const { return iv_.empty() ? 0 : iv_.front().begin; }

bool DSpan::overlaps(const DSpan& other) const {
  for (const auto& a : iv_)
    for (const auto& b : other.iv_)
      if (intervals_overlap(a, b)) return true;
  return false;
}

bool DSpan::covers(const DSpan& other) const {
  // every interval of `other` must lie inside the point set of this d-span
  for (const auto& t : other.iv_) {
    bool inside = false;
    for (const auto& n : iv_) {
      if (n.begin <= t.begin && t.end <= n.end) {
        inside = true;
        break;
      }
    }
    if (!inside) return false;
  }
  return true;
}

std::string DSpan::str() const {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < iv_.size(); ++i) {
    if (i) os << ';';
    os << iv_[i].begin << ',' << iv_[i].end;
  }
  os << ')';
  return os.str();
}

DSpan DSpan::parse(const std::string& text) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')')
    fail("bad d-span syntax: " + text);
  std::string body = text.substr(1, text.size() - 2);
  if (body.empty()) return DSpan();
  std::vector<Interval> iv;
  std::istringstream is(body);
  std::string part;
  while (std::getline(is, part, ';')) {
    auto comma = part.find(',');
    if (comma == std::string::npos) fail("bad d-span interval: " + text);
    iv.push_back({std::stoi(part.substr(0, comma)), std::stoi(part.substr(comma + 1))});
  }
  return DSpan(std::move(iv));
}

PrecedenceArray::PrecedenceArray(std::vector<std::vector<int>> runs) : runs_(std::move(runs)) {
  for (const auto& run : runs_)
    if (run.empty()) fail("precedence array with empty run");
}

std::vector<int> PrecedenceArray::flat() const {
  std::vector<int> out;
  for (const auto& run : runs_) out.insert(out.end(), run.begin(), run.end());
  return out;
}

int PrecedenceArray::count_of(int index) const {
  int n = 0;
  for (const auto& run : runs_)
    for (int i : run) n += (i == index);
  return n;
}

PrecedenceArray PrecedenceArray::relabeled(const std::vector<int>& old_to_new) const {
  std::vector<std::vector<int>> runs = runs_;
  for (auto& run : runs)
    for (int& i : run) {
      if (i < 1 || i > static_cast<int>(old_to_new.size()) || old_to_new[i - 1] == 0)
        fail("relabel map missing index " + std::to_string(i));
      i = old_to_new[i - 1];
    }
  return PrecedenceArray(std::move(runs));
}

std::string PrecedenceArray::str() const {
  std::ostringstream os;
  os << '[';
  for (size_t r = 0; r < runs_.size(); ++r) {
    if (r) os << ';';
    for (size_t i = 0; i < runs_[r].size(); ++i) {
      if (i) os << ',';
      os << runs_[r][i];
    }
  }
  os << ']';
  return os.str();
}

PrecedenceArray PrecedenceArray::parse(const std::string& text) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']')
    fail("bad precedence array syntax: " + text);
  std::string body = text.substr(1, text.size() - 2);
  if (body.empty()) return PrecedenceArray();
  std::vector<std::vector<int>> runs;
  std::istringstream is(body);
  std::string runtext;
  while (std::getline(is, runtext, ';')) {
    std::vector<int> run;
    std::istringstream rs(runtext);
    std::string tok;
    while (std::getline(rs, tok, ',')) run.push_back(std::stoi(tok));
    runs.push_back(std::move(run));
  }
  return PrecedenceArray(std::move(runs));
}

int Pav::fan_out() const {
  int f = 0;
  for (const auto& a : arrays) f += a.fan_out();
  return f;
}

std::string Pav::str() const {
  std::string out = "[";
  for (size_t d = 0; d < arrays.size(); ++d) {
    if (d) out += '|';
    if (!arrays[d].is_empty()) out += arrays[d].str();
  }
  out += ']';
  return out;
}

Pav Pav::parse(const std::string& text) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']')
    fail("bad PAV syntax: " + text);
  std::string body = text.substr(1, text.size() - 2);
  std::vector<PrecedenceArray> arrays;
  std::string part;
  size_t start = 0;
  auto flush = [&](size_t end) {
    std::string a = body.substr(start, end - start);
    arrays.push_back(a.empty() ? PrecedenceArray() : PrecedenceArray::parse(a));
  };
  for (size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '|') {
      flush(i);
      start = i + 1;
    }
  }
  flush(body.size());
  if (body.empty()) arrays.assign(1, PrecedenceArray());
  return Pav(std::move(arrays));
}

// --- operators --------------------------------------------------------

namespace {

// merge the two interval lists positionally; tags tell which input each came from
struct Tagged {
  Interval iv;
  int tag;
};

bool merge_tagged(const DSpan& a, const DSpan& b, std::vector<Tagged>* out) {
  if (a.overlaps(b)) return false;
  out->clear();
  size_t i = 0, j = 0;
  const auto& ia = a.intervals();
  const auto& ib = b.intervals();
  while (i < ia.size() || j < ib.size()) {
    bool take_a;
    if (i == ia.size())
      take_a = false;
    else if (j == ib.size())
      take_a = true;
    else
      take_a = ia[i].begin < ib[j].begin || (ia[i].begin == ib[j].begin && ia[i].end <= ib[j].end);
    if (take_a)
      out->push_back({ia[i++], 1});
    else
      out->push_back({ib[j++], 2});
  }
  return true;
}

}  // namespace

bool try_concat(const DSpan& a, const DSpan& b, DSpan* out) {
  std::vector<Tagged> merged;
  if (!merge_tagged(a, b, &merged)) return false;
  std::vector<Interval> iv;
  for (const auto& t : merged) {
    if (!iv.empty() && iv.back().end == t.iv.begin)
      iv.back().end = t.iv.end;  // touching intervals merge
    else
      iv.push_back(t.iv);
  }
  *out = DSpan(std::move(iv));
  return true;
}

DSpan concat(const DSpan& a, const DSpan& b) {
  DSpan out;
  if (!try_concat(a, b, &out))
    fail("concat of overlapping d-spans " + a.str() + " + " + b.str());
  return out;
}

bool try_relativize(const DSpan& a, const DSpan& b, PrecedenceArray* out) {
  std::vector<Tagged> merged;
  if (!merge_tagged(a, b, &merged)) return false;
  std::vector<std::vector<int>> runs;
  for (size_t k = 0; k < merged.size(); ++k) {
    if (k == 0 || merged[k - 1].iv.end < merged[k].iv.begin)
      runs.emplace_back();
    runs.back().push_back(merged[k].tag);
  }
  *out = PrecedenceArray(std::move(runs));
  return true;
}

PrecedenceArray relativize(const DSpan& a, const DSpan& b) {
  PrecedenceArray out;
  if (!try_relativize(a, b, &out))
    fail("relativize of overlapping d-spans " + a.str() + " ~ " + b.str());
  return out;
}

bool try_subtract(const DSpan& nu, const DSpan& tau, DSpan* out) {
  if (!nu.covers(tau)) return false;
  std::vector<Interval> result;
  size_t t = 0;
  const auto& tv = tau.intervals();
  for (const auto& n : nu.intervals()) {
    int cursor = n.begin;
    while (t < tv.size() && tv[t].end <= n.end && tv[t].begin >= n.begin) {
      if (tv[t].begin > cursor) result.push_back({cursor, tv[t].begin});
      cursor = tv[t].end;
      ++t;
    }
    if (cursor < n.end) result.push_back({cursor, n.end});
  }
  *out = DSpan(std::move(result));
  return true;
}

DSpan subtract(const DSpan& nu, const DSpan& tau) {
  DSpan out;
  if (!try_subtract(nu, tau, &out))
    fail("subtract with subtrahend not covered: " + nu.str() + " - " + tau.str());
  return out;
}

PrecedenceArray rev_relativize(const DSpan& nu, const DSpan& tau) {
  return relativize(subtract(nu, tau), tau);
}

std::vector<DSpan> concat(const std::vector<DSpan>& a, const std::vector<DSpan>& b) {
  if (a.size() != b.size()) fail("d-span vectors of unequal dimensionality");
  std::vector<DSpan> out(a.size());
  for (size_t d = 0; d < a.size(); ++d) out[d] = concat(a[d], b[d]);
  return out;
}

Pav relativize(const std::vector<DSpan>& a, const std::vector<DSpan>& b) {
  if (a.size() != b.size()) fail("d-span vectors of unequal dimensionality");
  std::vector<PrecedenceArray> arrays(a.size());
  for (size_t d = 0; d < a.size(); ++d) arrays[d] = relativize(a[d], b[d]);
  return Pav(std::move(arrays));
}

std::vector<DSpan> subtract(const std::vector<DSpan>& nu, const std::vector<DSpan>& tau) {
  if (nu.size() != tau.size()) fail("d-span vectors of unequal dimensionality");
  std::vector<DSpan> out(nu.size());
  for (size_t d = 0; d < nu.size(); ++d) out[d] = subtract(nu[d], tau[d]);
  return out;
}

// --- join and normal form ----------------------------------------------

std::vector<std::vector<std::vector<JoinedSymbol>>> join(const Pav& pav, const LinkMatrix& links) {
  if (pav.arrays.size() != links.size())
    throw MalformedProduction("PAV and link vector dimensionality differ");
  std::vector<std::vector<std::vector<JoinedSymbol>>> out(links.size());
  for (size_t d = 0; d < links.size(); ++d) {
    const auto& row = links[d];
    for (const auto& run : pav.arrays[d].runs()) {
      std::vector<JoinedSymbol> symbols;
      for (int index : run) {
        if (index < 1 || index > static_cast<int>(row.size()))
          throw MalformedProduction("precedence array index " + std::to_string(index) +
                                    " out of range in dimension " + std::to_string(d + 1));
        if (row[index - 1].empty())
          throw MalformedProduction("precedence array references inactive link " +
                                    std::to_string(index) + " in dimension " + std::to_string(d + 1));
        symbols.push_back({row[index - 1], index});
      }
      out[d].push_back(std::move(symbols));
    }
  }
  return out;
}

NormalizedPav normalize_pav(const Pav& pav, const LinkMatrix& links) {
  size_t columns = 0;
  for (const auto& row : links) columns = std::max(columns, row.size());
  for (const auto& row : links)
    if (row.size() != columns) throw MalformedProduction("ragged link vector");

  // assign new indexes in order of first appearance across the concatenated arrays
  std::vector<int> old_to_new(columns, 0);
  int next = 1;
  for (const auto& array : pav.arrays) {
    for (int index : array.flat()) {
      if (index < 1 || index > static_cast<int>(columns))
        throw MalformedProduction("precedence array index out of range");
      if (old_to_new[index - 1] == 0) old_to_new[index - 1] = next++;
    }
  }
  for (size_t c = 0; c < columns; ++c)
    if (old_to_new[c] == 0)
      throw MalformedProduction("link column " + std::to_string(c + 1) +
                                " never referenced by any precedence array");

  std::vector<PrecedenceArray> arrays;
  arrays.reserve(pav.arrays.size());
  for (const auto& array : pav.arrays) arrays.push_back(array.relabeled(old_to_new));

  LinkMatrix permuted(links.size(), std::vector<std::string>(columns));
  for (size_t d = 0; d < links.size(); ++d)
    for (size_t c = 0; c < columns; ++c) permuted[d][old_to_new[c] - 1] = links[d][c];

  return {Pav(std::move(arrays)), std::move(permuted), std::move(old_to_new)};
}

}  // namespace semparse
